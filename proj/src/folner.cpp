#include "slrank/folner.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "slrank/errors.hpp"

namespace slrank {

AmenableGroup AmenableGroup::free_abelian(unsigned d) {
  if (d == 0 || d > 8) throw usage_error("free abelian rank must be in 1..8");
  AmenableGroup g;
  g.d_ = d;
  return g;
}

AmenableGroup AmenableGroup::heisenberg() {
  AmenableGroup g;
  g.kind_ = Kind::heisenberg;
  g.d_ = 3;
  return g;
}

AmenableGroup AmenableGroup::parse(std::string_view text) {
  if (text == "heisenberg") return heisenberg();
  if (text.rfind("z:", 0) == 0) {
    try {
      return free_abelian(static_cast<unsigned>(std::stoul(std::string(text.substr(2)))));
    } catch (const std::logic_error&) {
    }
  }
  if (text == "z") return free_abelian(1);
  throw usage_error("unknown group '" + std::string(text) + "' (z:D or heisenberg)");
}

std::string AmenableGroup::name() const {
  return kind_ == Kind::heisenberg ? "heisenberg" : "z:" + std::to_string(d_);
}

GroupCode AmenableGroup::mul(const GroupCode& x, const GroupCode& y) const {
  GroupCode z(arity());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
  if (kind_ == Kind::heisenberg) z[2] += x[0] * y[1];
  return z;
}

GroupCode AmenableGroup::inverse(const GroupCode& x) const {
  GroupCode z(arity());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = -x[i];
  if (kind_ == Kind::heisenberg) z[2] = x[0] * x[1] - x[2];
  return z;
}

GroupCode AmenableGroup::parse_element(std::string_view text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw usage_error("group element must look like (a,b,..)");
  GroupCode x;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      x.push_back(std::stoll(part, &used));
      if (used != part.size()) throw usage_error("");
    } catch (const std::exception&) {
      throw usage_error("bad coordinate '" + part + "' in " + s);
    }
  }
  if (x.size() != arity()) throw usage_error(s + " needs " + std::to_string(arity()) + " coordinates");
  return x;
}

std::string AmenableGroup::format(const GroupCode& x) const {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

std::int64_t AmenableGroup::folner_constant(const GroupCode& h) const {
  if (kind_ == Kind::heisenberg) return 2 * std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]);
  std::int64_t m = 0;
  for (auto v : h) m = std::max(m, std::abs(v));
  return static_cast<std::int64_t>(d_) * m;
}

std::vector<std::uint64_t> FolnerSpec::box(unsigned n) const {
  if (n > 30) throw resource_error("level " + std::to_string(n) + " is out of range");
  const std::uint64_t side = std::uint64_t{1} << n;
  std::vector<std::uint64_t> b(group_.arity(), side);
  if (group_.kind() == AmenableGroup::Kind::heisenberg) b[2] = side * side;
  std::uint64_t total = 1;
  for (auto s : b) {
    if (total > cap_ / s + 1) throw resource_error("|F_" + std::to_string(n) + "| exceeds the cap " + std::to_string(cap_));
    total *= s;
  }
  if (total > cap_)
    throw resource_error("|F_" + std::to_string(n) + "| = " + std::to_string(total) + " exceeds the cap " +
                         std::to_string(cap_));
  return b;
}

std::uint64_t FolnerSpec::size(unsigned n) const {
  std::uint64_t t = 1;
  for (auto s : box(n)) t *= s;
  return t;
}

std::optional<std::uint64_t> FolnerSpec::index(const GroupCode& x, unsigned n) const {
  const auto b = box(n);
  std::uint64_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (x[i] < 0 || static_cast<std::uint64_t>(x[i]) >= b[i]) return std::nullopt;
    idx += static_cast<std::uint64_t>(x[i]) * stride;
    stride *= b[i];
  }
  return idx;
}

GroupCode FolnerSpec::element(std::uint64_t idx, unsigned n) const {
  const auto b = box(n);
  GroupCode x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    x[i] = static_cast<std::int64_t>(idx % b[i]);
    idx /= b[i];
  }
  return x;
}

std::vector<GroupCode> FolnerSpec::translates(unsigned n) const {
  if (!tiles()) throw usage_error("Heisenberg boxes do not tile under translation");
  const std::size_t d = group_.arity();
  const auto side = static_cast<std::int64_t>(std::uint64_t{1} << n);
  std::vector<GroupCode> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    GroupCode c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = (mask >> i & 1u) ? side : 0;
    out.push_back(c);
  }
  return out;
}

MatF SparseColumns::to_dense() const {
  MatF m(field, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : cols[c]) m(r, c) = v;
  return m;
}

std::size_t SparseColumns::nonzero_columns() const {
  return static_cast<std::size_t>(std::count_if(cols.begin(), cols.end(), [](const auto& c) { return !c.empty(); }));
}

namespace {

using SparseCol = std::vector<std::pair<std::uint32_t, Fq>>;

// a + s b on sorted sparse columns.
SparseCol axpy(const SparseCol& a, Fq s, const SparseCol& b, const Field& f) {
  SparseCol out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, f.mul(s, b[j].second));
      ++j;
    } else {
      const Fq v = f.add(a[i].second, f.mul(s, b[j].second));
      if (v.v) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

// Column elimination keyed by the lowest row of each reduced column.
std::size_t rank(const SparseColumns& m) {
  const Field& f = *m.field;
  std::vector<SparseCol> pivots(m.rows);
  std::vector<bool> used(m.rows, false);
  std::size_t r = 0;
  for (const auto& col : m.cols) {
    SparseCol v = col;
    while (!v.empty()) {
      const auto [row, val] = v.front();
      if (!used[row]) {
        used[row] = true;
        pivots[row] = std::move(v);
        ++r;
        break;
      }
      const SparseCol& p = pivots[row];
      v = axpy(v, f.neg(f.div(val, p.front().second)), p, f);
    }
  }
  return r;
}

SparseColumns operator-(const SparseColumns& a, const SparseColumns& b) {
  if (a.rows != b.rows || a.cols.size() != b.cols.size() || !same_field(*a.field, *b.field))
    throw usage_error("sparse difference of mismatched matrices");
  SparseColumns out{a.field, a.rows, {}};
  out.cols.reserve(a.cols.size());
  for (std::size_t c = 0; c < a.cols.size(); ++c) out.cols.push_back(axpy(a.cols[c], a.field->neg(Fq{1}), b.cols[c], *a.field));
  return out;
}

GroupRingElement GroupRingElement::parse(std::string_view text, const AmenableGroup& g, const Field& f) {
  GroupRingElement a;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty() || s == "0") return a;
  std::size_t pos = 0;
  while (pos < s.size()) {
    // A term ends at the '+' that follows its closing parenthesis.
    const std::size_t close = s.find(')', s.find('(', pos));
    if (close == std::string::npos) throw usage_error("group ring term without an element in '" + s + "'");
    const std::string term = s.substr(pos, close + 1 - pos);
    const std::size_t star = term.find('*');
    Fq coef{1};
    std::string elem = term;
    if (star != std::string::npos) {
      coef = f.parse(term.substr(0, star));
      elem = term.substr(star + 1);
    }
    const GroupCode x = g.parse_element(elem);
    const Fq sum = f.add(a.coeffs.count(x) ? a.coeffs[x] : Fq{0}, coef);
    if (sum.v) a.coeffs[x] = sum;
    else a.coeffs.erase(x);
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != '+') throw usage_error("expected '+' in '" + s + "'");
      ++pos;
    }
  }
  return a;
}

SparseColumns folner_rep(const GroupCode& h, const FolnerSpec& spec, unsigned n, const FieldPtr& field) {
  return ring_rep(GroupRingElement::single(h), spec, n, field);
}

std::uint64_t folner_domain(const GroupCode& h, const FolnerSpec& spec, unsigned n) {
  return ring_domain(GroupRingElement::single(h), spec, n);
}

SparseColumns ring_rep(const GroupRingElement& a, const FolnerSpec& spec, unsigned n, const FieldPtr& field) {
  const std::uint64_t size = spec.size(n);
  const AmenableGroup& g = spec.group();
  SparseColumns m{field, size, std::vector<SparseCol>(size)};
  for (std::uint64_t xi = 0; xi < size; ++xi) {
    const GroupCode x = spec.element(xi, n);
    SparseCol col;
    bool inside = true;
    for (const auto& [s, c] : a.coeffs) {
      const auto idx = spec.index(g.mul(s, x), n);
      if (!idx) {
        inside = false;
        break;
      }
      col.emplace_back(static_cast<std::uint32_t>(*idx), c);
    }
    if (!inside) continue;
    std::sort(col.begin(), col.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    m.cols[xi] = std::move(col);
  }
  return m;
}

std::uint64_t ring_domain(const GroupRingElement& a, const FolnerSpec& spec, unsigned n) {
  const std::uint64_t size = spec.size(n);
  std::uint64_t count = 0;
  for (std::uint64_t xi = 0; xi < size; ++xi) {
    const GroupCode x = spec.element(xi, n);
    if (std::all_of(a.coeffs.begin(), a.coeffs.end(),
                    [&](const auto& sc) { return spec.index(spec.group().mul(sc.first, x), n).has_value(); }))
      ++count;
  }
  return count;
}

NormalizedRank normalized_rank(const GroupRingElement& a, const FolnerSpec& spec, unsigned n, const FieldPtr& field) {
  NormalizedRank r;
  r.size = spec.size(n);
  r.rank = rank(ring_rep(a, spec, n, field));
  r.domain = ring_domain(a, spec, n);
  r.value = Rational(static_cast<std::int64_t>(r.rank), static_cast<std::int64_t>(r.size));
  return r;
}

std::vector<ProfilePoint> discreteness_profile(const GroupCode& g, const GroupCode& h, const FolnerSpec& spec,
                                               const std::vector<unsigned>& levels, const FieldPtr& field) {
  std::vector<ProfilePoint> out;
  for (unsigned n : levels) {
    ProfilePoint p;
    p.level = n;
    p.size = spec.size(n);
    p.rank = rank(folner_rep(g, spec, n, field) - folner_rep(h, spec, n, field));
    p.distance = Rational(static_cast<std::int64_t>(p.rank), static_cast<std::int64_t>(p.size));
    out.push_back(p);
  }
  return out;
}

NestingReport nesting_check(const FolnerSpec& spec, const GroupCode& h, unsigned n, const FieldPtr& field) {
  if (!spec.tiles()) throw usage_error("nesting check needs an exact tiling (Z^d)");
  const std::uint64_t big = spec.size(n + 1);
  const SparseColumns small = folner_rep(h, spec, n, field);
  SparseColumns promoted{field, big, std::vector<SparseCol>(big)};
  const auto tiles = spec.translates(n);
  const AmenableGroup& g = spec.group();
  for (const auto& c : tiles)
    for (std::uint64_t xi = 0; xi < small.cols.size(); ++xi) {
      if (small.cols[xi].empty()) continue;
      const GroupCode x = spec.element(xi, n);
      const GroupCode target = g.mul(spec.element(small.cols[xi].front().first, n), c);
      promoted.cols[*spec.index(g.mul(x, c), n + 1)] = {{static_cast<std::uint32_t>(*spec.index(target, n + 1)), Fq{1}}};
    }
  NestingReport rep;
  rep.level = n;
  const auto diff = rank(promoted - folner_rep(h, spec, n + 1, field));
  rep.distance = Rational(static_cast<std::int64_t>(diff), static_cast<std::int64_t>(big));
  const std::uint64_t kept = tiles.size() * folner_domain(h, spec, n);
  rep.boundary = Rational(static_cast<std::int64_t>(big - kept), static_cast<std::int64_t>(big));
  return rep;
}

}  // namespace slrank
