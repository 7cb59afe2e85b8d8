#include "slrank/groups.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "slrank/errors.hpp"

namespace slrank {

namespace {

constexpr std::size_t kCayleyLimit = 2500;

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

}  // namespace

std::optional<std::uint64_t> sl_order(std::size_t n, std::uint64_t q) {
  if (n == 0 || q < 2) return std::nullopt;
  std::uint64_t order = 1, qi = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (mul_overflows(qi, q, qi)) return std::nullopt;
    // q^{i-1} from the unipotent part, q^i - 1 from the torus, for i >= 2.
    if (i >= 2) {
      std::uint64_t unip = 1;
      for (std::size_t k = 1; k < i; ++k)
        if (mul_overflows(unip, q, unip)) return std::nullopt;
      if (mul_overflows(order, unip, order) || mul_overflows(order, qi - 1, order)) return std::nullopt;
    }
  }
  return order;
}

std::uint64_t GroupTable::key(const std::uint32_t* e) const {
  std::uint64_t k = 0;
  for (std::size_t i = n_ * n_; i-- > 0;) k = k * field_->order() + e[i];
  return k;
}

MatF GroupTable::element(Index i) const {
  MatF m(field_, n_, n_);
  const std::uint32_t* e = entries_.data() + std::size_t{i} * n_ * n_;
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) m(r, c) = Fq{e[r * n_ + c]};
  return m;
}

std::optional<GroupTable::Index> GroupTable::index_of(const MatF& m) const {
  if (m.rows() != n_ || m.cols() != n_ || !same_field(m.field(), *field_)) return std::nullopt;
  std::vector<std::uint32_t> e(n_ * n_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = m.data()[i].v;
  const auto it = index_.find(key(e.data()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GroupTable::Index GroupTable::mul_slow(Index a, Index b) const {
  const Field& f = *field_;
  const std::size_t nn = n_ * n_;
  const std::uint32_t* x = entries_.data() + std::size_t{a} * nn;
  const std::uint32_t* y = entries_.data() + std::size_t{b} * nn;
  std::uint32_t z[64];
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) {
      Fq s{0};
      for (std::size_t k = 0; k < n_; ++k) s = f.add(s, f.mul(Fq{x[r * n_ + k]}, Fq{y[k * n_ + c]}));
      z[r * n_ + c] = s.v;
    }
  return index_.at(key(z));
}

GroupTable::Index GroupTable::mul(Index a, Index b) const {
  if (!cayley_.empty()) return cayley_[std::size_t{a} * order() + b];
  return mul_slow(a, b);
}

GroupTable GroupTable::enumerate(std::size_t n, FieldPtr field, std::uint64_t cap) {
  if (n == 0 || n > 8) throw usage_error("group enumeration supports 1 <= n <= 8");
  const std::uint64_t q = field->order();
  const auto predicted = sl_order(n, q);
  if (!predicted || *predicted > cap)
    throw resource_error("|SL_" + std::to_string(n) + "(" + std::to_string(q) + ")| = " +
                         (predicted ? std::to_string(*predicted) : std::string("overflow")) +
                         " exceeds the enumeration cap " + std::to_string(cap));
  std::uint64_t radix = 1;
  for (std::size_t i = 0; i < n * n; ++i)
    if (mul_overflows(radix, q, radix)) throw resource_error("matrix keys do not fit in 64 bits");

  GroupTable g;
  g.n_ = n;
  g.field_ = field;
  const std::size_t nn = n * n;
  auto insert = [&g, nn](const std::vector<std::uint32_t>& e) -> std::pair<Index, bool> {
    const auto [it, fresh] = g.index_.try_emplace(g.key(e.data()), static_cast<Index>(g.index_.size()));
    if (fresh) g.entries_.insert(g.entries_.end(), e.begin(), e.begin() + static_cast<std::ptrdiff_t>(nn));
    return {it->second, fresh};
  };

  std::vector<std::uint32_t> id(nn, 0);
  for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1;
  insert(id);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::uint32_t lam = 1; lam < q; ++lam) {
        auto t = id;
        t[i * n + j] = lam;
        g.generators_.push_back(insert(t).first);
      }
    }

  const Field& f = *field;
  std::vector<std::uint32_t> prod(nn);
  for (std::size_t head = 0; head < g.index_.size(); ++head) {
    for (const Index gen : g.generators_) {
      const std::uint32_t* x = g.entries_.data() + head * nn;
      const std::uint32_t* y = g.entries_.data() + std::size_t{gen} * nn;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          Fq s{0};
          for (std::size_t k = 0; k < n; ++k) s = f.add(s, f.mul(Fq{x[r * n + k]}, Fq{y[k * n + c]}));
          prod[r * n + c] = s.v;
        }
      insert(prod);
    }
  }
  if (g.index_.size() != *predicted)
    throw numeric_error("enumeration found " + std::to_string(g.index_.size()) + " elements, expected " +
                        std::to_string(*predicted));

  const std::size_t order = g.index_.size();
  g.inverse_.resize(order);
  for (std::size_t i = 0; i < order; ++i) g.inverse_[i] = *g.index_of(*det_inv(g.element(static_cast<Index>(i))).inverse);

  if (order <= kCayleyLimit) {
    g.cayley_.resize(order * order);
    for (std::size_t a = 0; a < order; ++a)
      for (std::size_t b = 0; b < order; ++b)
        g.cayley_[a * order + b] = g.mul_slow(static_cast<Index>(a), static_cast<Index>(b));
  }
  return g;
}

ConjClasses conjugacy_classes(const GroupTable& g) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  ConjClasses cc;
  cc.class_of.assign(g.order(), kUnset);
  std::vector<GroupTable::Index> stack;
  for (GroupTable::Index x = 0; x < g.order(); ++x) {
    if (cc.class_of[x] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(cc.reps.size());
    cc.reps.push_back(x);
    std::uint64_t size = 0;
    cc.class_of[x] = id;
    stack.assign(1, x);
    while (!stack.empty()) {
      const GroupTable::Index y = stack.back();
      stack.pop_back();
      ++size;
      for (const auto s : g.generators()) {
        const GroupTable::Index c = g.mul(g.mul(s, y), g.inv(s));
        if (cc.class_of[c] == kUnset) {
          cc.class_of[c] = id;
          stack.push_back(c);
        }
      }
    }
    cc.sizes.push_back(size);
  }
  cc.inverse_class.resize(cc.count());
  for (std::size_t c = 0; c < cc.count(); ++c) cc.inverse_class[c] = cc.class_of[g.inv(cc.reps[c])];
  return cc;
}

StructureConstants::StructureConstants(const GroupTable& g, const ConjClasses& cc)
    : r_(cc.count()), a_(r_ * r_ * r_, 0) {
  for (std::size_t k = 0; k < r_; ++k) {
    const auto z = cc.reps[k];
    for (GroupTable::Index x = 0; x < g.order(); ++x) {
      const std::size_t i = cc.class_of[x], j = cc.class_of[g.left_div(x, z)];
      ++a_[(i * r_ + j) * r_ + k];
    }
  }
}

std::optional<unsigned> covering_number(const ConjClasses& cc, const StructureConstants& a,
                                        std::size_t cls) {
  const std::size_t r = cc.count();
  if (cls >= r) throw usage_error("class index out of range");
  std::vector<bool> support(r, false);
  support[cls] = true;
  std::vector<std::vector<bool>> seen{support};
  for (unsigned m = 1;; ++m) {
    if (std::all_of(support.begin(), support.end(), [](bool b) { return b; })) return m;
    std::vector<bool> next(r, false);
    for (std::size_t i = 0; i < r; ++i) {
      if (!support[i]) continue;
      for (std::size_t k = 0; k < r; ++k)
        if (a(i, cls, k) > 0) next[k] = true;
    }
    if (std::find(seen.begin(), seen.end(), next) != seen.end()) return std::nullopt;
    seen.push_back(next);
    support = std::move(next);
  }
}

CenterReport group_center(const GroupTable& g) {
  CenterReport rep;
  for (GroupTable::Index x = 0; x < g.order(); ++x) {
    const bool commutes = std::all_of(g.generators().begin(), g.generators().end(),
                                      [&](auto s) { return g.mul(x, s) == g.mul(s, x); });
    if (commutes) rep.center.push_back(x);
  }
  const Field& f = *g.field();
  for (std::uint32_t z = 1; z < f.order(); ++z) {
    if (f.pow(Fq{z}, g.n()) != f.one()) continue;
    const auto idx = g.index_of(MatF::scalar(g.field(), g.n(), Fq{z}));
    if (!idx) throw numeric_error("scalar matrix of determinant one missing from the group");
    rep.scalars.push_back(*idx);
  }
  std::sort(rep.scalars.begin(), rep.scalars.end());
  return rep;
}

}  // namespace slrank
