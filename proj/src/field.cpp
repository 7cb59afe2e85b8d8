#include "slrank/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "slrank/errors.hpp"

namespace slrank {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimePower PrimePower::make(std::uint32_t p, std::uint32_t h) {
  if (!is_prime(p)) throw usage_error("not a prime: " + std::to_string(p));
  if (h == 0) throw usage_error("field degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < h; ++i) {
    q *= p;
    if (q >= (std::uint64_t{1} << 32)) throw usage_error("field order must be below 2^32");
  }
  return PrimePower{p, h, q};
}

PrimePower PrimePower::from_order(std::uint64_t q) {
  if (q < 2) throw usage_error("field order must be at least 2");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t h = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++h;
  }
  if (r != 1) throw usage_error("not a prime power: " + std::to_string(q));
  return make(static_cast<std::uint32_t>(p), h);
}

// ---------------------------------------------------------------------------
// Polynomials over Z/p, low degree first, no trailing zeros.

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    const std::int64_t qt = r / nr;
    t -= qt * nt;
    std::swap(t, nt);
    r -= qt * nr;
    std::swap(r, nr);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint32_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      const std::uint64_t sub = c * f[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(c), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

std::string join_coords(const std::vector<std::uint32_t>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  s += ')';
  return s;
}

}  // namespace

bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  // Ben-Or: for i = 1..deg/2, gcd(x^{p^i} - x, f) must be 1.
  Poly xp{0, 1};
  for (std::size_t i = 1; i <= deg / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    Poly g = poly_gcd(f, poly_sub(xp, Poly{0, 1}, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

FieldPtr Field::make(std::uint64_t q) { return make(PrimePower::from_order(q)); }

FieldPtr Field::make(const PrimePower& pp) {
  if (pp.h == 1) {
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::prime;
    f->p_ = pp.p;
    f->degree_ = 1;
    f->order_ = pp.p;
    f->modulus_ = {0, 1};
    f->finish();
    return f;
  }
  // Lowest modulus: lower coefficients enumerated as the integer sum c_i p^i.
  for (std::uint64_t code = 0; code < pp.q; ++code) {
    Poly m(pp.h + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < pp.h; ++i) {
      m[i] = static_cast<std::uint32_t>(c % pp.p);
      c /= pp.p;
    }
    m[pp.h] = 1;
    if (is_irreducible_mod_p(pp.p, m)) return with_modulus(pp.p, m);
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldPtr Field::with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw usage_error("not a prime: " + std::to_string(p));
  if (modulus.size() < 2 || modulus.back() != 1)
    throw usage_error("modulus must be monic of degree >= 1");
  for (auto c : modulus)
    if (c >= p) throw usage_error("modulus coefficient out of range");
  if (!is_irreducible_mod_p(p, modulus)) throw usage_error("modulus is reducible");
  const auto pp = PrimePower::make(p, static_cast<std::uint32_t>(modulus.size() - 1));
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = pp.h == 1 ? Kind::prime : Kind::polynomial;
  f->p_ = p;
  f->degree_ = pp.h;
  f->order_ = pp.q;
  f->modulus_ = std::move(modulus);
  if (f->kind_ == Kind::prime && f->modulus_ != Poly{0, 1})
    throw usage_error("prime fields use the modulus x");
  f->finish();
  return f;
}

FieldPtr Field::quadratic(FieldPtr base, Fq alpha, Fq beta) {
  if (!base) throw usage_error("missing base field");
  if (!base->valid(alpha) || !base->valid(beta)) throw usage_error("alpha/beta not in base field");
  if (base->order() >= (std::uint64_t{1} << 16))
    throw resource_error("quadratic extension would exceed 2^32 elements");
  if (!quadratic_is_irreducible(*base, alpha, beta))
    throw usage_error("s^2 - alpha s - beta is reducible over the base field");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = Kind::quadratic;
  f->p_ = base->characteristic();
  f->degree_ = 2 * base->degree();
  f->order_ = base->order() * base->order();
  f->alpha_ = alpha;
  f->beta_ = beta;
  f->base_ = std::move(base);
  f->finish();
  return f;
}

void Field::finish() {
  switch (kind_) {
    case Kind::prime:
      descriptor_ = "GF(" + std::to_string(p_) + ")";
      break;
    case Kind::polynomial:
      descriptor_ = "GF(" + std::to_string(p_) + ")[x]/" + join_coords(modulus_);
      break;
    case Kind::quadratic:
      descriptor_ = "{" + base_->descriptor_ + "}[s]/(a=" + std::to_string(alpha_.v) +
                    ",b=" + std::to_string(beta_.v) + ")";
      break;
  }
  if (order_ <= kTableLimit) build_tables();
  primitive_ = has_tables() ? Fq{exp_[1 % exp_.size()]} : find_primitive();
}

Fq Field::from_int(std::int64_t k) const {
  std::int64_t r = k % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return Fq{static_cast<std::uint32_t>(r)};
}

Fq Field::add_slow(Fq a, Fq b) const {
  switch (kind_) {
    case Kind::prime: {
      const std::uint64_t s = std::uint64_t{a.v} + b.v;
      return Fq{static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
    }
    case Kind::polynomial: {
      std::uint64_t x = a.v, y = b.v, out = 0, place = 1;
      for (std::uint32_t i = 0; i < degree_; ++i) {
        out += ((x % p_ + y % p_) % p_) * place;
        x /= p_;
        y /= p_;
        place *= p_;
      }
      return Fq{static_cast<std::uint32_t>(out)};
    }
    case Kind::quadratic: {
      const auto qb = static_cast<std::uint32_t>(base_->order());
      const Fq c0 = base_->add(Fq{a.v % qb}, Fq{b.v % qb});
      const Fq c1 = base_->add(Fq{a.v / qb}, Fq{b.v / qb});
      return Fq{c0.v + c1.v * qb};
    }
  }
  return {};
}

Fq Field::neg_slow(Fq a) const {
  switch (kind_) {
    case Kind::prime:
      return Fq{a.v == 0 ? 0 : p_ - a.v};
    case Kind::polynomial: {
      std::uint64_t x = a.v, out = 0, place = 1;
      for (std::uint32_t i = 0; i < degree_; ++i) {
        out += ((p_ - x % p_) % p_) * place;
        x /= p_;
        place *= p_;
      }
      return Fq{static_cast<std::uint32_t>(out)};
    }
    case Kind::quadratic: {
      const auto qb = static_cast<std::uint32_t>(base_->order());
      return Fq{base_->neg(Fq{a.v % qb}).v + base_->neg(Fq{a.v / qb}).v * qb};
    }
  }
  return {};
}

Fq Field::mul_slow(Fq a, Fq b) const {
  switch (kind_) {
    case Kind::prime:
      return Fq{static_cast<std::uint32_t>(std::uint64_t{a.v} * b.v % p_)};
    case Kind::polynomial: {
      const auto x = coords(a), y = coords(b);
      Poly prod = poly_mulmod(Poly(x.begin(), x.end()), Poly(y.begin(), y.end()), modulus_, p_);
      prod.resize(degree_, 0);
      return from_coords(prod);
    }
    case Kind::quadratic: {
      // (a0 + s a1)(b0 + s b1) with s^2 = alpha s + beta.
      const auto qb = static_cast<std::uint32_t>(base_->order());
      const Fq a0{a.v % qb}, a1{a.v / qb}, b0{b.v % qb}, b1{b.v / qb};
      const Field& k = *base_;
      const Fq a1b1 = k.mul(a1, b1);
      const Fq c0 = k.add(k.mul(a0, b0), k.mul(beta_, a1b1));
      const Fq c1 = k.add(k.add(k.mul(a0, b1), k.mul(a1, b0)), k.mul(alpha_, a1b1));
      return Fq{c0.v + c1.v * qb};
    }
  }
  return {};
}

Fq Field::pow_slow(Fq a, std::uint64_t e) const {
  Fq result = one();
  while (e > 0) {
    if (e & 1) result = mul_slow(result, a);
    a = mul_slow(a, a);
    e >>= 1;
  }
  return result;
}

Fq Field::find_primitive() const {
  const std::uint64_t n = order_ - 1;
  std::vector<std::uint64_t> primes;
  std::uint64_t r = n;
  for (std::uint64_t d = 2; d * d <= r; ++d) {
    if (r % d == 0) {
      primes.push_back(d);
      while (r % d == 0) r /= d;
    }
  }
  if (r > 1) primes.push_back(r);
  for (std::uint64_t c = 1; c < order_; ++c) {
    const Fq g{static_cast<std::uint32_t>(c)};
    bool ok = true;
    for (auto pr : primes) {
      if (pow_slow(g, n / pr) == one()) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("multiplicative group has no generator");
}

void Field::build_tables() {
  const auto n = static_cast<std::uint32_t>(order_ - 1);
  const Fq g = order_ == 2 ? one() : find_primitive();
  log_.assign(order_, kNone);
  exp_.assign(2 * std::size_t{n}, 0);
  Fq x = one();
  for (std::uint32_t i = 0; i < n; ++i) {
    exp_[i] = x.v;
    exp_[i + n] = x.v;
    log_[x.v] = i;
    x = mul_slow(x, g);
  }
  if (kind_ != Kind::prime) {
    zech_.assign(n, kNone);
    for (std::uint32_t k = 0; k < n; ++k) {
      const Fq s = add_slow(one(), Fq{exp_[k]});
      zech_[k] = s.v == 0 ? kNone : log_[s.v];
    }
  }
  log_minus_one_ = p_ == 2 ? 0 : n / 2;
}

Fq Field::add(Fq a, Fq b) const {
  if (kind_ == Kind::prime) {
    const std::uint64_t s = std::uint64_t{a.v} + b.v;
    return Fq{static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
  }
  if (zech_.empty()) return add_slow(a, b);
  if (a.v == 0) return b;
  if (b.v == 0) return a;
  const auto n = static_cast<std::uint32_t>(order_ - 1);
  const std::uint32_t la = log_[a.v], lb = log_[b.v];
  const std::uint32_t k = lb >= la ? lb - la : lb + n - la;
  const std::uint32_t z = zech_[k];
  if (z == kNone) return Fq{0};
  return Fq{exp_[la + z]};
}

Fq Field::neg(Fq a) const {
  if (kind_ == Kind::prime) return Fq{a.v == 0 ? 0 : p_ - a.v};
  if (exp_.empty()) return neg_slow(a);
  if (a.v == 0) return a;
  return Fq{exp_[log_[a.v] + log_minus_one_]};
}

Fq Field::mul(Fq a, Fq b) const {
  if (kind_ == Kind::prime)
    return Fq{static_cast<std::uint32_t>(std::uint64_t{a.v} * b.v % p_)};
  if (exp_.empty()) return mul_slow(a, b);
  if (a.v == 0 || b.v == 0) return Fq{0};
  return Fq{exp_[log_[a.v] + log_[b.v]]};
}

Fq Field::inv(Fq a) const {
  if (a.v == 0) throw std::domain_error("inverse of zero in " + descriptor_);
  if (exp_.empty()) return pow_slow(a, order_ - 2);
  const auto n = static_cast<std::uint32_t>(order_ - 1);
  return Fq{exp_[n - log_[a.v]]};
}

Fq Field::pow(Fq a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.v == 0) return Fq{0};
  if (exp_.empty()) return pow_slow(a, e);
  const std::uint64_t n = order_ - 1;
  return Fq{exp_[(std::uint64_t{log_[a.v]} * (e % n)) % n]};
}

std::vector<std::uint32_t> Field::coords(Fq a) const {
  if (kind_ == Kind::quadratic) {
    const auto qb = static_cast<std::uint32_t>(base_->order());
    auto c = base_->coords(Fq{a.v % qb});
    const auto hi = base_->coords(Fq{a.v / qb});
    c.insert(c.end(), hi.begin(), hi.end());
    return c;
  }
  std::vector<std::uint32_t> c(degree_);
  std::uint32_t x = a.v;
  for (auto& ci : c) {
    ci = x % p_;
    x /= p_;
  }
  return c;
}

Fq Field::from_coords(const std::vector<std::uint32_t>& c) const {
  if (c.size() != degree_)
    throw usage_error("expected " + std::to_string(degree_) + " coordinates, got " +
                      std::to_string(c.size()));
  for (auto ci : c)
    if (ci >= p_) throw usage_error("coordinate out of range for " + descriptor_);
  if (kind_ == Kind::quadratic) {
    const std::size_t half = degree_ / 2;
    const Fq lo = base_->from_coords({c.begin(), c.begin() + half});
    const Fq hi = base_->from_coords({c.begin() + half, c.end()});
    return Fq{lo.v + hi.v * static_cast<std::uint32_t>(base_->order())};
  }
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i];
  return Fq{static_cast<std::uint32_t>(v)};
}

std::string Field::format(Fq a) const { return join_coords(coords(a)); }

Fq Field::parse(std::string_view text) const {
  auto strip = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto to_uint = [&](std::string_view s) -> std::uint64_t {
    s = strip(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      throw usage_error("bad field element: '" + std::string(text) + "'");
    return v;
  };
  text = strip(text);
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw usage_error("unterminated tuple: '" + std::string(text) + "'");
    std::string_view body = text.substr(1, text.size() - 2);
    std::vector<std::uint32_t> c;
    while (true) {
      const auto comma = body.find(',');
      const auto v = to_uint(body.substr(0, comma));
      c.push_back(static_cast<std::uint32_t>(std::min<std::uint64_t>(v, UINT32_MAX)));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    return from_coords(c);
  }
  const auto v = to_uint(text);
  if (v >= order_) throw usage_error("element code out of range: " + std::string(text));
  return Fq{static_cast<std::uint32_t>(v)};
}

bool same_field(const Field& a, const Field& b) {
  return &a == &b || a.descriptor() == b.descriptor();
}

// ---------------------------------------------------------------------------

bool quadratic_is_irreducible(const Field& k, Fq alpha, Fq beta, std::uint64_t scan_cap,
                              std::string* method) {
  auto value_at = [&](Fq x) { return k.sub(k.sub(k.mul(x, x), k.mul(alpha, x)), beta); };
  if (k.order() <= scan_cap) {
    if (method) *method = "root-scan";
    for (std::uint64_t c = 0; c < k.order(); ++c)
      if (value_at(Fq{static_cast<std::uint32_t>(c)}).v == 0) return false;
    return true;
  }
  if (method) *method = "frobenius";
  // x^Q mod (x^2 - alpha x - beta), as r0 + r1 x.
  using Lin = std::pair<Fq, Fq>;
  auto mulmod = [&](Lin a, Lin b) {
    const Fq hh = k.mul(a.second, b.second);
    return Lin{k.add(k.mul(a.first, b.first), k.mul(beta, hh)),
               k.add(k.add(k.mul(a.first, b.second), k.mul(a.second, b.first)), k.mul(alpha, hh))};
  };
  Lin result{k.one(), k.zero()}, base{k.zero(), k.one()};
  for (std::uint64_t e = k.order(); e > 0; e >>= 1) {
    if (e & 1) result = mulmod(result, base);
    base = mulmod(base, base);
  }
  const Fq d0 = result.first, d1 = k.sub(result.second, k.one());
  if (d0.v == 0 && d1.v == 0) return false;  // x^Q = x mod f: f splits
  if (d1.v == 0) return true;                 // gcd with a nonzero constant
  const Fq t = k.neg(k.div(d0, d1));
  return value_at(t).v != 0;
}

QuadExt build_quad_ext(FieldPtr base, std::uint64_t scan_cap) {
  if (!base) throw usage_error("missing base field");
  const std::uint64_t n = base->order();
  for (std::uint64_t b = 1; b < n; ++b) {
    for (std::uint64_t a = 0; a < n; ++a) {
      const Fq alpha{static_cast<std::uint32_t>(a)}, beta{static_cast<std::uint32_t>(b)};
      std::string method;
      if (quadratic_is_irreducible(*base, alpha, beta, scan_cap, &method)) {
        QuadExt ext;
        ext.alpha = alpha;
        ext.beta = beta;
        ext.method = method;
        ext.field = Field::quadratic(base, alpha, beta);
        ext.base = std::move(base);
        return ext;
      }
    }
  }
  throw std::logic_error("no irreducible quadratic found");
}

Fq galois_conjugate(Fq x, const QuadExt& ext) {
  const Field& k = *ext.base;
  const auto [c0, c1] = ext.split(x);
  return ext.join(k.add(c0, k.mul(ext.alpha, c1)), k.neg(c1));
}

Tower build_tower(const PrimePower& q, unsigned depth, std::uint64_t scan_cap) {
  std::uint64_t size = q.q;
  for (unsigned k = 0; k < depth; ++k) {
    if (size >= (std::uint64_t{1} << 16))
      throw resource_error("tower over GF(" + std::to_string(q.q) + ") of depth " +
                           std::to_string(depth) + " exceeds 2^32 elements");
    size *= size;
  }
  Tower t;
  t.fields.push_back(Field::make(q));
  for (unsigned k = 0; k < depth; ++k) {
    t.steps.push_back(build_quad_ext(t.fields.back(), scan_cap));
    t.fields.push_back(t.steps.back().field);
  }
  return t;
}

nlohmann::json to_json(const Field& f) {
  nlohmann::json j;
  j["p"] = f.characteristic();
  j["h"] = f.degree();
  j["q"] = f.order();
  if (f.kind() == Field::Kind::quadratic) {
    j["base"] = to_json(*f.base());
    j["alpha"] = f.base()->format(f.alpha());
    j["beta"] = f.base()->format(f.beta());
  } else {
    j["modulus"] = f.modulus();
  }
  return j;
}

FieldPtr field_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("base")) {
      auto base = field_from_json(j.at("base"));
      const Fq a = base->parse(j.at("alpha").get<std::string>());
      const Fq b = base->parse(j.at("beta").get<std::string>());
      return Field::quadratic(std::move(base), a, b);
    }
    const auto p = j.at("p").get<std::uint32_t>();
    if (j.contains("modulus"))
      return Field::with_modulus(p, j.at("modulus").get<std::vector<std::uint32_t>>());
    return Field::make(PrimePower::make(p, j.at("h").get<std::uint32_t>()));
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("malformed field JSON: ") + e.what());
  }
}

AxiomReport check_field_axioms(const Field& f, Rng& rng, std::uint64_t random_triples) {
  AxiomReport rep;
  auto check = [&](Fq a, Fq b, Fq c) {
    ++rep.checks;
    const bool ok = f.add(f.add(a, b), c) == f.add(a, f.add(b, c)) &&
                    f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)) &&
                    f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)) &&
                    f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a) &&
                    f.add(a, f.neg(a)) == f.zero() && f.add(a, f.zero()) == a &&
                    f.mul(a, f.one()) == a && (a.v == 0 || f.mul(a, f.inv(a)) == f.one());
    if (!ok) ++rep.failures;
  };
  const std::uint64_t q = f.order();
  if (q <= 256) {
    rep.exhaustive = true;
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b)
        for (std::uint32_t c = 0; c < q; ++c) check(Fq{a}, Fq{b}, Fq{c});
  } else {
    for (std::uint64_t i = 0; i < random_triples; ++i)
      check(f.random(rng), f.random(rng), f.random(rng));
  }
  return rep;
}

AxiomReport check_conjugation(const QuadExt& ext, Rng& rng, std::uint64_t random_pairs) {
  const Field& e = *ext.field;
  AxiomReport rep;
  auto conj = [&](Fq x) { return galois_conjugate(x, ext); };
  auto check = [&](Fq x, Fq y) {
    ++rep.checks;
    const bool in_base = ext.split(x).second.v == 0;
    const bool ok = conj(e.add(x, y)) == e.add(conj(x), conj(y)) &&
                    conj(e.mul(x, y)) == e.mul(conj(x), conj(y)) && conj(conj(x)) == x &&
                    (conj(x) == x) == in_base && ext.split(e.mul(x, conj(x))).second.v == 0 &&
                    ext.split(e.add(x, conj(x))).second.v == 0;
    if (!ok) ++rep.failures;
  };
  const std::uint64_t q = e.order();
  if (q <= 256) {
    rep.exhaustive = true;
    for (std::uint32_t x = 0; x < q; ++x)
      for (std::uint32_t y = 0; y < q; ++y) check(Fq{x}, Fq{y});
  } else {
    for (std::uint64_t i = 0; i < random_pairs; ++i) check(e.random(rng), e.random(rng));
  }
  return rep;
}

}  // namespace slrank
