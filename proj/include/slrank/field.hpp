#pragma once

// Finite fields GF(p^h) and the quadratic extension tower over them.
//
// Every field has order Q and its elements are coded as integers in [0, Q).
// A field is either
//   * a prime field Z/p (code = residue),
//   * Z/p[x]/(f) for a monic irreducible f of degree h (code = sum c_i p^i), or
//   * a quadratic extension base[s]/(s^2 - alpha s - beta) (code = c0 + c1 |base|).
// In the last case the elements of the base field keep their codes, so the
// inclusion base -> extension is the identity on codes.
//
// For Q <= 2^16 multiplication and addition are table driven (discrete logs and
// Zech logarithms); larger fields fall back to structural arithmetic.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slrank/random.hpp"

namespace slrank {

struct PrimePower {
  std::uint32_t p = 2;
  std::uint32_t h = 1;
  std::uint64_t q = 2;

  // Throws usage_error unless p is prime, h >= 1 and p^h < 2^32.
  static PrimePower make(std::uint32_t p, std::uint32_t h);
  // Factors q as p^h; usage_error if q is not a prime power.
  static PrimePower from_order(std::uint64_t q);

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

bool is_prime(std::uint64_t n);

// A field element, coded as described above. Meaningless without its Field.
struct Fq {
  std::uint32_t v = 0;

  friend bool operator==(Fq, Fq) = default;
  friend auto operator<=>(Fq, Fq) = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  enum class Kind { prime, polynomial, quadratic };

  static constexpr std::uint64_t kTableLimit = 1u << 16;

  // GF(q) with the lexicographically lowest monic irreducible modulus.
  static FieldPtr make(std::uint64_t q);
  static FieldPtr make(const PrimePower& pp);
  // Z/p[x]/(modulus); modulus lists c_0..c_h and must be monic irreducible.
  static FieldPtr with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus);
  // base[s]/(s^2 - alpha s - beta); the polynomial must be irreducible over base.
  static FieldPtr quadratic(FieldPtr base, Fq alpha, Fq beta);

  Kind kind() const { return kind_; }
  std::uint32_t characteristic() const { return p_; }
  // Degree over the prime field.
  std::uint32_t degree() const { return degree_; }
  std::uint64_t order() const { return order_; }
  PrimePower prime_power() const { return PrimePower{p_, degree_, order_}; }

  // Polynomial fields: c_0..c_h of the modulus. Empty otherwise.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  // Quadratic fields: the field below and s^2 = alpha s + beta.
  const FieldPtr& base() const { return base_; }
  Fq alpha() const { return alpha_; }
  Fq beta() const { return beta_; }

  // Structural identity; two fields with the same descriptor are the same field.
  const std::string& descriptor() const { return descriptor_; }

  Fq zero() const { return Fq{0}; }
  Fq one() const { return Fq{1}; }
  // Image of the integer k under Z -> GF(q).
  Fq from_int(std::int64_t k) const;
  bool valid(Fq a) const { return a.v < order_; }

  Fq add(Fq a, Fq b) const;
  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
  Fq neg(Fq a) const;
  Fq mul(Fq a, Fq b) const;
  // domain_error when a == 0.
  Fq inv(Fq a) const;
  // domain_error when b == 0.
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, std::uint64_t e) const;

  // A generator of the multiplicative group (computed at construction).
  Fq primitive() const { return primitive_; }

  // Coordinates over the prime field, length degree(). For quadratic fields
  // the coordinates of c0 come first, then those of c1.
  std::vector<std::uint32_t> coords(Fq a) const;
  Fq from_coords(const std::vector<std::uint32_t>& c) const;

  // "(c0,c1,...)" coordinate tuple.
  std::string format(Fq a) const;
  // Accepts a coordinate tuple, or a bare integer for prime fields.
  Fq parse(std::string_view text) const;

  Fq random(Rng& rng) const { return Fq{static_cast<std::uint32_t>(draw_below(rng, order_))}; }
  Fq random_nonzero(Rng& rng) const {
    return Fq{static_cast<std::uint32_t>(1 + draw_below(rng, order_ - 1))};
  }

  bool has_tables() const { return !exp_.empty(); }

 private:
  Field() = default;

  void finish();
  Fq add_slow(Fq a, Fq b) const;
  Fq neg_slow(Fq a) const;
  Fq mul_slow(Fq a, Fq b) const;
  Fq pow_slow(Fq a, std::uint64_t e) const;
  Fq find_primitive() const;
  void build_tables();

  Kind kind_ = Kind::prime;
  std::uint32_t p_ = 2;
  std::uint32_t degree_ = 1;
  std::uint64_t order_ = 2;
  std::vector<std::uint32_t> modulus_;
  FieldPtr base_;
  Fq alpha_{}, beta_{};
  std::string descriptor_;
  Fq primitive_{1};

  static constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> log_;   // log_[a] for a != 0
  std::vector<std::uint32_t> exp_;   // 2(Q-1) entries
  std::vector<std::uint32_t> zech_;  // zech_[k] = log(1 + g^k), kNone when zero
  std::uint32_t log_minus_one_ = 0;
};

bool same_field(const Field& a, const Field& b);

// Monic irreducibility over Z/p via Ben-Or (gcd(x^{p^i} - x, f) = 1 for i <= h/2).
bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& poly);

// A degree-2 extension of `base` presented as s^2 = alpha s + beta.
struct QuadExt {
  FieldPtr base;
  FieldPtr field;
  Fq alpha{}, beta{};
  // How irreducibility of x^2 - alpha x - beta was established:
  // "root-scan" (exhaustive) or "frobenius" (x^Q mod f, gcd with x^Q - x).
  std::string method;

  Fq sigma() const { return Fq{static_cast<std::uint32_t>(base->order())}; }
  std::pair<Fq, Fq> split(Fq x) const {
    const auto qb = static_cast<std::uint32_t>(base->order());
    return {Fq{x.v % qb}, Fq{x.v / qb}};
  }
  Fq join(Fq c0, Fq c1) const {
    return Fq{c0.v + c1.v * static_cast<std::uint32_t>(base->order())};
  }
};

inline constexpr std::uint64_t kDefaultRootScanCap = 1u << 16;

// x^2 - alpha x - beta has no root in `base`. Uses an exhaustive scan when
// |base| <= scan_cap and the Frobenius test otherwise; `method` receives which.
bool quadratic_is_irreducible(const Field& base, Fq alpha, Fq beta,
                              std::uint64_t scan_cap = kDefaultRootScanCap,
                              std::string* method = nullptr);

// First irreducible s^2 - alpha s - beta scanning beta (outer) then alpha in code order.
QuadExt build_quad_ext(FieldPtr base, std::uint64_t scan_cap = kDefaultRootScanCap);

// x = c0 + s c1  ->  c0 + alpha c1 - s c1.
Fq galois_conjugate(Fq x, const QuadExt& ext);

// fields[0] = GF(q); fields[k] = steps[k-1].field has q^{2^k} elements.
struct Tower {
  std::vector<FieldPtr> fields;
  std::vector<QuadExt> steps;

  std::size_t depth() const { return steps.size(); }
  const FieldPtr& top() const { return fields.back(); }
};

// resource_error when q^{2^depth} >= 2^32.
Tower build_tower(const PrimePower& q, unsigned depth,
                  std::uint64_t scan_cap = kDefaultRootScanCap);

// {"p":..,"h":..,"q":..,"modulus":[..]} for polynomial/prime fields; quadratic
// fields add {"base":{..},"alpha":..,"beta":..}.
nlohmann::json to_json(const Field& f);
FieldPtr field_from_json(const nlohmann::json& j);

// Exhaustive (Q <= 256) or sampled check of the field axioms.
struct AxiomReport {
  bool exhaustive = false;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
};
AxiomReport check_field_axioms(const Field& f, Rng& rng, std::uint64_t random_triples = 10000);

// conj is a ring automorphism of order 2 whose fixed points are exactly the base.
AxiomReport check_conjugation(const QuadExt& ext, Rng& rng, std::uint64_t random_pairs = 10000);

}  // namespace slrank
