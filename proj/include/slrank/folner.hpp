#pragma once

// Partial-permutation representations of Z^d and the discrete Heisenberg
// group on Følner boxes, and of their group rings over GF(q).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slrank/matrix.hpp"

namespace slrank {

using GroupCode = std::vector<std::int64_t>;

class AmenableGroup {
 public:
  enum class Kind { free_abelian, heisenberg };

  static AmenableGroup free_abelian(unsigned d);
  static AmenableGroup heisenberg();
  // "z:D" or "heisenberg".
  static AmenableGroup parse(std::string_view text);

  Kind kind() const { return kind_; }
  // Length of a coded tuple.
  std::size_t arity() const { return kind_ == Kind::heisenberg ? 3 : d_; }
  std::string name() const;

  GroupCode identity() const { return GroupCode(arity(), 0); }
  // Heisenberg: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
  GroupCode mul(const GroupCode& x, const GroupCode& y) const;
  GroupCode inverse(const GroupCode& x) const;
  // "(1,0,2)"; usage_error on malformed input or wrong arity.
  GroupCode parse_element(std::string_view text) const;
  std::string format(const GroupCode& x) const;

  // Following the support geometry: c with |L_n^h| / |F_n| >= 1 - c 2^-n.
  std::int64_t folner_constant(const GroupCode& h) const;

 private:
  Kind kind_ = Kind::free_abelian;
  unsigned d_ = 1;
};

inline constexpr std::uint64_t kDefaultFolnerCap = 1u << 14;

// F_n = [0,2^n)^d for Z^d, [0,2^n) x [0,2^n) x [0,4^n) for Heisenberg.
class FolnerSpec {
 public:
  explicit FolnerSpec(AmenableGroup group, std::uint64_t cap = kDefaultFolnerCap) : group_(group), cap_(cap) {}

  const AmenableGroup& group() const { return group_; }
  std::uint64_t cap() const { return cap_; }

  // Side lengths of F_n; resource_error when |F_n| exceeds the cap.
  std::vector<std::uint64_t> box(unsigned n) const;
  std::uint64_t size(unsigned n) const;
  std::optional<std::uint64_t> index(const GroupCode& x, unsigned n) const;
  GroupCode element(std::uint64_t idx, unsigned n) const;

  // Z^d only: D_n = {0, 2^n}^d with F_{n+1} the disjoint union of F_n + c.
  bool tiles() const { return group_.kind() == AmenableGroup::Kind::free_abelian; }
  std::vector<GroupCode> translates(unsigned n) const;

 private:
  AmenableGroup group_;
  std::uint64_t cap_;
};

// Sparse exact matrix stored by columns; rows sorted within each column.
struct SparseColumns {
  FieldPtr field;
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<std::uint32_t, Fq>>> cols;

  MatF to_dense() const;
  std::size_t nonzero_columns() const;
};
std::size_t rank(const SparseColumns& m);
SparseColumns operator-(const SparseColumns& a, const SparseColumns& b);

// Finite support, no zero coefficients.
struct GroupRingElement {
  std::map<GroupCode, Fq> coeffs;

  // "c*(x,..)+(y,..)+..." with coefficients in the field's element syntax.
  static GroupRingElement parse(std::string_view text, const AmenableGroup& g, const Field& f);
  static GroupRingElement single(const GroupCode& x) { return {{{x, Fq{1}}}}; }
};

// Column x is e_{hx} when hx lies in F_n, zero otherwise.
SparseColumns folner_rep(const GroupCode& h, const FolnerSpec& spec, unsigned n, const FieldPtr& field);
// L_n^h = {x in F_n : hx in F_n}
std::uint64_t folner_domain(const GroupCode& h, const FolnerSpec& spec, unsigned n);

// Column x is sum_s a(s) e_{sx} when sx lies in F_n for every s in the support.
SparseColumns ring_rep(const GroupRingElement& a, const FolnerSpec& spec, unsigned n, const FieldPtr& field);
std::uint64_t ring_domain(const GroupRingElement& a, const FolnerSpec& spec, unsigned n);

struct NormalizedRank {
  Rational value;          // rank / |F_n|
  std::uint64_t rank = 0;
  std::uint64_t domain = 0;  // |L_n^a|
  std::uint64_t size = 0;    // |F_n|
  // The columns indexed by L_n^a are linearly independent.
  bool independent() const { return rank == domain; }
};
NormalizedRank normalized_rank(const GroupRingElement& a, const FolnerSpec& spec, unsigned n,
                               const FieldPtr& field);

struct ProfilePoint {
  unsigned level = 0;
  std::uint64_t size = 0;
  std::uint64_t rank = 0;
  Rational distance;
};
// rank(rep(g) - rep(h)) / |F_n| per level.
std::vector<ProfilePoint> discreteness_profile(const GroupCode& g, const GroupCode& h, const FolnerSpec& spec,
                                               const std::vector<unsigned>& levels, const FieldPtr& field);

struct NestingReport {
  unsigned level = 0;
  Rational distance;  // d(promotion of rep_n(h), rep_{n+1}(h))
  Rational boundary;  // (|F_{n+1}| - |D_n| |L_n^h|) / |F_{n+1}|
  bool ok() const { return distance <= boundary; }
};
// usage_error for specs without an exact tiling.
NestingReport nesting_check(const FolnerSpec& spec, const GroupCode& h, unsigned n, const FieldPtr& field);

}  // namespace slrank
