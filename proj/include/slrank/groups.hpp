#pragma once

// Explicit small special linear groups: element tables, conjugacy classes,
// class-multiplication coefficients, numeric character tables, and the
// finite-level quantities built on them.

#include <complex>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "slrank/matrix.hpp"

namespace slrank {

inline constexpr std::uint64_t kDefaultGroupCap = 50000;

// q^{n(n-1)/2} prod_{i=2..n} (q^i - 1); nullopt on 64-bit overflow.
std::optional<std::uint64_t> sl_order(std::size_t n, std::uint64_t q);

// All elements of SL_n(q), index 0 is the identity.
class GroupTable {
 public:
  using Index = std::uint32_t;

  // BFS closure from the elementary transvections. resource_error naming the
  // predicted order when it exceeds `cap`.
  static GroupTable enumerate(std::size_t n, FieldPtr field, std::uint64_t cap = kDefaultGroupCap);

  std::size_t n() const { return n_; }
  const FieldPtr& field() const { return field_; }
  std::size_t order() const { return inverse_.size(); }
  std::uint64_t q() const { return field_->order(); }

  MatF element(Index i) const;
  std::optional<Index> index_of(const MatF& m) const;
  Index mul(Index a, Index b) const;
  Index inv(Index a) const { return inverse_[a]; }
  // a^-1 b
  Index left_div(Index a, Index b) const { return mul(inverse_[a], b); }
  const std::vector<Index>& generators() const { return generators_; }

 private:
  GroupTable() = default;
  std::uint64_t key(const std::uint32_t* entries) const;
  Index mul_slow(Index a, Index b) const;

  std::size_t n_ = 0;
  FieldPtr field_;
  std::vector<std::uint32_t> entries_;  // n^2 codes per element
  std::unordered_map<std::uint64_t, Index> index_;
  std::vector<Index> inverse_;
  std::vector<Index> generators_;
  std::vector<Index> cayley_;  // full product table for small groups
};

struct ConjClasses {
  std::vector<std::uint32_t> class_of;  // per element
  std::vector<GroupTable::Index> reps;   // smallest element index in each class
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint32_t> inverse_class;

  std::size_t count() const { return reps.size(); }
  bool central(std::size_t c) const { return sizes[c] == 1; }
};

// Orbits under conjugation; class 0 holds the identity.
ConjClasses conjugacy_classes(const GroupTable& g);

// a(i,j,k) = #{x in C_i : x^-1 z in C_j} for a fixed z in C_k.
class StructureConstants {
 public:
  StructureConstants(const GroupTable& g, const ConjClasses& cc);
  std::uint64_t operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return a_[(i * r_ + j) * r_ + k];
  }
  std::size_t classes() const { return r_; }

 private:
  std::size_t r_;
  std::vector<std::uint64_t> a_;
};

struct CharTable {
  // Rows are irreducible characters, trivial first, then by degree.
  Eigen::MatrixXcd values;
  std::vector<std::uint64_t> degrees;
  double orthogonality_residual = 0;  // max |<chi_i, chi_j> - delta_ij|
  unsigned attempts = 0;

  std::size_t count() const { return degrees.size(); }
  std::complex<double> normalized(std::size_t chi, std::size_t cls) const {
    return values(static_cast<Eigen::Index>(chi), static_cast<Eigen::Index>(cls)) /
           static_cast<double>(degrees[chi]);
  }
};

inline constexpr std::size_t kMaxTableClasses = 200;

// Simultaneous eigenvectors of the class-multiplication matrices, found from
// a random real combination. numeric_error after `retries` failed attempts.
CharTable character_table(const GroupTable& g, const ConjClasses& cc, const StructureConstants& a,
                          Rng& rng, unsigned retries = 10);

// <a, b> = (1/|G|) sum_k |C_k| a_k conj(b_k)
std::complex<double> class_inner(const ConjClasses& cc, std::size_t order,
                                 const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

nlohmann::json to_json(const CharTable& t, const GroupTable& g, const ConjClasses& cc);

struct GluckResult {
  double max_ratio = 0;
  std::size_t character = 0;  // witness irreducible
  std::size_t cls = 0;        // witness class
  double bound = 0;           // 8 / q
  bool holds() const { return max_ratio < bound; }
};

// max |chi(h)| / chi(1) over non-central h and non-trivial irreducible chi.
GluckResult gluck_check(const GroupTable& g, const ConjClasses& cc, const CharTable& t);

// Per class: max over non-trivial irreducibles of |chi(h)| / chi(1).
std::vector<double> class_character_maxima(const ConjClasses& cc, const CharTable& t);

// Minimal m with C^m = G, via the support of class products; nullopt when the
// supports cycle without reaching every class.
std::optional<unsigned> covering_number(const ConjClasses& cc, const StructureConstants& a,
                                        std::size_t cls);

struct CenterReport {
  std::vector<GroupTable::Index> center;   // elements commuting with the generators
  std::vector<GroupTable::Index> scalars;  // z id with z^n = 1
  bool matches() const { return center == scalars; }
};
CenterReport group_center(const GroupTable& g);

}  // namespace slrank
