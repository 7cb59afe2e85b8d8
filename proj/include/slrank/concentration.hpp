#pragma once

// Concentration of measure on (SL_n(q), rank distance, uniform measure):
// constructive diameter witnesses, the Levy bound, Lipschitz tails and the
// metric Ramsey experiment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slrank/matrix.hpp"

namespace slrank {

struct Reduction {
  MatF h;        // det 1, identity outside two columns
  MatF g_prime;  // h g
};

// For g in H_level = {x in SL_n(q) : x e_k = e_k for k >= level} (0-based
// columns), returns h in H_level with h g in H_{level-1} and rank(h - id) <= 2.
// usage_error if g is not in H_level.
Reduction stabilizer_reduce(const MatF& g, std::size_t level);
// level = n: h g fixes e_n.
Reduction stabilizer_reduce(const SLElement& g);

// Uniform element of H_level inside SL_n(q).
MatF sample_chain_level(std::size_t n, std::size_t level, const FieldPtr& field, Rng& rng);

struct ChainLevel {
  std::size_t level = 0;
  Rational certified;       // bound on the diameter of H_level / H_{level-1}
  std::size_t max_witness_rank = 0;
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
};

struct ChainProfile {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::vector<ChainLevel> levels;  // level 1..n
  double length = 0;               // (sum a_i^2)^(1/2)
  double length_bound = 0;         // 2 n^(-1/2)
  std::uint64_t failures() const;
};

ChainProfile chain_profile(std::size_t n, const FieldPtr& field, std::uint64_t samples_per_level, Rng& rng);

// 2 exp(-r^2 n / 64)
double levy_bound(double r, std::size_t n);

// N = 64 eps^-2 max(log 2k, log 2m)
double ramsey_threshold(double eps, std::size_t k, std::size_t m);

// Registered 1-Lipschitz functions on SL_n(q).
struct LipschitzSpec {
  enum class Kind { identity_distance, anchor_distance, set_distance, constant };
  Kind kind = Kind::identity_distance;
  std::size_t set_size = 3;  // anchors for set_distance
  Rational value{0};         // for constant

  // "id", "anchor", "set:K", "const:V"
  static LipschitzSpec parse(std::string_view text);
  std::string name() const;
};

struct TailRow {
  Rational r;
  double bound = 0;
  double empirical = 0;
  double stderr_ = 0;
  bool asserted = false;  // bound < 1
  bool ok = true;         // empirical <= bound + 3 stderr, when asserted
};

struct ConcentrationReport {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::string function;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t certificate_pairs = 0;
  std::uint64_t certificate_failures = 0;
  Rational median;  // lower median
  std::vector<TailRow> rows;
  bool ok() const;
};

// Samples are drawn in chunks, chunk c from make_stream(seed, c), so results
// depend only on the seed. usage_error when the Lipschitz certificate fails.
ConcentrationReport lipschitz_concentration(std::size_t n, const FieldPtr& field, const LipschitzSpec& f,
                                            const std::vector<Rational>& radii, std::uint64_t samples,
                                            std::uint64_t seed, std::uint64_t certificate_pairs = 10000);

// m closed intervals of [0,1] with Lebesgue number eps for the preimage cover.
// grid = n when the function only takes values in (1/n)Z; 0 for a continuum.
struct FunctionalCover {
  std::vector<std::pair<Rational, Rational>> intervals;
  Rational eps;
  std::uint64_t grid = 0;

  // Largest t with |u - v| <= t whenever |u - v| < eps on the value set.
  Rational radius() const;
  bool valid() const;
};

// Shrinks interior endpoints by radius(); endpoints at 0 or 1 stay.
// usage_error when the cover is not valid.
FunctionalCover functional_erode(const FunctionalCover& cover);

// True when value v lies in some interval.
bool covers(const std::vector<std::pair<Rational, Rational>>& intervals, const Rational& v);

// {[0, 1 - 1/n], [1/n, 1]} on the grid (1/n)Z, valid for eps <= 1/2.
FunctionalCover two_interval_cover(std::size_t n, const Rational& eps);
// m intervals [i s, i s + s + 2t] with s = (1 - 2t)/m and t the grid radius,
// so consecutive ones overlap by 2t. Coincides with two_interval_cover for m = 2.
FunctionalCover even_cover(std::size_t n, const Rational& eps, std::size_t m);

struct RamseyReport {
  std::size_t n = 0;
  std::uint64_t q = 0;
  double eps = 0;
  std::size_t k = 0, m = 0;
  double threshold = 0;  // N
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double mean_samples = 0;       // samples until success, over successful trials
  std::uint64_t good_samples = 0;
  std::uint64_t good_hits = 0;
  double frequency = 0;
  double stderr_ = 0;
  double bound = 0;              // 1 - 2k exp(-eps^2 n / 64)
  bool frequency_ok() const { return frequency >= bound - 3 * stderr_; }
};

// F = {id, k-1 uniform elements}; f = d(., id); cover must be valid for f.
// Each trial samples g until some interval contains f(gF), at most max_draws times.
RamseyReport ramsey_search(std::size_t n, const FieldPtr& field, const FunctionalCover& cover, std::size_t k,
                           std::uint64_t trials, std::uint64_t good_samples, std::uint64_t seed,
                           std::uint64_t max_draws = 1000);

}  // namespace slrank
