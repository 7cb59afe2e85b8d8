#pragma once

// Positive definite functions on an enumerated group and the numeric checks
// behind the rigidity lemma for SL_n(q).

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "slrank/groups.hpp"

namespace slrank {

using Complex = std::complex<double>;

struct PDF {
  std::vector<Complex> values;  // indexed by element
};

// psi(g) = sum_x f(gx) conj f(x) / sum_x |f(x)|^2. usage_error when f == 0.
PDF pdf_from_coefficient(const GroupTable& g, std::span<const Complex> f);
// Random f with independent uniform real and imaginary parts in [-1, 1].
PDF random_pdf(const GroupTable& g, Rng& rng);
PDF trivial_pdf(const GroupTable& g);
// chi / chi(1) spread over elements.
PDF normalized_character(const GroupTable& g, const ConjClasses& cc, const CharTable& t, std::size_t chi);
// sum_i w_i psi_i; weights must be non-negative and sum to one.
PDF mixture(std::span<const PDF> parts, std::span<const double> weights);

struct NamedPDF {
  std::string kind;
  PDF psi;
};
// Cycles through: random coefficient, random coefficient mixed with the
// trivial function, a normalized irreducible, a normalized irreducible mixed
// with the trivial function.
std::vector<NamedPDF> pdf_family(const GroupTable& g, const ConjClasses& cc, const CharTable& t,
                                 std::size_t count, Rng& rng);

struct GramCheck {
  std::size_t submatrices = 0;
  double min_eigenvalue = 0;
  bool ok(double tol = 1e-9) const { return min_eigenvalue >= -tol; }
};
// Smallest eigenvalue of [psi(g_j^-1 g_i)] over random principal submatrices.
GramCheck gram_check(const GroupTable& g, const PDF& psi, Rng& rng, std::size_t trials = 20,
                     std::size_t size = 64);

// (1/|G|) sum_x psi(x^-1 h x)
PDF conj_average(const GroupTable& g, const ConjClasses& cc, const PDF& psi);
// Values of a class function on class representatives.
Eigen::VectorXcd class_values(const ConjClasses& cc, const PDF& psi);

struct Decomposition {
  double lambda = 0;               // weight of the trivial character
  std::vector<double> lambda_pi;   // one per non-trivial irreducible, table order
  double sum_residual = 0;         // |lambda + sum lambda_pi - 1|
  double reconstruction_residual = 0;
  double max_imaginary = 0;        // largest imaginary part discarded
  double min_coefficient = 0;
  bool positive(double tol = 1e-8) const { return min_coefficient >= -tol; }
};
Decomposition pdf_decompose(const ConjClasses& cc, std::size_t order, const CharTable& t,
                            const Eigen::VectorXcd& chi);

struct LemmaReport {
  bool applicable = false;  // premise: g non-central, max_x |1 - psi(x^-1 g x)| < eps < 1
  double eps = 0;
  double bound = 0;                 // 9 (2 eps + 16/q)^(1/2)
  double max_deviation = 0;         // max_h |1 - psi(h)|
  bool conclusion = false;
  // Intermediate steps of the proof.
  double lambda = 0;
  bool lambda_step = false;         // lambda > 1 - eps - 8/q
  bool character_step = false;      // |1 - chi(h)| < 2 eps + 16/q for all h
  bool markov_step = false;         // per class, at most a third of it is outside A
  double density = 0;               // |A| / |G|
  bool density_step = false;        // |A| >= 2/3 |G|
  bool factorization_step = false;  // h = k1 k2 with k1, k2 in A and the two estimates
  bool all_steps() const {
    return lambda_step && character_step && markov_step && density_step && factorization_step;
  }
};

// Runs the lemma for a given non-central g and eps; `tol` absorbs rounding.
LemmaReport pdf_lemma_check(const GroupTable& g, const ConjClasses& cc, const CharTable& t,
                            const PDF& psi, GroupTable::Index elem, double eps, double tol = 1e-8);

// Smallest premise eps over non-central class representatives: returns the
// representative and max_x |1 - psi(x^-1 g x)|.
std::pair<GroupTable::Index, double> best_premise(const GroupTable& g, const ConjClasses& cc,
                                                  const PDF& psi);

// max of |psi(a) - psi(b)|^2 - 2 (1 - Re psi(a^-1 b)) over `pairs` random pairs.
double star_violation(const GroupTable& g, const PDF& psi, Rng& rng, std::size_t pairs);

}  // namespace slrank
