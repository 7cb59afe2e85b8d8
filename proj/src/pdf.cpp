#include "slrank/pdf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "slrank/errors.hpp"

namespace slrank {

PDF pdf_from_coefficient(const GroupTable& g, std::span<const Complex> f) {
  if (f.size() != g.order()) throw usage_error("coefficient function has the wrong length");
  double norm = 0;
  for (const auto& v : f) norm += std::norm(v);
  if (norm == 0) throw usage_error("coefficient function is zero");
  PDF psi{std::vector<Complex>(g.order())};
  for (GroupTable::Index a = 0; a < g.order(); ++a) {
    Complex s = 0;
    for (GroupTable::Index x = 0; x < g.order(); ++x) s += f[g.mul(a, x)] * std::conj(f[x]);
    psi.values[a] = s / norm;
  }
  return psi;
}

PDF random_pdf(const GroupTable& g, Rng& rng) {
  std::vector<Complex> f(g.order());
  while (true) {
    for (auto& v : f) v = {2 * draw_unit(rng) - 1, 2 * draw_unit(rng) - 1};
    if (std::any_of(f.begin(), f.end(), [](Complex v) { return v != Complex{}; })) break;
  }
  return pdf_from_coefficient(g, f);
}

PDF trivial_pdf(const GroupTable& g) { return PDF{std::vector<Complex>(g.order(), 1.0)}; }

PDF normalized_character(const GroupTable& g, const ConjClasses& cc, const CharTable& t, std::size_t chi) {
  PDF psi{std::vector<Complex>(g.order())};
  for (GroupTable::Index x = 0; x < g.order(); ++x) psi.values[x] = t.normalized(chi, cc.class_of[x]);
  return psi;
}

PDF mixture(std::span<const PDF> parts, std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) throw usage_error("mixture needs one weight per part");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1) > 1e-12 || std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0; }))
    throw usage_error("mixture weights must be non-negative and sum to one");
  PDF out{std::vector<Complex>(parts[0].values.size())};
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t x = 0; x < out.values.size(); ++x) out.values[x] += weights[i] * parts[i].values[x];
  return out;
}

std::vector<NamedPDF> pdf_family(const GroupTable& g, const ConjClasses& cc, const CharTable& t,
                                 std::size_t count, Rng& rng) {
  const PDF one = trivial_pdf(g);
  std::vector<NamedPDF> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = 0.5 + 0.5 * draw_unit(rng);
    const std::array<double, 2> weights{w, 1 - w};
    switch (i % 4) {
      case 0:
        out.push_back({"coefficient", random_pdf(g, rng)});
        break;
      case 1: {
        const std::array<PDF, 2> parts{one, random_pdf(g, rng)};
        out.push_back({"coefficient-mix", mixture(parts, weights)});
        break;
      }
      case 2:
        out.push_back({"character", normalized_character(g, cc, t, (i / 4) % t.count())});
        break;
      default: {
        const std::size_t chi = 1 + draw_below(rng, t.count() - 1);
        const std::array<PDF, 2> parts{one, normalized_character(g, cc, t, chi)};
        out.push_back({"character-mix", mixture(parts, weights)});
      }
    }
  }
  return out;
}

GramCheck gram_check(const GroupTable& g, const PDF& psi, Rng& rng, std::size_t trials, std::size_t size) {
  GramCheck res;
  res.min_eigenvalue = INFINITY;
  const std::size_t k = std::min(size, g.order());
  std::vector<GroupTable::Index> pool(g.order());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    // Partial Fisher-Yates for a random subset.
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + draw_below(rng, g.order() - i)]);
    Eigen::MatrixXcd gram(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = psi.values[g.left_div(pool[j], pool[i])];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    res.min_eigenvalue = std::min(res.min_eigenvalue, solver.eigenvalues().minCoeff());
    ++res.submatrices;
  }
  return res;
}

PDF conj_average(const GroupTable& g, const ConjClasses& cc, const PDF& psi) {
  const Eigen::VectorXcd avg = class_values(cc, psi);
  PDF out{std::vector<Complex>(g.order())};
  for (GroupTable::Index x = 0; x < g.order(); ++x) out.values[x] = avg[cc.class_of[x]];
  return out;
}

// Averaging over x of psi(x^-1 h x) visits every element of the class of h
// equally often, so the average is the class mean.
Eigen::VectorXcd class_values(const ConjClasses& cc, const PDF& psi) {
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cc.count()));
  for (std::size_t x = 0; x < psi.values.size(); ++x) sum[cc.class_of[x]] += psi.values[x];
  for (std::size_t c = 0; c < cc.count(); ++c)
    sum[static_cast<Eigen::Index>(c)] /= static_cast<double>(cc.sizes[c]);
  return sum;
}

Decomposition pdf_decompose(const ConjClasses& cc, std::size_t order, const CharTable& t,
                            const Eigen::VectorXcd& chi) {
  Decomposition d;
  const auto r = static_cast<Eigen::Index>(cc.count());
  Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(r);
  double total = 0;
  d.min_coefficient = INFINITY;
  for (std::size_t i = 0; i < t.count(); ++i) {
    const Eigen::VectorXcd row = t.values.row(static_cast<Eigen::Index>(i)).transpose();
    const Complex c = static_cast<double>(t.degrees[i]) * class_inner(cc, order, chi, row);
    d.max_imaginary = std::max(d.max_imaginary, std::abs(c.imag()));
    const double w = c.real();
    if (i == 0) d.lambda = w;
    else d.lambda_pi.push_back(w);
    d.min_coefficient = std::min(d.min_coefficient, w);
    total += w;
    rebuilt += w * row / static_cast<double>(t.degrees[i]);
  }
  d.sum_residual = std::abs(total - 1);
  d.reconstruction_residual = (rebuilt - chi).cwiseAbs().maxCoeff();
  return d;
}

std::pair<GroupTable::Index, double> best_premise(const GroupTable& g, const ConjClasses& cc, const PDF& psi) {
  std::pair<GroupTable::Index, double> best{0, INFINITY};
  for (std::size_t c = 0; c < cc.count(); ++c) {
    if (cc.central(c)) continue;
    double worst = 0;
    for (GroupTable::Index x = 0; x < g.order(); ++x)
      if (cc.class_of[x] == c) worst = std::max(worst, std::abs(1.0 - psi.values[x]));
    if (worst < best.second) best = {cc.reps[c], worst};
  }
  return best;
}

LemmaReport pdf_lemma_check(const GroupTable& g, const ConjClasses& cc, const CharTable& t, const PDF& psi,
                            GroupTable::Index elem, double eps, double tol) {
  LemmaReport rep;
  rep.eps = eps;
  const double q = static_cast<double>(g.q());
  const double slack = 2 * eps + 16 / q;
  rep.bound = 9 * std::sqrt(slack);

  const std::size_t gc = cc.class_of[elem];
  // The conjugates x^-1 g x run over the class of g.
  double premise = 0;
  for (GroupTable::Index x = 0; x < g.order(); ++x)
    if (cc.class_of[x] == gc) premise = std::max(premise, std::abs(1.0 - psi.values[x]));
  rep.applicable = !cc.central(gc) && eps > 0 && eps < 1 && premise < eps;
  if (!rep.applicable) return rep;

  for (const auto& v : psi.values) rep.max_deviation = std::max(rep.max_deviation, std::abs(1.0 - v));
  rep.conclusion = rep.max_deviation < rep.bound + tol;

  const Eigen::VectorXcd chi = class_values(cc, psi);
  const Decomposition dec = pdf_decompose(cc, g.order(), t, chi);
  rep.lambda = dec.lambda;
  rep.lambda_step = dec.lambda > 1 - eps - 8 / q - tol;

  rep.character_step = true;
  for (Eigen::Index k = 0; k < chi.size(); ++k)
    rep.character_step = rep.character_step && std::abs(1.0 - chi[k]) < slack + tol;

  const double radius = 3 * slack;
  std::vector<bool> in_a(g.order());
  std::vector<std::uint64_t> outside(cc.count(), 0);
  std::size_t a_size = 0;
  for (GroupTable::Index x = 0; x < g.order(); ++x) {
    in_a[x] = std::abs(1.0 - psi.values[x]) < radius;
    if (in_a[x]) ++a_size;
    else ++outside[cc.class_of[x]];
  }
  rep.markov_step = true;
  for (std::size_t c = 0; c < cc.count(); ++c) rep.markov_step = rep.markov_step && 3 * outside[c] <= cc.sizes[c];
  rep.density = static_cast<double>(a_size) / static_cast<double>(g.order());
  rep.density_step = 3 * a_size >= 2 * g.order();

  rep.factorization_step = true;
  for (GroupTable::Index h = 0; h < g.order() && rep.factorization_step; ++h) {
    bool found = false;
    for (GroupTable::Index k1 = 0; k1 < g.order() && !found; ++k1) {
      if (!in_a[k1]) continue;
      const GroupTable::Index k2 = g.left_div(k1, h);
      if (!in_a[k2]) continue;
      found = true;
      const double lhs = std::norm(psi.values[k1] - psi.values[h]);
      const double mid = 2 * (1 - psi.values[k2].real());
      const bool chain = lhs <= mid + tol && mid <= 6 * slack + tol &&
                         std::abs(1.0 - psi.values[h]) <= radius + std::sqrt(6 * slack) + tol &&
                         radius + std::sqrt(6 * slack) <= rep.bound + tol;
      rep.factorization_step = chain;
    }
    rep.factorization_step = rep.factorization_step && found;
  }
  return rep;
}

double star_violation(const GroupTable& g, const PDF& psi, Rng& rng, std::size_t pairs) {
  double worst = -INFINITY;
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto a = static_cast<GroupTable::Index>(draw_below(rng, g.order()));
    const auto b = static_cast<GroupTable::Index>(draw_below(rng, g.order()));
    const double lhs = std::norm(psi.values[a] - psi.values[b]);
    const double rhs = 2 * (1 - psi.values[g.left_div(a, b)].real());
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

}  // namespace slrank
