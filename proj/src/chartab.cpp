#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "slrank/errors.hpp"
#include "slrank/groups.hpp"

namespace slrank {

namespace {

constexpr double kSeparation = 1e-6;
constexpr double kOrthogonality = 1e-8;
constexpr double kDegreeResidual = 1e-6;

double orthogonality_residual(const ConjClasses& cc, std::size_t order, const Eigen::MatrixXcd& v) {
  double worst = 0;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = i; j < v.rows(); ++j) {
      const auto ip = class_inner(cc, order, v.row(i).transpose(), v.row(j).transpose());
      worst = std::max(worst, std::abs(ip - std::complex<double>(i == j ? 1.0 : 0.0)));
    }
  return worst;
}

// Sorting key with values rounded so that numerically equal rows compare equal.
std::vector<long long> row_key(const Eigen::VectorXcd& row, std::uint64_t degree, bool trivial) {
  std::vector<long long> key{trivial ? 0 : 1, static_cast<long long>(degree)};
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    key.push_back(std::llround(row[k].real() * 1e6));
    key.push_back(std::llround(row[k].imag() * 1e6));
  }
  return key;
}

std::optional<CharTable> attempt(const ConjClasses& cc, std::size_t order, const StructureConstants& a,
                                 Rng& rng) {
  const auto r = static_cast<Eigen::Index>(cc.count());
  Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double c = (2 * draw_unit(rng) - 1) / static_cast<double>(cc.sizes[i]);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index k = 0; k < r; ++k)
        combo(j, k) += c * static_cast<double>(a(i, j, k));
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combo.cast<std::complex<double>>());
  if (solver.info() != Eigen::Success) return std::nullopt;
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = i + 1; j < r; ++j)
      if (std::abs(ev[i] - ev[j]) < kSeparation) return std::nullopt;

  CharTable t;
  t.values.resize(r, r);
  t.degrees.resize(static_cast<std::size_t>(r));
  std::vector<bool> trivial(static_cast<std::size_t>(r));
  for (Eigen::Index e = 0; e < r; ++e) {
    Eigen::VectorXcd w = solver.eigenvectors().col(e);
    if (std::abs(w[0]) < 1e-12) return std::nullopt;
    w /= w[0];
    double norm = 0;
    for (Eigen::Index k = 0; k < r; ++k) norm += std::norm(w[k]) / static_cast<double>(cc.sizes[k]);
    const double d = std::sqrt(static_cast<double>(order) / norm);
    const double rounded = std::round(d);
    if (rounded < 1 || std::abs(d - rounded) > kDegreeResidual) return std::nullopt;
    t.degrees[e] = static_cast<std::uint64_t>(rounded);
    for (Eigen::Index k = 0; k < r; ++k) t.values(e, k) = rounded * w[k] / static_cast<double>(cc.sizes[k]);
    bool is_trivial = true;
    for (Eigen::Index k = 0; k < r; ++k) is_trivial = is_trivial && std::abs(t.values(e, k) - 1.0) < 1e-6;
    trivial[e] = is_trivial;
  }

  std::vector<std::size_t> perm(static_cast<std::size_t>(r));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<long long>> keys;
  for (Eigen::Index e = 0; e < r; ++e) keys.push_back(row_key(t.values.row(e).transpose(), t.degrees[e], trivial[e]));
  std::sort(perm.begin(), perm.end(), [&](auto x, auto y) { return keys[x] < keys[y]; });
  CharTable sorted;
  sorted.values.resize(r, r);
  for (Eigen::Index e = 0; e < r; ++e) {
    sorted.values.row(e) = t.values.row(static_cast<Eigen::Index>(perm[e]));
    sorted.degrees.push_back(t.degrees[perm[e]]);
  }
  if (!trivial[perm[0]]) return std::nullopt;

  sorted.orthogonality_residual = orthogonality_residual(cc, order, sorted.values);
  if (sorted.orthogonality_residual >= kOrthogonality) return std::nullopt;
  std::uint64_t sum_sq = 0;
  for (auto d : sorted.degrees) sum_sq += d * d;
  if (sum_sq != order) return std::nullopt;
  return sorted;
}

}  // namespace

std::complex<double> class_inner(const ConjClasses& cc, std::size_t order, const Eigen::VectorXcd& a,
                                 const Eigen::VectorXcd& b) {
  std::complex<double> s = 0;
  for (std::size_t k = 0; k < cc.count(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    s += static_cast<double>(cc.sizes[k]) * a[kk] * std::conj(b[kk]);
  }
  return s / static_cast<double>(order);
}

CharTable character_table(const GroupTable& g, const ConjClasses& cc, const StructureConstants& a,
                          Rng& rng, unsigned retries) {
  if (cc.count() > kMaxTableClasses)
    throw resource_error(std::to_string(cc.count()) + " classes exceed the character table limit");
  for (unsigned k = 1; k <= retries; ++k) {
    if (auto t = attempt(cc, g.order(), a, rng)) {
      t->attempts = k;
      return *t;
    }
  }
  throw numeric_error("character table failed validation after " + std::to_string(retries) + " attempts");
}

nlohmann::json to_json(const CharTable& t, const GroupTable& g, const ConjClasses& cc) {
  auto round12 = [](double x) {
    const double r = std::round(x * 1e12) / 1e12;
    return r == 0 ? 0.0 : r;
  };
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < cc.count(); ++c)
    classes.push_back({{"rep", to_text(g.element(cc.reps[c]))}, {"size", cc.sizes[c]}});
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.count(); ++i) {
    nlohmann::json vals = nlohmann::json::array();
    for (std::size_t c = 0; c < cc.count(); ++c) {
      const auto v = t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      vals.push_back({round12(v.real()), round12(v.imag())});
    }
    rows.push_back({{"degree", t.degrees[i]}, {"values", vals}});
  }
  return {{"n", g.n()},
          {"q", g.q()},
          {"order", g.order()},
          {"classes", classes},
          {"characters", rows},
          {"orthogonality_residual", t.orthogonality_residual}};
}

std::vector<double> class_character_maxima(const ConjClasses& cc, const CharTable& t) {
  std::vector<double> out(cc.count(), 0.0);
  for (std::size_t c = 0; c < cc.count(); ++c)
    for (std::size_t i = 1; i < t.count(); ++i) out[c] = std::max(out[c], std::abs(t.normalized(i, c)));
  return out;
}

GluckResult gluck_check(const GroupTable& g, const ConjClasses& cc, const CharTable& t) {
  GluckResult res;
  res.bound = 8.0 / static_cast<double>(g.q());
  for (std::size_t c = 0; c < cc.count(); ++c) {
    if (cc.central(c)) continue;
    for (std::size_t i = 1; i < t.count(); ++i) {
      const double ratio = std::abs(t.normalized(i, c));
      if (ratio > res.max_ratio) res = {ratio, i, c, res.bound};
    }
  }
  return res;
}

}  // namespace slrank
