#include "slrank/concentration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "slrank/errors.hpp"
#include "slrank/gf2.hpp"

namespace slrank {

namespace {

bool fixes_columns_from(const MatF& g, std::size_t first) {
  for (std::size_t c = first; c < g.cols(); ++c)
    for (std::size_t r = 0; r < g.rows(); ++r)
      if (g(r, c).v != (r == c ? 1u : 0u)) return false;
  return true;
}

// h g for h equal to the identity outside columns j and t.
MatF apply_two_column(const MatF& h, std::size_t j, std::size_t t, const MatF& g) {
  const Field& f = g.field();
  MatF out = g;
  std::vector<std::size_t> cols{j};
  if (t != j) cols.push_back(t);
  for (std::size_t col : cols) {
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const Fq coef = f.sub(h(r, col), Fq{r == col ? 1u : 0u});
      if (coef.v == 0) continue;
      auto dst = out.row(r);
      auto src = g.row(col);
      for (std::size_t c = 0; c < g.cols(); ++c) dst[c] = f.add(dst[c], f.mul(coef, src[c]));
    }
  }
  return out;
}

}  // namespace

Reduction stabilizer_reduce(const MatF& g, std::size_t level) {
  const std::size_t n = g.rows();
  if (!g.square() || level == 0 || level > n) throw usage_error("stabilizer_reduce: bad level");
  if (!fixes_columns_from(g, level)) throw usage_error("stabilizer_reduce: element not in the chain subgroup");
  const Field& f = g.field();
  const std::size_t t = level - 1;
  MatF h = MatF::identity(g.field_ptr(), n);
  std::vector<Fq> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = g(r, t);

  std::size_t j = t;
  for (std::size_t r = 0; r < t; ++r)
    if (v[r].v != 0) {
      j = r;
      break;
    }
  if (j < t) {
    // h e_t = -v, h e_j = (e_t + v_t v - sum_{i != j,t} v_i e_i) / v_j.
    const Fq inv_vj = f.inv(v[j]);
    for (std::size_t r = 0; r < n; ++r) {
      h(r, t) = f.neg(v[r]);
      Fq x = f.mul(v[t], v[r]);
      if (r == t) x = f.add(x, f.one());
      else if (r != j) x = f.sub(x, v[r]);
      h(r, j) = f.mul(x, inv_vj);
    }
  } else {
    // v = c e_t + w with w below t: h e_t = (e_t - w) / c, h e_0 = c e_0.
    const Fq c = v[t];
    if (c.v == 0) throw usage_error("stabilizer_reduce: singular element");
    const Fq ci = f.inv(c);
    for (std::size_t r = t + 1; r < n; ++r) h(r, t) = f.neg(f.mul(v[r], ci));
    h(t, t) = ci;
    if (c != f.one()) {
      if (t == 0) throw usage_error("stabilizer_reduce: determinant is not one");
      j = 0;
      h(0, 0) = c;
    }
  }
  MatF gp = apply_two_column(h, j, t, g);
  return {std::move(h), std::move(gp)};
}

Reduction stabilizer_reduce(const SLElement& g) {
  if (g.n() < 2) throw usage_error("stabilizer_reduce needs n >= 2");
  return stabilizer_reduce(g.mat(), g.n());
}

MatF sample_chain_level(std::size_t n, std::size_t level, const FieldPtr& field, Rng& rng) {
  if (level == 0 || level > n) throw usage_error("chain level out of range");
  const MatF a = sample_sl(level, field, rng).mat();
  MatF g = MatF::identity(field, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < level; ++c) g(r, c) = r < level ? a(r, c) : field->random(rng);
  return g;
}

std::uint64_t ChainProfile::failures() const {
  std::uint64_t s = 0;
  for (const auto& l : levels) s += l.failures;
  return s;
}

ChainProfile chain_profile(std::size_t n, const FieldPtr& field, std::uint64_t samples_per_level, Rng& rng) {
  if (n < 2) throw usage_error("chain_profile needs n >= 2");
  ChainProfile prof;
  prof.n = n;
  prof.q = field->order();
  double sum_sq = 0;
  const MatF id = MatF::identity(field, n);
  for (std::size_t level = 1; level <= n; ++level) {
    ChainLevel lv;
    lv.level = level;
    const std::size_t allowed = level == 1 ? 1 : 2;
    lv.certified = Rational(static_cast<std::int64_t>(allowed), static_cast<std::int64_t>(n));
    for (std::uint64_t s = 0; s < samples_per_level; ++s) {
      const MatF g = sample_chain_level(n, level, field, rng);
      const Reduction red = stabilizer_reduce(g, level);
      const std::size_t wr = rank(red.h - id);
      lv.max_witness_rank = std::max(lv.max_witness_rank, wr);
      const bool ok = wr <= allowed && det(red.h) == field->one() && fixes_columns_from(red.h, level) &&
                      fixes_columns_from(red.g_prime, level - 1) && red.g_prime == red.h * g;
      ++lv.samples;
      if (!ok) ++lv.failures;
    }
    sum_sq += to_double(lv.certified) * to_double(lv.certified);
    prof.levels.push_back(lv);
  }
  prof.length = std::sqrt(sum_sq);
  prof.length_bound = 2 / std::sqrt(static_cast<double>(n));
  return prof;
}

double levy_bound(double r, std::size_t n) { return 2 * std::exp(-r * r * static_cast<double>(n) / 64); }

double ramsey_threshold(double eps, std::size_t k, std::size_t m) {
  return 64 / (eps * eps) * std::max(std::log(2.0 * static_cast<double>(k)), std::log(2.0 * static_cast<double>(m)));
}

// ---- sampling backends ----

namespace {

struct DenseSpace {
  using Elem = MatF;
  std::size_t n;
  FieldPtr field;

  Elem sample(Rng& rng) const { return sample_sl(n, field, rng).mat(); }
  Elem identity() const { return MatF::identity(field, n); }
  std::size_t dist(const Elem& a, const Elem& b) const { return rank(a - b); }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  // x T for a random transvection T = id + u e_j^T, u_j = 0.
  Elem perturb(const Elem& x, Rng& rng) const {
    const Field& f = *field;
    const std::size_t j = draw_below(rng, n);
    std::vector<Fq> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = i == j ? Fq{0} : f.random(rng);
    Elem y = x;
    for (std::size_t r = 0; r < n; ++r) {
      Fq s{0};
      for (std::size_t i = 0; i < n; ++i) s = f.add(s, f.mul(x(r, i), u[i]));
      y(r, j) = f.add(y(r, j), s);
    }
    return y;
  }
};

struct PackedSpace {
  using Elem = BitMat;
  std::size_t n;

  Elem sample(Rng& rng) const { return BitMat::sample_gl(n, rng); }
  Elem identity() const { return BitMat::identity(n); }
  std::size_t dist(const Elem& a, const Elem& b) const { return rank_of_sum(a, b); }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem perturb(const Elem& x, Rng& rng) const {
    const std::size_t j = draw_below(rng, n);
    // x (id + u e_j^T) with u_j = 0: column j gains <row, u>.
    BitMat ubits = BitMat::random(1, n, rng);
    ubits.set(0, j, false);
    const auto u = ubits.row(0);
    Elem y = x;
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = x.row(r);
      unsigned parity = 0;
      for (std::size_t w = 0; w < u.size(); ++w) parity ^= static_cast<unsigned>(std::popcount(row[w] & u[w]));
      if (parity & 1u) y.flip(r, j);
    }
    return y;
  }
};

template <class Space>
struct Lipschitz {
  const Space& space;
  LipschitzSpec spec;
  std::vector<typename Space::Elem> anchors;

  Lipschitz(const Space& s, const LipschitzSpec& sp, Rng& rng) : space(s), spec(sp) {
    using K = LipschitzSpec::Kind;
    if (spec.kind == K::identity_distance) anchors.push_back(space.identity());
    if (spec.kind == K::anchor_distance) anchors.push_back(space.sample(rng));
    if (spec.kind == K::set_distance)
      for (std::size_t i = 0; i < spec.set_size; ++i) anchors.push_back(space.sample(rng));
  }

  Rational operator()(const typename Space::Elem& x) const {
    if (spec.kind == LipschitzSpec::Kind::constant) return spec.value;
    std::size_t best = SIZE_MAX;
    for (const auto& a : anchors) best = std::min(best, space.dist(x, a));
    return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(space.n));
  }
};

constexpr std::uint64_t kChunk = 4096;

template <class Space>
ConcentrationReport run_concentration(const Space& space, std::uint64_t q, const LipschitzSpec& spec,
                                      const std::vector<Rational>& radii, std::uint64_t samples,
                                      std::uint64_t seed, std::uint64_t cert_pairs) {
  ConcentrationReport rep;
  rep.n = space.n;
  rep.q = q;
  rep.function = spec.name();
  rep.samples = samples;
  rep.seed = seed;
  Rng setup = make_stream(seed, 0);
  const Lipschitz<Space> f(space, spec, setup);

  for (std::uint64_t p = 0; p < cert_pairs; ++p) {
    const auto x = space.sample(setup);
    const auto y = (p % 2) ? space.perturb(x, setup) : space.sample(setup);
    const Rational d(static_cast<std::int64_t>(space.dist(x, y)), static_cast<std::int64_t>(space.n));
    ++rep.certificate_pairs;
    if (abs(f(x) - f(y)) > d) ++rep.certificate_failures;
  }
  if (rep.certificate_failures) throw usage_error("function " + spec.name() + " failed its Lipschitz certificate");

  std::vector<Rational> values;
  values.reserve(samples);
  for (std::uint64_t chunk = 0; chunk * kChunk < samples; ++chunk) {
    Rng rng = make_stream(seed, chunk + 1);
    const std::uint64_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::uint64_t s = chunk * kChunk; s < end; ++s) values.push_back(f(space.sample(rng)));
  }
  std::vector<Rational> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  rep.median = sorted.empty() ? Rational(0) : sorted[(sorted.size() - 1) / 2];

  for (const Rational& r : radii) {
    TailRow row;
    row.r = r;
    row.bound = levy_bound(to_double(r), space.n);
    std::uint64_t hits = 0;
    for (const auto& v : values)
      if (abs(v - rep.median) >= r) ++hits;
    const double ns = static_cast<double>(samples);
    row.empirical = samples ? static_cast<double>(hits) / ns : 0;
    row.stderr_ = samples ? std::sqrt(row.empirical * (1 - row.empirical) / ns) : 0;
    row.asserted = row.bound < 1;
    row.ok = !row.asserted || row.empirical <= row.bound + 3 * row.stderr_;
    rep.rows.push_back(row);
  }
  return rep;
}

template <class Space>
RamseyReport run_ramsey(const Space& space, std::uint64_t q, const FunctionalCover& cover, std::size_t k,
                        std::uint64_t trials, std::uint64_t good_samples, std::uint64_t seed,
                        std::uint64_t max_draws) {
  RamseyReport rep;
  rep.n = space.n;
  rep.q = q;
  rep.eps = to_double(cover.eps);
  rep.k = k;
  rep.m = cover.intervals.size();
  rep.threshold = ramsey_threshold(rep.eps, k, rep.m);
  rep.bound = 1 - 2 * static_cast<double>(k) * std::exp(-rep.eps * rep.eps * static_cast<double>(space.n) / 64);

  Rng setup = make_stream(seed, 0);
  std::vector<typename Space::Elem> fset{space.identity()};
  while (fset.size() < k) fset.push_back(space.sample(setup));
  const Lipschitz<Space> f(space, LipschitzSpec{}, setup);

  auto inside = [&](const typename Space::Elem& g) {
    std::vector<Rational> vals;
    for (const auto& h : fset) vals.push_back(f(space.mul(g, h)));
    return std::any_of(cover.intervals.begin(), cover.intervals.end(), [&](const auto& iv) {
      return std::all_of(vals.begin(), vals.end(), [&](const Rational& v) { return iv.first <= v && v <= iv.second; });
    });
  };

  std::uint64_t total_draws = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = make_stream(seed, 1 + t);
    ++rep.trials;
    for (std::uint64_t d = 1; d <= max_draws; ++d) {
      if (inside(space.sample(rng))) {
        ++rep.successes;
        total_draws += d;
        break;
      }
    }
  }
  rep.mean_samples = rep.successes ? static_cast<double>(total_draws) / static_cast<double>(rep.successes) : 0;

  for (std::uint64_t chunk = 0; chunk * kChunk < good_samples; ++chunk) {
    Rng rng = make_stream(seed, 1 + trials + chunk);
    const std::uint64_t end = std::min(good_samples, (chunk + 1) * kChunk);
    for (std::uint64_t s = chunk * kChunk; s < end; ++s) {
      ++rep.good_samples;
      if (inside(space.sample(rng))) ++rep.good_hits;
    }
  }
  if (rep.good_samples) {
    const double ns = static_cast<double>(rep.good_samples);
    rep.frequency = static_cast<double>(rep.good_hits) / ns;
    rep.stderr_ = std::sqrt(rep.frequency * (1 - rep.frequency) / ns);
  }
  return rep;
}

}  // namespace

LipschitzSpec LipschitzSpec::parse(std::string_view text) {
  LipschitzSpec s;
  if (text == "id") return s;
  if (text == "anchor") {
    s.kind = Kind::anchor_distance;
    return s;
  }
  if (text.rfind("set:", 0) == 0) {
    s.kind = Kind::set_distance;
    try {
      s.set_size = std::stoul(std::string(text.substr(4)));
    } catch (const std::exception&) {
      throw usage_error("bad set size in '" + std::string(text) + "'");
    }
    if (s.set_size == 0) throw usage_error("set size must be positive");
    return s;
  }
  if (text.rfind("const:", 0) == 0) {
    s.kind = Kind::constant;
    s.value = parse_rational(text.substr(6));
    if (s.value < Rational(0) || s.value > Rational(1)) throw usage_error("constant must lie in [0,1]");
    return s;
  }
  throw usage_error("unknown function '" + std::string(text) + "' (id, anchor, set:K, const:V)");
}

std::string LipschitzSpec::name() const {
  switch (kind) {
    case Kind::identity_distance: return "id";
    case Kind::anchor_distance: return "anchor";
    case Kind::set_distance: return "set:" + std::to_string(set_size);
    case Kind::constant: return "const:" + to_string(value);
  }
  return "?";
}

bool ConcentrationReport::ok() const {
  return certificate_failures == 0 && std::all_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.ok; });
}

ConcentrationReport lipschitz_concentration(std::size_t n, const FieldPtr& field, const LipschitzSpec& f,
                                            const std::vector<Rational>& radii, std::uint64_t samples,
                                            std::uint64_t seed, std::uint64_t certificate_pairs) {
  if (n == 0) throw usage_error("n must be positive");
  if (field->order() == 2) return run_concentration(PackedSpace{n}, 2, f, radii, samples, seed, certificate_pairs);
  return run_concentration(DenseSpace{n, field}, field->order(), f, radii, samples, seed, certificate_pairs);
}

// ---- functional covers ----

Rational FunctionalCover::radius() const {
  if (grid == 0) return eps;
  const Rational scaled = eps * Rational(static_cast<std::int64_t>(grid));
  // Largest integer j with j < eps * grid.
  std::int64_t j = scaled.numerator() / scaled.denominator();
  if (Rational(j) == scaled) --j;
  return Rational(std::max<std::int64_t>(j, 0), static_cast<std::int64_t>(grid));
}

bool covers(const std::vector<std::pair<Rational, Rational>>& intervals, const Rational& v) {
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const auto& iv) { return iv.first <= v && v <= iv.second; });
}

namespace {

std::vector<std::pair<Rational, Rational>> erode(const FunctionalCover& c) {
  const Rational r = c.radius();
  std::vector<std::pair<Rational, Rational>> out;
  for (auto [a, b] : c.intervals) {
    const Rational lo = a == Rational(0) ? a : a + r;
    const Rational hi = b == Rational(1) ? b : b - r;
    if (lo <= hi) out.emplace_back(lo, hi);
  }
  return out;
}

bool covers_unit_interval(std::vector<std::pair<Rational, Rational>> iv, std::uint64_t grid) {
  if (grid > 0) {
    for (std::uint64_t k = 0; k <= grid; ++k)
      if (!covers(iv, Rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(grid)))) return false;
    return true;
  }
  std::sort(iv.begin(), iv.end());
  Rational reach(0);
  bool started = false;
  for (const auto& [a, b] : iv) {
    if (a > reach) return false;
    if (!started || b > reach) reach = std::max(reach, b);
    started = true;
    if (reach >= Rational(1)) return true;
  }
  return false;
}

}  // namespace

bool FunctionalCover::valid() const {
  if (intervals.empty() || eps < Rational(0)) return false;
  for (const auto& [a, b] : intervals)
    if (a < Rational(0) || b > Rational(1) || a > b) return false;
  return covers_unit_interval(erode(*this), grid);
}

FunctionalCover functional_erode(const FunctionalCover& cover) {
  if (!cover.valid()) throw usage_error("cover does not have the requested Lebesgue number");
  FunctionalCover out = cover;
  out.intervals = erode(cover);
  out.eps = Rational(0);
  return out;
}

FunctionalCover two_interval_cover(std::size_t n, const Rational& eps) {
  const Rational step(1, static_cast<std::int64_t>(n));
  return FunctionalCover{{{Rational(0), Rational(1) - step}, {step, Rational(1)}}, eps, n};
}

FunctionalCover even_cover(std::size_t n, const Rational& eps, std::size_t m) {
  if (m == 0) throw usage_error("a cover needs at least one interval");
  FunctionalCover cover{{}, eps, n};
  const Rational t = cover.radius();
  const Rational step = (Rational(1) - 2 * t) / static_cast<std::int64_t>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational lo = step * static_cast<std::int64_t>(i);
    cover.intervals.emplace_back(lo, i + 1 == m ? Rational(1) : lo + step + 2 * t);
  }
  return cover;
}

RamseyReport ramsey_search(std::size_t n, const FieldPtr& field, const FunctionalCover& cover, std::size_t k,
                           std::uint64_t trials, std::uint64_t good_samples, std::uint64_t seed,
                           std::uint64_t max_draws) {
  if (k == 0) throw usage_error("F must be non-empty");
  if (cover.grid != 0 && cover.grid != n) throw usage_error("cover grid must match n for d(., id)");
  if (!cover.valid()) throw usage_error("cover does not have Lebesgue number eps");
  if (field->order() == 2)
    return run_ramsey(PackedSpace{n}, 2, cover, k, trials, good_samples, seed, max_draws);
  return run_ramsey(DenseSpace{n, field}, field->order(), cover, k, trials, good_samples, seed, max_draws);
}

}  // namespace slrank
