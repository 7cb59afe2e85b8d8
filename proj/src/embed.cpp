#include "slrank/embed.hpp"

#include <algorithm>
#include <bit>

#include "slrank/errors.hpp"

namespace slrank {

unsigned level_of(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) throw usage_error("dimension " + std::to_string(n) + " is not a power of two");
  return static_cast<unsigned>(std::countr_zero(n));
}

LevelledElement::LevelledElement(unsigned level, SLElement elem) : level_(level), elem_(std::move(elem)) {
  if (level >= 32 || elem_.n() != (std::size_t{1} << level))
    throw usage_error("levelled element of dimension " + std::to_string(elem_.n()) + " at level " +
                      std::to_string(level));
}

MatF diag_embed(const MatF& g) { return block_diag(g, g); }

LevelledElement diag_embed(const LevelledElement& g) {
  return LevelledElement(g.level() + 1, SLElement(diag_embed(g.mat())));
}

LevelledElement promote(const LevelledElement& g, unsigned level) {
  if (level < g.level()) throw usage_error("cannot promote to a lower level");
  if (level == g.level()) return g;
  MatF m = g.mat();
  for (unsigned l = g.level(); l < level; ++l) m = diag_embed(m);
  return LevelledElement(level, SLElement(std::move(m)));
}

MatF quad_embed(const MatF& g, const QuadExt& ext) {
  if (!same_field(g.field(), *ext.field))
    throw usage_error("quad_embed: matrix over " + g.field().descriptor() + ", extension is " +
                      ext.field->descriptor());
  if (!g.square()) throw usage_error("quad_embed needs a square matrix");
  const std::size_t n = g.rows();
  const Field& b = *ext.base;
  MatF out(ext.base, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto [g0, g1] = ext.split(g(i, j));
      out(i, j) = g0;
      out(i, n + j) = b.mul(ext.beta, g1);
      out(n + i, j) = g1;
      out(n + i, n + j) = b.add(g0, b.mul(ext.alpha, g1));
    }
  return out;
}

unsigned tower_level(const Field& f, const Tower& tower) {
  for (std::size_t k = 0; k < tower.fields.size(); ++k)
    if (same_field(f, *tower.fields[k])) return static_cast<unsigned>(k);
  throw usage_error("field " + f.descriptor() + " is not a level of the tower");
}

MatF chain_embed(const MatF& g, const Tower& tower) {
  MatF m = g;
  for (unsigned k = tower_level(g.field(), tower); k > 0; --k) m = quad_embed(m, tower.steps[k - 1]);
  return m;
}

LevelledElement chain_embed(const SLElement& g, const Tower& tower) {
  const unsigned m = tower_level(g.mat().field(), tower);
  return LevelledElement(level_of(g.n()) + m, SLElement(chain_embed(g.mat(), tower)));
}

Rational limit_distance(const LevelledElement& x, const LevelledElement& y) {
  if (!same_field(x.mat().field(), y.mat().field())) throw usage_error("limit distance across fields");
  const unsigned top = std::max(x.level(), y.level());
  return rank_distance(promote(x, top).mat(), promote(y, top).mat());
}

EmbedReport verify_embedding(const PrimePower& q, unsigned n, unsigned m, std::uint64_t trials,
                             Rng& rng) {
  const Tower tower = build_tower(q, m);
  const FieldPtr& top = tower.top();
  const FieldPtr& base = tower.fields[0];
  const std::size_t dim = std::size_t{1} << n;
  const std::uint64_t scale_factor = std::uint64_t{1} << m;

  EmbedReport rep;
  rep.config = {{"q", q.q}, {"n", n}, {"m", m}, {"top_order", top->order()}};
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : tower.steps)
    steps.push_back({{"alpha", s.base->format(s.alpha)}, {"beta", s.base->format(s.beta)}, {"method", s.method}});
  rep.config["tower"] = steps;

  auto discrepancy = [&](const MatF& x, const MatF& ix) {
    const std::uint64_t lhs = rank(ix), rhs = scale_factor * rank(x);
    return lhs > rhs ? lhs - rhs : rhs - lhs;
  };
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++rep.trials;
    const SLElement g = sample_sl(dim, top, rng), h = sample_sl(dim, top, rng);
    const MatF ig = chain_embed(g.mat(), tower), ih = chain_embed(h.mat(), tower);
    bool ok = chain_embed((g * h).mat(), tower) == ig * ih;
    ok = ok && det(ig) == base->one() && det(ih) == base->one();
    const std::uint64_t disc = discrepancy(g.mat() - h.mat(), ig - ih);
    rep.max_rank_discrepancy = std::max(rep.max_rank_discrepancy, disc);
    ok = ok && disc == 0;

    // Base-field inputs: I restricts to the m-fold diagonal map.
    const SLElement a = sample_sl(dim, base, rng), b = sample_sl(dim, base, rng);
    const MatF ia = chain_embed(recast(a.mat(), top), tower), ib = chain_embed(recast(b.mat(), top), tower);
    MatF pa = a.mat(), pb = b.mat();
    for (unsigned k = 0; k < m; ++k) {
      pa = diag_embed(pa);
      pb = diag_embed(pb);
    }
    ok = ok && ia == pa && ib == pb;
    ok = ok && chain_embed(recast((a * b).mat(), top), tower) == ia * ib;
    ok = ok && rank_distance(ia, ib) == rank_distance(a.mat(), b.mat());
    if (!ok) ++rep.failures;
  }
  return rep;
}

nlohmann::json to_json(const EmbedReport& r) {
  return {{"config", r.config},
          {"trials", r.trials},
          {"failures", r.failures},
          {"max_rank_discrepancy", r.max_rank_discrepancy}};
}

}  // namespace slrank
