#pragma once

// Embeddings between levels of the inductive limit of SL_{2^n}(q): the
// diagonal map and the quadratic-extension map that halves the field degree.

#include <cstdint>

#include <nlohmann/json.hpp>

#include "slrank/field.hpp"
#include "slrank/matrix.hpp"

namespace slrank {

// An element of SL_{2^level}(q) standing for its class in the limit group.
class LevelledElement {
 public:
  // usage_error unless elem has dimension 2^level.
  LevelledElement(unsigned level, SLElement elem);

  unsigned level() const { return level_; }
  const SLElement& elem() const { return elem_; }
  const MatF& mat() const { return elem_.mat(); }

  friend bool operator==(const LevelledElement&, const LevelledElement&) = default;

 private:
  unsigned level_;
  SLElement elem_;
};

// Smallest level with 2^level == n, or usage_error.
unsigned level_of(std::size_t n);

// g -> diag(g, g).
MatF diag_embed(const MatF& g);
LevelledElement diag_embed(const LevelledElement& g);
// diag_embed applied until the target level is reached.
LevelledElement promote(const LevelledElement& g, unsigned level);

// g = g0 + s g1 over ext.field  ->  [[g0, beta g1], [g1, g0 + alpha g1]] over ext.base.
// Defined for every square matrix; linear and multiplicative.
MatF quad_embed(const MatF& g, const QuadExt& ext);

// Composition of quad_embed down the tower, from the field of g to tower.fields[0].
// usage_error if g's field is not a level of the tower.
MatF chain_embed(const MatF& g, const Tower& tower);
LevelledElement chain_embed(const SLElement& g, const Tower& tower);

// Level of `f` inside `tower`, or usage_error.
unsigned tower_level(const Field& f, const Tower& tower);

// Distance after promoting both operands to the larger level.
Rational limit_distance(const LevelledElement& x, const LevelledElement& y);

struct EmbedReport {
  nlohmann::json config;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  // max |rank_base(I(g - h)) - 2^m rank(g - h)|
  std::uint64_t max_rank_discrepancy = 0;
};

// Random pairs g, h in SL_{2^n}(q^{2^m}); checks I(gh) = I(g)I(h), det I(g) = 1,
// the rank identity, and the same on base-field inputs where I must equal phi^m.
EmbedReport verify_embedding(const PrimePower& q, unsigned n, unsigned m, std::uint64_t trials,
                             Rng& rng);

nlohmann::json to_json(const EmbedReport& r);

}  // namespace slrank
