#include <doctest.h>

#include <set>

#include "slrank/errors.hpp"
#include "slrank/folner.hpp"

using namespace slrank;

namespace {

Rational r(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

GroupCode z1(std::int64_t v) { return {v}; }

// Lattice points of the box whose image under left multiplication stays in the box.
std::uint64_t count_domain(const FolnerSpec& spec, unsigned n, const std::vector<GroupCode>& support) {
  const auto b = spec.box(n);
  std::uint64_t count = 0;
  GroupCode x(b.size(), 0);
  while (true) {
    bool ok = true;
    for (const auto& s : support) {
      const GroupCode y = spec.group().mul(s, x);
      for (std::size_t i = 0; i < b.size(); ++i) ok = ok && y[i] >= 0 && y[i] < static_cast<std::int64_t>(b[i]);
    }
    count += ok;
    std::size_t i = 0;
    while (i < b.size() && ++x[i] == static_cast<std::int64_t>(b[i])) x[i++] = 0;
    if (i == b.size()) break;
  }
  return count;
}

}  // namespace

TEST_CASE("group axioms on random coded triples") {
  Rng rng = make_stream(71);
  for (const auto& g : {AmenableGroup::free_abelian(1), AmenableGroup::free_abelian(3), AmenableGroup::heisenberg()}) {
    auto draw = [&] {
      GroupCode x(g.arity());
      for (auto& v : x) v = static_cast<std::int64_t>(draw_below(rng, 2001)) - 1000;
      return x;
    };
    for (int t = 0; t < 10000; ++t) {
      const GroupCode a = draw(), b = draw(), c = draw();
      REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
      REQUIRE(g.mul(a, g.identity()) == a);
      REQUIRE(g.mul(g.identity(), a) == a);
      REQUIRE(g.mul(a, g.inverse(a)) == g.identity());
      REQUIRE(g.mul(g.inverse(a), a) == g.identity());
    }
  }
  const auto h = AmenableGroup::heisenberg();
  CHECK(h.mul({1, 0, 0}, {0, 1, 0}) == GroupCode{1, 1, 1});
  CHECK(h.mul({0, 1, 0}, {1, 0, 0}) == GroupCode{1, 1, 0});
}

TEST_CASE("parsing") {
  const auto z2 = AmenableGroup::parse("z:2");
  CHECK(z2.arity() == 2);
  CHECK(AmenableGroup::parse("heisenberg").arity() == 3);
  CHECK_THROWS_AS(AmenableGroup::parse("free"), usage_error);
  CHECK(z2.parse_element(" ( -1, 3 )") == GroupCode{-1, 3});
  CHECK_THROWS_AS(z2.parse_element("(1)"), usage_error);
  CHECK_THROWS_AS(z2.parse_element("1,2"), usage_error);
  CHECK(z2.format({-1, 3}) == "(-1,3)");

  auto f3 = Field::make(3);
  const auto z = AmenableGroup::free_abelian(1);
  const auto a = GroupRingElement::parse("(0) + 2*(1) + (1) + 2*(3)", z, *f3);
  CHECK(a.coeffs.size() == 2);  // 2 + 1 = 0 in GF(3)
  CHECK(a.coeffs.at({0}).v == 1);
  CHECK(a.coeffs.at({3}).v == 2);
  CHECK(GroupRingElement::parse("0", z, *f3).coeffs.empty());
  CHECK_THROWS_AS(GroupRingElement::parse("(0)(1)", z, *f3), usage_error);
}

TEST_CASE("boxes and tiling") {
  const FolnerSpec heis(AmenableGroup::heisenberg());
  CHECK(heis.size(2) == 4 * 4 * 16);
  CHECK_THROWS_AS(heis.size(4), resource_error);
  CHECK_THROWS_AS(heis.translates(1), usage_error);
  CHECK_THROWS_AS(FolnerSpec(AmenableGroup::free_abelian(1)).size(15), resource_error);
  CHECK(FolnerSpec(AmenableGroup::free_abelian(1), 1u << 16).size(15) == 1u << 15);

  for (unsigned d = 1; d <= 3; ++d) {
    const FolnerSpec spec(AmenableGroup::free_abelian(d));
    for (unsigned n = 0; n + 1 <= 12 / d; ++n) {
      const auto tr = spec.translates(n);
      REQUIRE(tr.size() == (1u << d));
      std::vector<int> hits(spec.size(n + 1), 0);
      for (const auto& c : tr)
        for (std::uint64_t i = 0; i < spec.size(n); ++i) {
          const auto idx = spec.index(spec.group().mul(spec.element(i, n), c), n + 1);
          REQUIRE(idx);
          ++hits[*idx];
        }
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
  }
  for (std::uint64_t i = 0; i < heis.size(2); ++i) REQUIRE(heis.index(heis.element(i, 2), 2) == i);
}

TEST_CASE("sparse rank against dense elimination") {
  Rng rng = make_stream(72);
  for (std::uint64_t q : {2u, 3u, 4u, 7u}) {
    auto f = Field::make(q);
    for (int t = 0; t < 200; ++t) {
      const std::size_t rows = 1 + draw_below(rng, 12), cols = 1 + draw_below(rng, 12);
      SparseColumns m{f, rows, std::vector<std::vector<std::pair<std::uint32_t, Fq>>>(cols)};
      for (auto& col : m.cols)
        for (std::uint32_t row = 0; row < rows; ++row)
          if (draw_below(rng, 3) == 0) col.emplace_back(row, Fq{static_cast<std::uint32_t>(1 + draw_below(rng, q - 1))});
      REQUIRE(rank(m) == rank(m.to_dense()));
      const SparseColumns d = m - m;
      CHECK(d.nonzero_columns() == 0);
    }
  }
}

TEST_CASE("folner representation") {
  auto f2 = Field::make(2);
  auto f5 = Field::make(5);
  const FolnerSpec z(AmenableGroup::free_abelian(1));
  const FolnerSpec z2(AmenableGroup::free_abelian(2));
  const FolnerSpec heis(AmenableGroup::heisenberg());

  CHECK(folner_rep(z1(0), z, 5, f2).to_dense().is_identity());
  CHECK(folner_rep({0, 0, 0}, heis, 2, f5).to_dense().is_identity());

  for (unsigned n = 1; n <= 10; ++n) {
    const auto shift = folner_rep(z1(1), z, n, f2);
    CHECK(rank(shift) == (1u << n) - 1);
    CHECK(rank(folner_rep({1, 0}, z2, n > 6 ? 6 : n, f2)) == (1u << (n > 6 ? 6 : n)) * ((1u << (n > 6 ? 6 : n)) - 1));
  }

  // Columns e_{hx} checked literally on a small case.
  const MatF dense = folner_rep(z1(-2), z, 3, f5).to_dense();
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) CHECK(dense(y, x).v == (x >= 2 && y + 2 == x ? 1u : 0u));

  // rank = |L_n^h| and the Følner lower bound, both against a lattice count.
  const std::vector<GroupCode> z2_elems = {{1, 0}, {-3, 2}, {5, -5}};
  const std::vector<GroupCode> heis_elems = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 2, 3}, {2, -1, -7}};
  auto check_spec = [&](const FolnerSpec& spec, const std::vector<GroupCode>& elems, unsigned max_level) {
    for (const auto& h : elems)
      for (unsigned n = 0; n <= max_level; ++n) {
        const std::uint64_t dom = count_domain(spec, n, {h});
        REQUIRE(folner_domain(h, spec, n) == dom);
        REQUIRE(rank(folner_rep(h, spec, n, f2)) == dom);
        const std::int64_t size = static_cast<std::int64_t>(spec.size(n));
        const Rational lower = r(1) - r(spec.group().folner_constant(h), std::int64_t{1} << n);
        CHECK(r(static_cast<std::int64_t>(dom), size) >= lower);
      }
  };
  check_spec(z2, z2_elems, 6);
  check_spec(heis, heis_elems, 3);
  CHECK(heis.group().folner_constant({-1, 2, 3}) == 7);
  CHECK(z2.group().folner_constant({-3, 2}) == 6);
}

TEST_CASE("group ring representation") {
  auto f2 = Field::make(2);
  auto f3 = Field::make(3);
  const FolnerSpec z(AmenableGroup::free_abelian(1));
  const auto& zg = z.group();

  CHECK(ring_rep({}, z, 4, f2).nonzero_columns() == 0);
  CHECK(normalized_rank({}, z, 4, f2).value == r(0));
  CHECK(normalized_rank(GroupRingElement::single(z1(0)), z, 6, f3).value == r(1));

  // Singleton support: both constructions agree.
  const auto single = ring_rep(GroupRingElement::single(z1(3)), z, 5, f3);
  CHECK(single.to_dense() == folner_rep(z1(3), z, 5, f3).to_dense());

  const auto one_t = GroupRingElement::parse("(0)+(1)", zg, *f2);
  for (unsigned n = 1; n <= 8; ++n) {
    const MatF m = ring_rep(one_t, z, n, f2).to_dense();
    const std::size_t size = std::size_t{1} << n;
    for (std::size_t x = 0; x < size; ++x)
      for (std::size_t y = 0; y < size; ++y) {
        const bool expected = x + 1 < size && (y == x || y == x + 1);
        REQUIRE(m(y, x).v == (expected ? 1u : 0u));
      }
    CHECK(rank(m) == size - 1);
  }

  const auto quad = GroupRingElement::parse("(0)+(1)+(2)", zg, *f2);
  for (unsigned n = 1; n <= 10; ++n) {
    const auto nr = normalized_rank(quad, z, n, f2);
    CHECK(nr.domain == (1u << n) - 2);
    CHECK(nr.independent());
    if (n <= 8) CHECK(nr.rank == rank(ring_rep(quad, z, n, f2).to_dense()));
    CHECK(nr.value >= r(1) - r(2, std::int64_t{1} << n));
  }
  CHECK(normalized_rank(quad, z, 10, f2).value == r(1022, 1024));

  // Independence witness over Z^2 and an extension field.
  auto f4 = Field::make(4);
  const FolnerSpec z2(AmenableGroup::free_abelian(2));
  const auto a2 = GroupRingElement::parse("(0,0)+2*(1,0)+3*(0,1)+(-1,2)", z2.group(), *f4);
  for (unsigned n = 1; n <= 5; ++n) {
    const auto nr = normalized_rank(a2, z2, n, f4);
    std::vector<GroupCode> support;
    for (const auto& [s, c] : a2.coeffs) support.push_back(s);
    CHECK(nr.domain == count_domain(z2, n, support));
    CHECK(nr.independent());
    if (n <= 4) CHECK(nr.rank == rank(ring_rep(a2, z2, n, f4).to_dense()));
  }
}

TEST_CASE("discreteness profile") {
  auto f2 = Field::make(2);
  auto f5 = Field::make(5);
  const FolnerSpec z(AmenableGroup::free_abelian(1));
  std::vector<unsigned> levels;
  for (unsigned n = 1; n <= 12; ++n) levels.push_back(n);

  for (const auto& p : discreteness_profile(z1(4), z1(4), z, levels, f2)) CHECK(p.distance == r(0));
  for (const auto& p : discreteness_profile(z1(0), z1(1), z, levels, f5)) CHECK(p.distance == r(1));
  const auto prof = discreteness_profile(z1(1), z1(2), z, levels, f2);
  for (const auto& p : prof) CHECK(p.distance == r(1) - r(1, std::int64_t{1} << p.level));
  for (std::size_t i = 0; i + 1 < prof.size(); ++i) CHECK(prof[i].distance <= prof[i + 1].distance);

  // Dense oracle on small levels, including Heisenberg.
  const FolnerSpec heis(AmenableGroup::heisenberg());
  const auto hp = discreteness_profile({1, 0, 0}, {0, 1, 0}, heis, {1, 2}, f2);
  for (const auto& p : hp) {
    const auto dense = folner_rep({1, 0, 0}, heis, p.level, f2).to_dense() -
                       folner_rep({0, 1, 0}, heis, p.level, f2).to_dense();
    CHECK(p.rank == rank(dense));
    CHECK(p.distance <= r(1));
  }
}

TEST_CASE("nesting") {
  auto f2 = Field::make(2);
  auto f3 = Field::make(3);
  const FolnerSpec z(AmenableGroup::free_abelian(1));
  const FolnerSpec z2(AmenableGroup::free_abelian(2));

  for (unsigned n = 0; n <= 11; ++n) {
    const auto rep = nesting_check(z, z1(0), n, f2);
    CHECK(rep.distance == r(0));
    const auto shift = nesting_check(z, z1(1), n, f2);
    CHECK(shift.boundary == r(1, std::int64_t{1} << n));
    CHECK(shift.ok());
  }
  for (const GroupCode& h : std::vector<GroupCode>{{1, 0}, {2, -1}, {-1, -1}}) {
    Rational prev(2);
    for (unsigned n = 1; n <= 5; ++n) {
      const auto rep = nesting_check(z2, h, n, f3);
      CHECK(rep.ok());
      CHECK(rep.distance <= prev);
      prev = rep.distance;
    }
  }
  CHECK_THROWS_AS(nesting_check(FolnerSpec(AmenableGroup::heisenberg()), {1, 0, 0}, 1, f2), usage_error);
}
