#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <array>
#include <set>

#include "slrank/errors.hpp"
#include "slrank/groups.hpp"

using namespace slrank;

namespace {

struct Fixture {
  GroupTable g;
  ConjClasses cc;
  StructureConstants a;
  CharTable t;
};

Fixture build(std::size_t n, std::uint64_t q, std::uint64_t seed = 1) {
  GroupTable g = GroupTable::enumerate(n, Field::make(q));
  ConjClasses cc = conjugacy_classes(g);
  StructureConstants a(g, cc);
  Rng rng = make_stream(seed);
  CharTable t = character_table(g, cc, a, rng);
  return {std::move(g), std::move(cc), std::move(a), std::move(t)};
}

// Conjugacy decided with matrix arithmetic only.
bool conjugate_by_matrices(const std::vector<MatF>& elems, const MatF& x, const MatF& y) {
  return std::any_of(elems.begin(), elems.end(), [&](const MatF& s) { return s * x == y * s; });
}

}  // namespace

TEST_CASE("group orders") {
  CHECK(sl_order(2, 3) == 24u);
  CHECK(sl_order(2, 5) == 120u);
  CHECK(sl_order(4, 2) == std::uint64_t{15 * 14 * 12 * 8});
  CHECK(sl_order(3, 3) == 5616u);
  for (std::uint64_t q : {2, 3, 4, 5, 7}) CHECK(GroupTable::enumerate(2, Field::make(q)).order() == q * (q * q - 1));
  CHECK(GroupTable::enumerate(4, Field::make(2)).order() == 20160);
  CHECK(GroupTable::enumerate(1, Field::make(5)).order() == 1);
  try {
    GroupTable::enumerate(3, Field::make(5));
    FAIL("expected resource_error");
  } catch (const resource_error& e) {
    CHECK(std::string(e.what()).find("372000") != std::string::npos);
  }
}

TEST_CASE("group table is closed and consistent") {
  const GroupTable g = GroupTable::enumerate(2, Field::make(5));
  CHECK(g.element(0).is_identity());
  for (GroupTable::Index x = 0; x < g.order(); ++x) {
    CHECK(det(g.element(x)) == Fq{1});
    CHECK(g.mul(x, g.inv(x)) == 0);
    CHECK(g.index_of(g.element(x)) == x);
  }
  Rng rng = make_stream(31);
  for (int t = 0; t < 500; ++t) {
    const auto x = static_cast<GroupTable::Index>(draw_below(rng, g.order()));
    const auto y = static_cast<GroupTable::Index>(draw_below(rng, g.order()));
    CHECK(g.element(g.mul(x, y)) == g.element(x) * g.element(y));
  }
}

TEST_CASE("conjugacy classes") {
  const GroupTable g = GroupTable::enumerate(2, Field::make(3));
  const ConjClasses cc = conjugacy_classes(g);
  CHECK(cc.count() == 7);
  CHECK(cc.class_of[0] == 0);
  CHECK(cc.sizes[0] == 1);
  std::uint64_t total = 0;
  for (auto s : cc.sizes) {
    total += s;
    CHECK(g.order() % s == 0);
  }
  CHECK(total == g.order());

  std::vector<MatF> elems;
  for (GroupTable::Index x = 0; x < g.order(); ++x) elems.push_back(g.element(x));
  for (GroupTable::Index x = 0; x < g.order(); ++x)
    for (GroupTable::Index y = 0; y < g.order(); ++y)
      REQUIRE((cc.class_of[x] == cc.class_of[y]) == conjugate_by_matrices(elems, elems[x], elems[y]));

  // Scalars with z^2 = 1 are singleton classes.
  for (std::uint32_t z : {1u, 2u}) CHECK(cc.sizes[cc.class_of[*g.index_of(MatF::scalar(g.field(), 2, Fq{z}))]] == 1);
}

TEST_CASE("character table of SL_2(3)") {
  const Fixture f = build(2, 3);
  std::multiset<std::uint64_t> degs(f.t.degrees.begin(), f.t.degrees.end());
  CHECK(degs == std::multiset<std::uint64_t>{1, 1, 1, 2, 2, 2, 3});
  for (std::size_t c = 0; c < f.cc.count(); ++c) CHECK(std::abs(f.t.values(0, static_cast<Eigen::Index>(c)) - 1.0) < 1e-12);
  CHECK(f.t.orthogonality_residual < 1e-8);
  double col = 0;
  for (auto d : f.t.degrees) col += static_cast<double>(d * d);
  CHECK(col == 24);
  // Degrees are the values on the identity class.
  for (std::size_t i = 0; i < f.t.count(); ++i)
    CHECK(std::abs(f.t.values(static_cast<Eigen::Index>(i), 0) - static_cast<double>(f.t.degrees[i])) < 1e-9);
}

TEST_CASE("structure constants match the character formula on SL_2(5)") {
  const Fixture f = build(2, 5);
  const double order = 120;
  const std::size_t r = f.cc.count();
  double worst = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        std::complex<double> s = 0;
        for (std::size_t x = 0; x < f.t.count(); ++x) {
          const auto xi = static_cast<Eigen::Index>(x);
          s += f.t.values(xi, static_cast<Eigen::Index>(i)) * f.t.values(xi, static_cast<Eigen::Index>(j)) *
               f.t.values(xi, static_cast<Eigen::Index>(f.cc.inverse_class[k])) / static_cast<double>(f.t.degrees[x]);
        }
        const auto formula = static_cast<double>(f.cc.sizes[i] * f.cc.sizes[j]) / order * s;
        worst = std::max(worst, std::abs(formula - static_cast<double>(f.a(i, j, k))));
      }
  CHECK(worst < 1e-6);
}

TEST_CASE("Gluck bound") {
  const Fixture f5 = build(2, 5);
  const GluckResult r5 = gluck_check(f5.g, f5.cc, f5.t);
  CHECK(r5.max_ratio == doctest::Approx((1 + std::sqrt(5.0)) / 4).epsilon(1e-9));
  CHECK(r5.holds());
  CHECK_FALSE(f5.cc.central(r5.cls));
  // Central classes reach ratio one, which is why they are excluded.
  const auto maxima = class_character_maxima(f5.cc, f5.t);
  for (std::size_t c = 0; c < f5.cc.count(); ++c)
    if (f5.cc.central(c)) CHECK(maxima[c] == doctest::Approx(1.0));

  const Fixture f13 = build(2, 13);
  CHECK(f13.t.orthogonality_residual < 1e-8);
  const GluckResult r13 = gluck_check(f13.g, f13.cc, f13.t);
  CHECK(r13.max_ratio < 8.0 / 13);
}

TEST_CASE("character table JSON export") {
  const Fixture f = build(2, 2);
  const auto j = to_json(f.t, f.g, f.cc);
  CHECK(j["order"] == 6);
  CHECK(j["classes"].size() == 3);
  CHECK(j["characters"][0]["values"][1] == nlohmann::json::array({1.0, 0.0}));
}

TEST_CASE("covering numbers") {
  const Fixture f = build(2, 5);
  const GroupTable& g = f.g;
  CHECK_FALSE(covering_number(f.cc, f.a, 0).has_value());
  for (std::size_t c = 0; c < f.cc.count(); ++c) {
    const auto m = covering_number(f.cc, f.a, c);
    if (f.cc.central(c)) {
      CHECK_FALSE(m.has_value());
      continue;
    }
    REQUIRE(m.has_value());
    CHECK(m == covering_number(f.cc, f.a, f.cc.inverse_class[c]));
    // Element-level oracle: grow C^k as a set of elements.
    std::vector<GroupTable::Index> cls;
    for (GroupTable::Index x = 0; x < g.order(); ++x)
      if (f.cc.class_of[x] == c) cls.push_back(x);
    std::set<GroupTable::Index> power(cls.begin(), cls.end());
    unsigned k = 1;
    while (power.size() < g.order()) {
      std::set<GroupTable::Index> next;
      for (auto x : power)
        for (auto y : cls) next.insert(*g.index_of(g.element(x) * g.element(y)));
      power = std::move(next);
      ++k;
      REQUIRE(k < 20);
    }
    CHECK(*m == k);
    const auto delta = central_distance(g.element(f.cc.reps[c])).delta;
    CHECK(delta > Rational(0));
  }
}

TEST_CASE("center") {
  for (auto [n, q, size] : std::vector<std::array<std::uint64_t, 3>>{{2, 5, 2}, {2, 2, 1}, {2, 3, 2}, {2, 9, 2}, {3, 2, 1}, {2, 4, 1}}) {
    const GroupTable g = GroupTable::enumerate(n, Field::make(q));
    const CenterReport c = group_center(g);
    CHECK(c.center.size() == size);
    CHECK(c.matches());
    // Exhaustive centralizer scan.
    std::vector<GroupTable::Index> scan;
    for (GroupTable::Index x = 0; x < g.order(); ++x) {
      bool central = true;
      for (GroupTable::Index y = 0; y < g.order() && central; ++y) central = g.mul(x, y) == g.mul(y, x);
      if (central) scan.push_back(x);
    }
    CHECK(scan == c.center);
    for (auto z : c.center) CHECK(central_distance(g.element(z)).delta == Rational(0));
  }
}
