#include <doctest.h>

#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "slrank/errors.hpp"
#include "slrank/gf2.hpp"
#include "slrank/matrix.hpp"

using namespace slrank;

namespace {

MatF rows(const FieldPtr& f, std::vector<std::vector<std::uint32_t>> r) {
  return MatF::from_rows(f, r);
}

MatF random_invertible(const FieldPtr& f, std::size_t n, Rng& rng) {
  while (true) {
    MatF m = MatF::random(f, n, n, rng);
    if (det(m).v != 0) return m;
  }
}

}  // namespace

TEST_CASE("rank basics") {
  auto f2 = Field::make(2), f7 = Field::make(7);
  CHECK(rank(MatF::identity(f7, 5)) == 5);
  CHECK(rank(MatF(f7, 4, 6)) == 0);
  CHECK(rank(rows(f2, {{1, 1}, {1, 1}})) == 1);
  CHECK(rank(rows(f7, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}})) == 2);
  CHECK(rank(MatF(f2, 0, 3)) == 0);
}

TEST_CASE("determinant and inverse") {
  auto f3 = Field::make(3);
  const auto id = det_inv(MatF::identity(f3, 3));
  CHECK(id.det == Fq{1});
  CHECK(id.inverse->is_identity());

  const MatF swap = rows(f3, {{0, 1}, {1, 0}});
  const auto sw = det_inv(swap);
  CHECK(sw.det == Fq{2});
  CHECK(*sw.inverse == swap);

  const auto sing = det_inv(rows(f3, {{1, 2}, {2, 1}}));
  CHECK(sing.det == Fq{0});
  CHECK_FALSE(sing.inverse.has_value());

  Rng rng = make_stream(11);
  for (std::uint64_t q : {2, 4, 5, 9, 16}) {
    auto f = Field::make(q);
    for (int t = 0; t < 50; ++t) {
      const MatF m = MatF::random(f, 5, 5, rng);
      const auto di = det_inv(m);
      CHECK(di.det == det(m));
      CHECK(di.inverse.has_value() == (di.det.v != 0));
      CHECK(di.inverse.has_value() == (rank(m) == 5));
      if (di.inverse) {
        CHECK((m * *di.inverse).is_identity());
        CHECK((*di.inverse * m).is_identity());
      }
      // det is multiplicative.
      const MatF k = MatF::random(f, 5, 5, rng);
      CHECK(det(m * k) == f->mul(det(m), det(k)));
    }
  }
}

TEST_CASE("rank distance") {
  auto f2 = Field::make(2);
  const MatF id = MatF::identity(f2, 2);
  CHECK(rank_distance(id, id) == Rational(0));
  CHECK(rank_distance(id, rows(f2, {{0, 1}, {1, 0}})) == Rational(1, 2));
  CHECK_THROWS_AS(rank_distance(id, MatF::identity(f2, 3)), usage_error);
  CHECK_THROWS_AS(rank_distance(id, MatF::identity(Field::make(3), 2)), usage_error);

  Rng rng = make_stream(12);
  SUBCASE("bi-invariance under invertible multiplication") {
    for (std::uint64_t q : {2, 3}) {
      auto f = Field::make(q);
      for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + t % 6;
        const MatF g = MatF::random(f, n, n, rng), h = MatF::random(f, n, n, rng);
        const MatF k = random_invertible(f, n, rng);
        const Rational d = rank_distance(g, h);
        CHECK(rank_distance(k * g, k * h) == d);
        CHECK(rank_distance(g * k, h * k) == d);
      }
    }
  }
  SUBCASE("metric axioms") {
    auto f = Field::make(5);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + t % 5;
      // Low-rank perturbations keep distances away from the trivial value 1.
      const MatF a = sample_sl(n, f, rng).mat();
      const MatF b = a + MatF::random(f, n, 1, rng) * MatF::random(f, 1, n, rng);
      const MatF c = b + MatF::random(f, n, 1, rng) * MatF::random(f, 1, n, rng);
      CHECK(rank_distance(a, c) <= rank_distance(a, b) + rank_distance(b, c));
      CHECK(rank_distance(a, b) == rank_distance(b, a));
      CHECK((rank_distance(a, b) == Rational(0)) == (a == b));
      CHECK(rank_distance(a, b) >= Rational(0));
      CHECK(rank_distance(a, b) <= Rational(1));
    }
  }
}

TEST_CASE("conjugation products move at most m times the distance") {
  Rng rng = make_stream(13);
  auto f = Field::make(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 4;
    const SLElement g = sample_sl(n, f, rng);
    // g' close to g: a transvection-like perturbation.
    SLElement g2 = g;
    for (int tries = 0; tries < 20; ++tries) {
      MatF cand = g.mat() + MatF::random(f, n, 1, rng) * MatF::random(f, 1, n, rng);
      if (det(cand) == f->one()) {
        g2 = SLElement(cand);
        break;
      }
    }
    const std::size_t m = 1 + t % 5;
    MatF p1 = MatF::identity(f, n), p2 = MatF::identity(f, n);
    for (std::size_t i = 0; i < m; ++i) {
      const SLElement h = sample_sl(n, f, rng);
      const SLElement hi = h.inverse();
      p1 = p1 * (h * g * hi).mat();
      p2 = p2 * (h * g2 * hi).mat();
    }
    CHECK(rank_distance(p1, p2) <= Rational(static_cast<std::int64_t>(m)) * rank_distance(g.mat(), g2.mat()));
  }
}

TEST_CASE("packed GF(2) rank agrees with unpacked elimination") {
  Rng rng = make_stream(14);
  auto f2 = Field::make(2);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t r = 1 + draw_below(rng, 64), c = 1 + draw_below(rng, 64);
    const MatF m = MatF::random(f2, r, c, rng);
    REQUIRE(rank(BitMat::from(m)) == detail::rank_unpacked(m));
  }
  // Larger matrices with prescribed rank deficiency.
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 64 + draw_below(rng, 193), k = 1 + draw_below(rng, n);
    const MatF m = MatF::random(f2, n, k, rng) * MatF::random(f2, k, n, rng);
    REQUIRE(rank(BitMat::from(m)) == detail::rank_unpacked(m));
    CHECK(rank(m) <= k);
  }
}

TEST_CASE("packed products agree with unpacked products") {
  Rng rng = make_stream(15);
  auto f2 = Field::make(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = 1 + draw_below(rng, 150), b = 1 + draw_below(rng, 150), c = 1 + draw_below(rng, 150);
    const MatF x = MatF::random(f2, a, b, rng), y = MatF::random(f2, b, c, rng);
    REQUIRE((BitMat::from(x) * BitMat::from(y)).to_matf(f2) == x * y);
    REQUIRE((BitMat::from(x) + BitMat::from(x)) == BitMat(a, b));
  }
}

TEST_CASE("SL sampling") {
  Rng rng = make_stream(16);
  for (std::uint64_t q : {2, 3, 4, 5, 9}) {
    auto f = Field::make(q);
    CHECK(sample_sl(1, f, rng).mat().is_identity());
    for (int t = 0; t < 100; ++t) {
      const SLElement g = sample_sl(1 + t % 7, f, rng);
      CHECK(det(g.mat()) == f->one());
    }
  }
  // Packed sampler over GF(2): always invertible.
  for (std::size_t n : {1, 2, 63, 64, 65, 200}) {
    const BitMat g = BitMat::sample_gl(n, rng);
    CHECK(rank(g) == n);
  }
  CHECK_THROWS_AS(sample_sl(0, Field::make(3), rng), usage_error);
  CHECK_THROWS_AS(SLElement(MatF::from_rows(Field::make(3), {{2, 0}, {0, 1}})), usage_error);
}

TEST_CASE("packed sampler is uniform on GL_3(2) for every block split") {
  // 168 elements; the chi-square threshold is the 1 - 1e-3 quantile.
  const double limit = boost::math::quantile(boost::math::chi_squared(167), 1 - 1e-3);
  for (std::size_t tail : {0u, 1u, 2u, 3u}) {
    Rng rng = make_stream(300 + tail);
    std::map<std::uint32_t, std::uint64_t> counts;
    const std::uint64_t draws = 168 * 300;
    for (std::uint64_t t = 0; t < draws; ++t) {
      const BitMat g = BitMat::sample_gl(3, rng, tail);
      REQUIRE(rank(g) == 3);
      std::uint32_t key = 0;
      for (std::size_t i = 0; i < 9; ++i) key |= static_cast<std::uint32_t>(g.get(i / 3, i % 3)) << i;
      ++counts[key];
    }
    CHECK(counts.size() == 168);
    double stat = 0;
    for (const auto& [key, c] : counts) stat += (c - 300.0) * (c - 300.0) / 300.0;
    CHECK(stat < limit);
  }
}

TEST_CASE("packed echelon form") {
  Rng rng = make_stream(301);
  for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{{200, 300}, {300, 130}, {64, 64}, {17, 9}}) {
    // Low-rank products force non-pivot columns inside strips.
    const BitMat a = BitMat::random(rows, 40, rng) * BitMat::random(40, cols, rng);
    BitMat e = a;
    std::vector<std::size_t> piv;
    const std::size_t r = echelonize(e, &piv);
    CHECK(r == detail::rank_unpacked(a.to_matf(Field::make(2))));
    REQUIRE(piv.size() == r);
    for (std::size_t i = 0; i < r; ++i) {
      if (i) CHECK(piv[i - 1] < piv[i]);
      for (std::size_t c = 0; c < piv[i]; ++c) REQUIRE_FALSE(e.get(i, c));
      REQUIRE(e.get(i, piv[i]));
      for (std::size_t k = 0; k < r; ++k)
        if (k != i && piv[k] / 8 == piv[i] / 8) REQUIRE_FALSE(e.get(i, piv[k]));
    }
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t c = 0; c < cols; ++c) REQUIRE_FALSE(e.get(i, c));
  }
}

TEST_CASE("SL_2(3) has 24 elements and sampling reaches all of them") {
  auto f3 = Field::make(3);
  // Enumeration oracle over all 81 matrices.
  std::size_t count = 0;
  for (std::uint32_t code = 0; code < 81; ++code) {
    const MatF m = rows(f3, {{code % 3, code / 3 % 3}, {code / 9 % 3, code / 27}});
    if (det(m) == f3->one()) ++count;
  }
  CHECK(count == 24);

  Rng rng = make_stream(17);
  std::map<std::vector<Fq>, int> seen;
  for (int t = 0; t < 2400; ++t) ++seen[sample_sl(2, f3, rng).mat().data()];
  CHECK(seen.size() == 24);
  for (const auto& [k, v] : seen) {
    CHECK(v > 40);
    CHECK(v < 170);
  }
}

TEST_CASE("central distance") {
  auto f5 = Field::make(5);
  const auto id = central_distance(MatF::identity(f5, 3));
  CHECK(id.delta == Rational(0));
  CHECK(id.z == Fq{1});

  const MatF tv = rows(f5, {{1, 1}, {0, 1}});
  // Brute force over the scalars.
  Rational best(1);
  for (std::uint32_t z = 1; z < 5; ++z) best = std::min(best, rank_distance(tv, MatF::scalar(f5, 2, Fq{z})));
  CHECK(best == Rational(1, 2));
  const auto cd = central_distance(tv);
  CHECK(cd.delta == Rational(1, 2));
  CHECK(cd.z == Fq{1});

  const auto two = central_distance(MatF::scalar(f5, 2, Fq{2}));
  CHECK(two.delta == Rational(0));
  CHECK(two.z == Fq{2});
}

TEST_CASE("matrix text and JSON forms") {
  auto f4 = Field::make(4);
  const MatF m = rows(f4, {{0, 1, 2}, {3, 2, 1}});
  const std::string text = to_text(m);
  CHECK(text == "2 3 4\n(0,0) (1,0) (0,1)\n(1,1) (0,1) (1,0)\n");
  CHECK(matrix_from_text(text) == m);
  CHECK(matrix_from_json(to_json(m)) == m);
  CHECK_THROWS_AS(matrix_from_text("2 2 4\n(0,0) (1,0)\n"), usage_error);
  CHECK_THROWS_AS(matrix_from_text("1 1 4\n(0,0) (1,0)\n"), usage_error);
  CHECK_THROWS_AS(matrix_from_text("2 x 4"), usage_error);
  CHECK(matrix_from_text("1 2 7\n3 (6)\n") == rows(Field::make(7), {{3, 6}}));
}
