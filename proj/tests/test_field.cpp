#include <doctest.h>

#include <stdexcept>

#include "slrank/errors.hpp"
#include "slrank/field.hpp"

using namespace slrank;

namespace {

// Brute-force inverse: scan every element.
Fq inverse_by_search(const Field& f, Fq a) {
  for (std::uint32_t y = 0; y < f.order(); ++y)
    if (f.mul(a, Fq{y}) == f.one()) return Fq{y};
  throw std::logic_error("no inverse");
}

}  // namespace

TEST_CASE("prime powers") {
  CHECK(PrimePower::from_order(81) == PrimePower{3, 4, 81});
  CHECK(PrimePower::from_order(2) == PrimePower{2, 1, 2});
  CHECK_THROWS_AS(PrimePower::from_order(6), usage_error);
  CHECK_THROWS_AS(PrimePower::from_order(1), usage_error);
  CHECK_THROWS_AS(PrimePower::make(4, 1), usage_error);
  CHECK_THROWS_AS(PrimePower::make(2, 32), usage_error);
}

TEST_CASE("small field arithmetic") {
  auto f2 = Field::make(2);
  CHECK(f2->add(f2->one(), f2->one()) == f2->zero());

  // GF(4) with s^2 = s + 1: s has code 2, s + 1 has code 3.
  auto f4 = Field::make(4);
  CHECK(f4->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  const Fq s{2}, s1{3};
  CHECK(f4->mul(s, s) == s1);
  CHECK(f4->inv(s) == inverse_by_search(*f4, s));
  CHECK(f4->inv(s) == s1);

  CHECK_THROWS_AS(f4->inv(f4->zero()), std::domain_error);
  CHECK_THROWS_AS(f4->div(s, f4->zero()), std::domain_error);
  CHECK(f4->pow(s, 3) == f4->one());
  CHECK(f4->pow(f4->zero(), 0) == f4->one());
}

TEST_CASE("default moduli are the lowest irreducibles") {
  CHECK(Field::make(8)->modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(Field::make(9)->modulus() == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(Field::make(25)->modulus() == std::vector<std::uint32_t>{2, 0, 1});
  CHECK(is_irreducible_mod_p(2, {1, 1, 0, 0, 1}));
  CHECK_FALSE(is_irreducible_mod_p(2, {1, 0, 0, 0, 1}));
  CHECK_FALSE(is_irreducible_mod_p(3, {2, 0, 1}));
  CHECK_THROWS_AS(Field::with_modulus(2, {1, 0, 1}), usage_error);
}

TEST_CASE("field axioms hold exhaustively for small fields") {
  Rng rng = make_stream(1);
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 125}) {
    CAPTURE(q);
    const auto rep = check_field_axioms(*Field::make(q), rng);
    CHECK(rep.exhaustive);
    CHECK(rep.failures == 0);
  }
}

TEST_CASE("field axioms hold on random triples for large fields") {
  Rng rng = make_stream(2);
  for (std::uint64_t q : {2187ull, 65536ull, 65537ull, 131072ull, 1594323ull}) {
    CAPTURE(q);
    auto f = Field::make(q);
    CHECK(f->has_tables() == (q <= Field::kTableLimit));
    const auto rep = check_field_axioms(*f, rng, 2000);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.failures == 0);
    // The primitive element generates the multiplicative group.
    CHECK(f->pow(f->primitive(), q - 1) == f->one());
  }
}

TEST_CASE("quadratic extensions") {
  SUBCASE("over GF(2)") {
    const auto ext = build_quad_ext(Field::make(2));
    CHECK(ext.alpha == Fq{1});
    CHECK(ext.beta == Fq{1});
    CHECK(ext.method == "root-scan");
    CHECK(ext.field->order() == 4);
  }
  SUBCASE("over GF(3)") {
    auto f3 = Field::make(3);
    // x^2 - x - 1 at 0, 1, 2 takes the values -1, -1, 1: no root.
    for (std::uint32_t x = 0; x < 3; ++x) {
      const Fq v = f3->sub(f3->sub(f3->mul(Fq{x}, Fq{x}), Fq{x}), f3->one());
      CHECK(v.v != 0);
    }
    const auto ext = build_quad_ext(f3);
    CHECK(ext.alpha == Fq{1});
    CHECK(ext.beta == Fq{1});
    CHECK(ext.field->order() == 9);
  }
  SUBCASE("sigma satisfies its quadratic") {
    for (std::uint64_t q : {2, 3, 4, 5, 9, 16}) {
      const auto ext = build_quad_ext(Field::make(q));
      const Field& e = *ext.field;
      const Fq s = ext.sigma();
      CHECK(e.mul(s, s) == e.add(e.mul(ext.alpha, s), ext.beta));
    }
  }
  SUBCASE("frobenius test agrees with root scan") {
    for (std::uint64_t q : {2, 3, 4, 5, 7, 9, 16, 25}) {
      auto f = Field::make(q);
      for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b) {
          std::string m1, m2;
          const bool scan = quadratic_is_irreducible(*f, Fq{a}, Fq{b}, q, &m1);
          const bool frob = quadratic_is_irreducible(*f, Fq{a}, Fq{b}, 0, &m2);
          CHECK(m1 == "root-scan");
          CHECK(m2 == "frobenius");
          CHECK(scan == frob);
        }
    }
  }
  SUBCASE("reducible presentations are rejected") {
    CHECK_THROWS_AS(Field::quadratic(Field::make(3), Fq{0}, Fq{1}), usage_error);
  }
}

TEST_CASE("galois conjugation") {
  const auto ext = build_quad_ext(Field::make(2));
  const Field& e = *ext.field;
  const Fq s = ext.sigma();
  CHECK(galois_conjugate(s, ext) == Fq{3});  // alpha - s = s + 1
  CHECK(galois_conjugate(Fq{1}, ext) == Fq{1});
  CHECK(galois_conjugate(Fq{0}, ext) == Fq{0});
  CHECK(e.mul(s, galois_conjugate(s, ext)) == e.one());

  Rng rng = make_stream(3);
  for (std::uint64_t q : {2, 3, 4, 5, 7, 9, 11, 13, 16}) {
    const auto x = build_quad_ext(Field::make(q));
    const auto rep = check_conjugation(x, rng);
    CAPTURE(q);
    CHECK(rep.exhaustive == (q * q <= 256));
    CHECK(rep.failures == 0);
  }
}

TEST_CASE("towers") {
  const auto t = build_tower(PrimePower::from_order(2), 2);
  REQUIRE(t.fields.size() == 3);
  CHECK(t.fields[0]->order() == 2);
  CHECK(t.fields[1]->order() == 4);
  CHECK(t.fields[2]->order() == 16);
  CHECK(build_tower(PrimePower::from_order(3), 1).top()->order() == 9);
  CHECK(build_tower(PrimePower::from_order(5), 0).top()->order() == 5);

  Rng rng = make_stream(4);
  const auto deep = build_tower(PrimePower::from_order(2), 4);
  CHECK(deep.top()->order() == 65536);
  for (const auto& step : deep.steps) {
    CHECK(quadratic_is_irreducible(*step.base, step.alpha, step.beta));
    CHECK(check_conjugation(step, rng, 500).failures == 0);
  }
  CHECK(check_field_axioms(*deep.top(), rng, 2000).failures == 0);

  // Deterministic: a rebuild gives the same presentation at every level.
  const auto again = build_tower(PrimePower::from_order(2), 4);
  for (std::size_t k = 0; k < deep.steps.size(); ++k) {
    CHECK(deep.steps[k].alpha == again.steps[k].alpha);
    CHECK(deep.steps[k].beta == again.steps[k].beta);
    CHECK(deep.fields[k + 1]->descriptor() == again.fields[k + 1]->descriptor());
  }

  CHECK_THROWS_AS(build_tower(PrimePower::from_order(2), 6), resource_error);
  // Above the scan cap the Frobenius test is used and recorded.
  const auto frob = build_tower(PrimePower::from_order(3), 2, 4);
  CHECK(frob.steps[0].method == "root-scan");
  CHECK(frob.steps[1].method == "frobenius");
}

TEST_CASE("base codes are preserved by the extension") {
  const auto ext = build_quad_ext(Field::make(5));
  const Field& k = *ext.base;
  const Field& e = *ext.field;
  for (std::uint32_t a = 0; a < 5; ++a)
    for (std::uint32_t b = 0; b < 5; ++b) {
      CHECK(e.add(Fq{a}, Fq{b}) == k.add(Fq{a}, Fq{b}));
      CHECK(e.mul(Fq{a}, Fq{b}) == k.mul(Fq{a}, Fq{b}));
    }
}

TEST_CASE("text and JSON forms") {
  auto f8 = Field::make(8);
  CHECK(f8->format(Fq{5}) == "(1,0,1)");
  CHECK(f8->parse("(1,0,1)") == Fq{5});
  CHECK(f8->parse(" ( 1, 1 ,0 ) ") == Fq{3});
  CHECK_THROWS_AS(f8->parse("(1,2,0)"), usage_error);
  CHECK_THROWS_AS(f8->parse("(1,0)"), usage_error);
  CHECK_THROWS_AS(f8->parse("x"), usage_error);
  auto f7 = Field::make(7);
  CHECK(f7->parse("6") == Fq{6});
  CHECK(f7->format(Fq{6}) == "(6)");
  CHECK(f7->from_int(-1) == Fq{6});

  const auto t = build_tower(PrimePower::from_order(3), 2);
  for (const auto& f : t.fields) {
    const auto j = to_json(*f);
    auto back = field_from_json(j);
    CHECK(same_field(*back, *f));
    for (std::uint32_t x = 0; x < f->order(); x += 7) CHECK(f->parse(f->format(Fq{x})) == Fq{x});
  }
  CHECK(to_json(*Field::make(4)).dump() == R"({"h":2,"modulus":[1,1,1],"p":2,"q":4})");
  CHECK_THROWS_AS(field_from_json(nlohmann::json{{"q", 4}}), usage_error);
}
