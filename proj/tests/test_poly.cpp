#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <utility>
#include <vector>

#include "starset/poly.hpp"

using namespace starset;

TEST_CASE("products of linear factors", "[poly]") {
  field F = field::build(5, 1);
  fpoly a({2, 1}), b({3, 1});  // x+2 and x+3
  REQUIRE(p_mul(F, a, b) == fpoly({1, 0, 1}));  // x^2 + 1 over F_5
  REQUIRE(!is_irreducible(F, fpoly({1, 0, 1})));
  factorization fac = factor(F, fpoly({1, 0, 1}));
  REQUIRE(fac.unit == 1);
  REQUIRE(fac.factors.size() == 2);
  REQUIRE(fac.factors[0].first == fpoly({2, 1}));
  REQUIRE(fac.factors[0].second == 1);
  REQUIRE(fac.factors[1].first == fpoly({3, 1}));
}

TEST_CASE("power-part decomposition", "[poly]") {
  field F = field::build(7, 1);
  fpoly h({2, 0, 4, 0, 2});  // 2x^4 + 4x^2 + 2 = 2 (x^2+1)^2
  power_part_result pp = power_part(F, h);
  REQUIRE(pp.c == 2);
  REQUIRE(pp.f == fpoly({1, 0, 1}));
  REQUIRE(pp.ell == 2);

  power_part_result pp3 = power_part(F, fpoly({0, 0, 0, 1}));  // x^3
  REQUIRE(pp3.c == 1);
  REQUIRE(pp3.f == fpoly::x());
  REQUIRE(pp3.ell == 3);

  REQUIRE(is_dth_power_multiple(F, h, 1));
  REQUIRE(is_dth_power_multiple(F, h, 2));
  REQUIRE(!is_dth_power_multiple(F, h, 4));
  REQUIRE(is_dth_power_multiple(F, fpoly::constant(3), 5));  // constants are every power
  REQUIRE(radical_root_count(F, h) == 2);                    // x^2+1 irreducible over F_7
  REQUIRE_THROWS_AS(power_part(F, fpoly()), error);
  REQUIRE_THROWS_AS(power_part(F, fpoly::constant(2)), error);
}

TEST_CASE("squarefree splitting across characteristics", "[poly]") {
  field F5 = field::build(5, 1);
  factorization fac = factor(F5, fpoly({0, 4, 0, 1}));  // x^3 - x = x(x-1)(x+1)
  REQUIRE(fac.factors.size() == 3);
  for (const auto& [pi, e] : fac.factors) {
    REQUIRE(pi.deg() == 1);
    REQUIRE(e == 1);
  }
  REQUIRE(radical_root_count(F5, fpoly({0, 4, 0, 1})) == 3);

  // derivative vanishes identically: x^6 + 1 = (x^2+1)^3 over F_3
  field F3 = field::build(3, 1);
  factorization fg = factor(F3, fpoly({1, 0, 0, 0, 0, 0, 1}));
  REQUIRE(fg.factors.size() == 1);
  REQUIRE(fg.factors[0].first == fpoly({1, 0, 1}));
  REQUIRE(fg.factors[0].second == 3);

  // char 2: x^4 + 1 = (x+1)^4
  field F2 = field::build(2, 1);
  factorization fh = factor(F2, fpoly({1, 0, 0, 0, 1}));
  REQUIRE(fh.factors.size() == 1);
  REQUIRE(fh.factors[0].first == fpoly({1, 1}));
  REQUIRE(fh.factors[0].second == 4);
}

TEST_CASE("full splitting over extension fields", "[poly]") {
  field F = field::build(3, 2);  // F_9
  // x^8 - 1 = product of x - c over the eight units
  std::vector<elt> c(9, 0);
  c[0] = F.neg(1);
  c[8] = 1;
  factorization fac = factor(F, fpoly(std::move(c)));
  REQUIRE(fac.factors.size() == 8);
  for (const auto& [pi, e] : fac.factors) {
    REQUIRE(pi.deg() == 1);
    REQUIRE(e == 1);
  }

  // char-2 extension: x^2 + x + 1 has both roots in F_4
  field F4 = field::build(2, 2);
  factorization f4 = factor(F4, fpoly({1, 1, 1}));
  REQUIRE(f4.factors.size() == 2);
  REQUIRE(f4.factors[0].first.deg() == 1);
  REQUIRE(f4.factors[1].first.deg() == 1);
}

TEST_CASE("factorization is canonical and seed-independent", "[poly]") {
  field F = field::build(7, 1);
  // f = 4 x (x+1) (x+3)^2 (x^2+1)
  fpoly f = fpoly::x();
  f = p_mul(F, f, fpoly({1, 1}));
  f = p_mul(F, f, p_mul(F, fpoly({3, 1}), fpoly({3, 1})));
  f = p_mul(F, f, fpoly({1, 0, 1}));
  f = p_scale(F, f, 4);
  factorization fa = factor(F, f, 1);
  factorization fb = factor(F, f, 987654321);
  REQUIRE(fa.unit == 4);
  REQUIRE(fa.unit == fb.unit);
  REQUIRE(fa.factors == fb.factors);
  bool saw_square = false;
  for (const auto& [pi, e] : fa.factors)
    if (pi == fpoly({3, 1})) {
      REQUIRE(e == 2);
      saw_square = true;
    }
  REQUIRE(saw_square);
}

TEST_CASE("division, gcd and evaluation", "[poly]") {
  field F = field::build(13, 1);
  std::mt19937_64 rng(7);
  auto rand_poly = [&](u32 deg) {
    std::vector<elt> c(deg + 1);
    for (auto& x : c) x = rng() % 13;
    c[deg] = 1 + rng() % 12;
    return fpoly(c);
  };
  for (int it = 0; it < 50; ++it) {
    fpoly a = rand_poly(rng() % 6), b = rand_poly(rng() % 3);
    auto [q, r] = p_divmod(F, a, b);
    REQUIRE(p_add(F, p_mul(F, q, b), r) == a);
    REQUIRE(r.deg() < b.deg());
    fpoly gcd = p_gcd(F, a, b);
    REQUIRE(p_divmod(F, a, gcd).second.is_zero());
    REQUIRE(p_divmod(F, b, gcd).second.is_zero());
    REQUIRE((gcd.is_zero() || gcd.lc() == 1));
  }
  REQUIRE(p_eval(F, fpoly({6, 0, 1}), 4) == 9);  // 16 + 6 mod 13
  REQUIRE(p_derivative(F, fpoly({0, 2, 0, 1})) == fpoly({2, 0, 3}));
  REQUIRE(p_derivative(F, fpoly::constant(5)).is_zero());
  REQUIRE_THROWS_AS(p_divmod(F, fpoly::x(), fpoly()), error);
}

TEST_CASE("modular exponentiation of polynomials", "[poly]") {
  field F = field::build(5, 1);
  fpoly mod({1, 0, 1});  // x^2 + 1
  fpoly x = fpoly::x();
  // x^2 = -1, x^4 = 1 (mod x^2+1)
  REQUIRE(p_powmod(F, x, 2, mod) == fpoly::constant(4));
  REQUIRE(p_powmod(F, x, 4, mod) == fpoly::constant(1));
  REQUIRE(p_mulmod(F, x, x, mod) == fpoly::constant(4));
}

TEST_CASE("value sets", "[poly]") {
  field F = field::build(7, 1);
  REQUIRE(value_set(F, fpoly({0, 0, 1})) == std::vector<elt>{0, 1, 2, 4});
  REQUIRE(value_set(F, fpoly::x()).size() == 7);
  REQUIRE(value_set(F, fpoly({0, 0, 0, 1})) == std::vector<elt>{0, 1, 6});
}

TEST_CASE("polynomial text round trips", "[poly]") {
  field F = field::build(7, 1);
  REQUIRE(format_poly(F, fpoly({6, 0, 1})) == "6,0,1");
  REQUIRE(parse_poly(F, "6,0,1") == fpoly({6, 0, 1}));
  REQUIRE(parse_poly(F, "0") == fpoly());
  REQUIRE(format_poly(F, fpoly()) == "0");
  REQUIRE_THROWS_AS(parse_poly(F, ""), error);
  REQUIRE_THROWS_AS(parse_poly(F, "1,,2"), error);

  field F9 = field::build(3, 2);
  fpoly g({5, 0, 7});
  REQUIRE(parse_poly(F9, format_poly(F9, g)) == g);
}

TEST_CASE("irreducibility testing", "[poly]") {
  field F2 = field::build(2, 1);
  REQUIRE(is_irreducible(F2, fpoly({1, 1, 0, 1})));    // x^3 + x + 1
  REQUIRE(is_irreducible(F2, fpoly({1, 0, 1, 1})));    // x^3 + x^2 + 1
  REQUIRE(!is_irreducible(F2, fpoly({1, 1, 1, 1})));   // (x+1)^3
  field F7 = field::build(7, 1);
  REQUIRE(is_irreducible(F7, fpoly({1, 0, 1})));
  REQUIRE(!is_irreducible(F7, fpoly::constant(3)));
  field F9 = field::build(3, 2);
  // x^2 - g is irreducible when g generates the unit group (g is a nonsquare)
  REQUIRE(is_irreducible(F9, fpoly({F9.neg(F9.generator()), 0, 1})));
}
