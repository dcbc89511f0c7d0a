#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "starset/chars.hpp"

using namespace starset;

TEST_CASE("quadratic character sum for a rootless quadratic", "[chars]") {
  field F = field::build(7, 1);
  unity_table tab = unity_table::make(F);
  character chi{&F, 3};  // (-1)^dlog: the order-2 character
  REQUIRE(chi.order() == 2);
  REQUIRE(!chi.trivial());
  REQUIRE(character{&F, 0}.trivial());

  char_sum_result s = char_sum(chi, fpoly({1, 0, 1}), 1, &tab);
  REQUIRE(std::abs(s.value.real() - (-1.0)) < 1e-9);
  REQUIRE(std::abs(s.value.imag()) < 1e-9);
  REQUIRE(s.bound == Catch::Approx(std::sqrt(7.0)));
  REQUIRE(s.magnitude <= s.bound);
  REQUIRE_THROWS_AS(char_sum(chi, fpoly({1, 0, 1}), 0, &tab), error);
  REQUIRE_THROWS_AS(char_sum(chi, fpoly::constant(2), 1, &tab), error);
}

TEST_CASE("characters are multiplicative and orthogonal", "[chars]") {
  for (auto [p, m] : std::vector<std::pair<u64, u32>>{{7, 1}, {3, 2}}) {
    field F = field::build(p, m);
    unity_table tab = unity_table::make(F);
    for (u64 j = 0; j < F.q1(); ++j) {
      character chi{&F, j};
      std::complex<double> total{0, 0};
      for (elt a = 1; a < F.q(); ++a) {
        total += char_value(chi, a, &tab);
        for (elt b = 1; b < F.q(); ++b) {
          std::complex<double> lhs = char_value(chi, F.mul(a, b), &tab);
          std::complex<double> rhs = char_value(chi, a, &tab) * char_value(chi, b, &tab);
          REQUIRE(std::abs(lhs - rhs) < 1e-9);
        }
      }
      if (j == 0) {
        REQUIRE(std::abs(total - std::complex<double>(static_cast<double>(F.q1()), 0)) < 1e-9);
      } else {
        REQUIRE(std::abs(total) < 1e-9);
      }
    }
  }
}

TEST_CASE("square-root cancellation verified exhaustively at q = 7", "[chars]") {
  field F = field::build(7, 1);
  unity_table tab = unity_table::make(F);
  weil_report rep = weil_verify(F, fpoly({1, 0, 1}), 1e-6, &tab);
  REQUIRE(rep.pass);
  REQUIRE(rep.checked == 5 * 6);  // five nontrivial characters, six scalings
  REQUIRE(rep.skipped == 0);
  REQUIRE(rep.violations.empty());
  // some of these sums are Jacobi sums of magnitude exactly sqrt(q)
  REQUIRE(rep.max_ratio <= 1.0 + 1e-9);
  REQUIRE(rep.max_ratio >= 1.0 - 1e-9);

  // x^2 is a square times a constant: the order-2 character must be skipped
  weil_report rep2 = weil_verify(F, fpoly({0, 0, 1}), 1e-6, &tab);
  REQUIRE(rep2.pass);
  REQUIRE(rep2.skipped == 1);
  REQUIRE(rep2.checked == 4 * 6);

  REQUIRE_THROWS_AS(weil_verify(F, fpoly({0, 0, 2}), 1e-6, &tab), error);  // not monic
  REQUIRE_THROWS_AS(weil_verify(F, fpoly::constant(1), 1e-6, &tab), error);
}

TEST_CASE("representation counts", "[chars]") {
  field F = field::build(7, 1);
  unit_set squares = unit_set::from_elements(F, {1, 2, 4});
  REQUIRE(count_representations(F, squares, squares, fpoly({0, 0, 1})) == 18);
  unit_set all = unit_set::all_units(F);
  REQUIRE(count_representations(F, all, all, fpoly({1, 0, 1})) == 42);
}

TEST_CASE("pair products hit the value set when the sets are large", "[chars]") {
  field F = field::build(7, 1);
  unit_set all = unit_set::all_units(F);
  pair_product_report rep = pair_product_check(F, fpoly({1, 0, 1}), all, all);
  REQUIRE(rep.threshold_holds);
  REQUIRE(rep.representations > 0);
  REQUIRE(rep.implication_ok);

  unit_set one = unit_set::from_elements(F, {3});
  pair_product_report rep2 = pair_product_check(F, fpoly({1, 0, 1}), one, one);
  REQUIRE(!rep2.threshold_holds);
  REQUIRE(rep2.implication_ok);

  // hypothesis violations: a power multiple, and degrees outside (1, q)
  REQUIRE_THROWS_AS(pair_product_check(F, fpoly({0, 0, 1}), one, one), error);
  REQUIRE_THROWS_AS(pair_product_check(F, fpoly({3, 1}), one, one), error);
}

TEST_CASE("random pair-product grid never breaks the guarantee", "[chars]") {
  field F = field::build(11, 1);
  std::mt19937_64 rng(42);
  fpoly f({1, 0, 1});  // irreducible over F_11
  for (int it = 0; it < 40; ++it) {
    unit_set A = unit_set::empty(F), B = unit_set::empty(F);
    for (u64 t = 0; t < F.q1(); ++t) {
      if (rng() & 1) A.bits.set(t);
      if (rng() & 1) B.bits.set(t);
    }
    if (A.size() == 0 || B.size() == 0) continue;
    pair_product_report rep = pair_product_check(F, f, A, B);
    REQUIRE(rep.implication_ok);
  }
}

TEST_CASE("distinct-product threshold arithmetic", "[chars]") {
  REQUIRE(product_constant(7, 2) == frac::make(6, 5));
  REQUIRE(product_constant(81, 2) == frac::make(80, 79));
  REQUIRE(distinct_product_threshold(81, 2, 2, 79));
  REQUIRE(!distinct_product_threshold(81, 2, 2, 78));
  REQUIRE(!distinct_product_threshold(81, 2, 2, 5));
  // degree 1 collapses the threshold to 2k + 2
  REQUIRE(distinct_product_threshold(13, 1, 2, 6));
  REQUIRE(!distinct_product_threshold(13, 1, 2, 5));
  REQUIRE_THROWS_AS(distinct_product_threshold(7, 7, 2, 3), error);
}

TEST_CASE("distinct product witnesses", "[chars]") {
  field F = field::build(3, 4);  // 81 elements
  fpoly f({0, 1, 1});            // x^2 + x, two distinct roots
  std::vector<unit_set> sets{unit_set::all_units(F), unit_set::all_units(F)};
  distinct_product_witness w = find_distinct_product_witness(F, f, sets);
  REQUIRE(w.state == witness_state::found);
  REQUIRE(w.elems.size() == 2);
  REQUIRE(w.elems[0] != w.elems[1]);
  elt prod = F.mul(w.elems[0], w.elems[1]);
  REQUIRE(prod == w.product);
  REQUIRE(p_eval(F, f, w.x0) == prod);

  // both slots forced to the same single element: no distinct witness exists
  field F5 = field::build(5, 1);
  std::vector<unit_set> same{unit_set::from_elements(F5, {2}), unit_set::from_elements(F5, {2})};
  distinct_product_witness none = find_distinct_product_witness(F5, fpoly({0, 0, 1}), same);
  REQUIRE(none.state == witness_state::none);

  // a tiny node budget cannot settle the three-fold search
  std::vector<unit_set> big{unit_set::all_units(F), unit_set::all_units(F),
                            unit_set::all_units(F)};
  distinct_product_witness capped = find_distinct_product_witness(F, fpoly({0, 1, 1}), big, 2);
  REQUIRE(capped.state == witness_state::inconclusive);
}
