#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <vector>

#include "starset/sumsets.hpp"

using namespace starset;

TEST_CASE("sumsets by doubling match iterated sums", "[sumsets]") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    u32 n = 2 + static_cast<u32>(rng() % 17);
    zn_set B = zn_set::empty(n);
    for (u32 i = 0; i < n; ++i)
      if (rng() & 1) B.add(i);
    if (B.size() == 0) continue;
    REQUIRE(k_fold_sumset(B, 1) == B);
    zn_set acc = B;
    for (u32 k = 2; k <= 5; ++k) {
      acc = sumset(acc, B);
      REQUIRE(acc == k_fold_sumset(B, k));
    }
  }
}

TEST_CASE("frozen extremal sizes in small cyclic groups", "[sumsets]") {
  m_record r1 = m_exact(2, 3, 0);
  REQUIRE(r1.value.has_value());
  REQUIRE(*r1.value == 1);
  REQUIRE(r1.witness->elements() == std::vector<u32>{1});

  m_bounds_result b = m_bounds(2, 4);
  REQUIRE(b.lower == 1);
  REQUIRE(b.upper == 2);
  REQUIRE(*m_exact(2, 4, 0).value == 1);

  m_record r2 = m_exact(2, 4, 1);
  REQUIRE(*r2.value == 2);
  REQUIRE(r2.witness->elements() == std::vector<u32>{0, 2});

  REQUIRE(*m_exact(2, 6, 0).value == 2);
  REQUIRE(*m_exact(3, 7, 0).value == 2);
  REQUIRE(*m_exact(2, 5, 0).value == 2);

  // every witness avoids its target by construction
  for (u32 n = 1; n <= 10; ++n)
    for (u32 s = 0; s < n; ++s) {
      m_record r = m_exact(2, n, s);
      if (*r.value > 0) REQUIRE(!k_fold_sumset(*r.witness, 2).has(s));
      REQUIRE(r.lower <= *r.value);
      REQUIRE(*r.value <= r.upper);
    }
}

TEST_CASE("the zero rule", "[sumsets]") {
  REQUIRE(zero_rule(2, 2, 0));
  REQUIRE(zero_rule(4, 2, 0));
  REQUIRE(zero_rule(3, 3, 0));
  REQUIRE(zero_rule(6, 3, 0));
  REQUIRE(!zero_rule(2, 2, 1));
  REQUIRE(!zero_rule(2, 3, 0));
  REQUIRE(!zero_rule(3, 2, 0));
  REQUIRE(*m_exact(2, 2, 0).value == 0);
  REQUIRE(*m_exact(2, 2, 1).value == 1);
}

TEST_CASE("coprime case collapses the divisor bounds", "[sumsets]") {
  for (u32 k = 2; k <= 5; ++k)
    for (u32 n = 1; n <= 16; ++n) {
      m_bounds_result b = m_bounds(k, n);
      REQUIRE(b.lower <= b.upper);
      if (std::gcd(k, n) == 1) {
        REQUIRE(b.lower == b.upper);
        REQUIRE(m_formula_coprime(k, n) == b.lower);
      }
    }
  REQUIRE(m_formula_coprime(2, 35) == 17);
  REQUIRE_THROWS_AS(m_formula_coprime(2, 4), error);
}

TEST_CASE("interval constructions avoid the forbidden class", "[sumsets]") {
  for (u32 k = 2; k <= 4; ++k)
    for (u32 n : std::vector<u32>{6, 8, 9, 10, 12})
      for (u32 s = 0; s < n; ++s)
        for (u64 d : divisors(n)) {
          u32 r = static_cast<u32>(std::gcd(d, static_cast<u64>(k)));
          i64 t = floor_div(static_cast<i64>(d) - 1 - r, static_cast<i64>(k)) + 1;
          if (t < 1) continue;
          zn_set B = interval_construction(k, n, s, static_cast<u32>(d));
          REQUIRE(!k_fold_sumset(B, k).has(s));
          REQUIRE(B.size() == static_cast<u64>(t) * (n / d));
        }
}

TEST_CASE("translation reduces the forbidden class to zero", "[sumsets]") {
  for (u32 k : std::vector<u32>{2, 3, 5})
    for (u32 n = 2; n <= 12; ++n) {
      if (std::gcd(k, n) != 1) continue;
      for (u32 s = 0; s < n; ++s) {
        auto [s0, t] = translate_reduce(k, n, s);
        REQUIRE(s0 == 0);
        REQUIRE(static_cast<u64>(k) * t % n == (n - s) % n);
        REQUIRE(*m_exact(k, n, s).value == *m_exact(k, n, 0).value);
      }
    }
  REQUIRE_THROWS_AS(translate_reduce(2, 4, 1), error);
}

TEST_CASE("unit scaling preserves the extremal size", "[sumsets]") {
  for (u32 n = 2; n <= 10; ++n)
    for (u32 lam = 1; lam < n; ++lam) {
      if (std::gcd(lam, n) != 1) continue;
      for (u32 s = 0; s < n; ++s)
        REQUIRE(*m_exact(2, n, unit_scale(n, s, lam)).value == *m_exact(2, n, s).value);
    }
  REQUIRE(unit_scale(6, 1, 5) == 5);
  REQUIRE_THROWS_AS(unit_scale(6, 1, 2), error);
}

TEST_CASE("classification dispatch", "[sumsets]") {
  m_record z = m_classify(2, 2, 0);
  REQUIRE(z.method == m_method::zero_rule_case);
  REQUIRE(*z.value == 0);

  m_record srch = m_classify(2, 4, 0);
  REQUIRE(srch.method == m_method::search);
  REQUIRE(*srch.value == 1);

  m_record f = m_classify(2, 35, 4);
  REQUIRE(f.method == m_method::formula);
  REQUIRE(*f.value == 17);
  REQUIRE(f.witness.has_value());
  REQUIRE(f.witness->size() == 17);
  REQUIRE(!k_fold_sumset(*f.witness, 2).has(4));

  m_record bo = m_classify(2, 30, 1);
  REQUIRE(bo.method == m_method::bounds_only);
  REQUIRE(!bo.value.has_value());
  REQUIRE(bo.lower == 14);
  REQUIRE(bo.upper == 15);
  REQUIRE(bo.witness.has_value());
  REQUIRE(bo.witness->size() == 14);
  REQUIRE(!k_fold_sumset(*bo.witness, 2).has(1));

  REQUIRE(std::string(m_method_name(m_method::search)) == "search");
  REQUIRE(std::string(m_method_name(m_method::formula)) == "formula");
  REQUIRE(std::string(m_method_name(m_method::zero_rule_case)) == "zero-rule");
  REQUIRE(std::string(m_method_name(m_method::bounds_only)) == "bounds-only");
  REQUIRE_THROWS_AS(m_exact(2, 29, 0), error);  // above the exhaustive cap
  REQUIRE_THROWS_AS(m_exact(0, 5, 0), error);
  REQUIRE_THROWS_AS(m_classify(2, 0, 0), error);
}

TEST_CASE("set container basics", "[sumsets]") {
  zn_set a = zn_set::of(5, {1, 4});
  REQUIRE(a.has(1));
  REQUIRE(a.has(4));
  REQUIRE(!a.has(0));
  REQUIRE(a.size() == 2);
  REQUIRE(a.elements() == std::vector<u32>{1, 4});
  zn_set b = sumset(a, a);  // {2, 0, 3}
  REQUIRE(b.elements() == std::vector<u32>{0, 2, 3});
  REQUIRE_THROWS_AS(sumset(a, zn_set::empty(6)), error);
}
