#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "starset/bits.hpp"
#include "starset/field.hpp"

using namespace starset;

TEST_CASE("prime-field discrete logs match the classic table", "[field]") {
  field F = field::build(7, 1);
  REQUIRE(F.p() == 7);
  REQUIRE(F.m() == 1);
  REQUIRE(F.q() == 7);
  REQUIRE(F.q1() == 6);
  REQUIRE(F.generator() == 3);
  // powers of 3 mod 7: 1, 3, 2, 6, 4, 5
  REQUIRE(F.dlog(1) == 0);
  REQUIRE(F.dlog(3) == 1);
  REQUIRE(F.dlog(2) == 2);
  REQUIRE(F.dlog(6) == 3);
  REQUIRE(F.dlog(4) == 4);
  REQUIRE(F.dlog(5) == 5);
  REQUIRE(F.exp_g(3) == 6);
  REQUIRE_THROWS_AS(F.dlog(0), error);
  REQUIRE_THROWS_AS(F.inv(0), error);
  REQUIRE_THROWS_AS(field::build(6, 1), error);
  REQUIRE_THROWS_AS(field::build(11, 1, {8, 8}), error);  // q above the size cap
}

TEST_CASE("smallest generators are found", "[field]") {
  REQUIRE(field::build(2, 1).generator() == 1);
  REQUIRE(field::build(3, 1).generator() == 2);
  REQUIRE(field::build(5, 1).generator() == 2);
  REQUIRE(field::build(7, 1).generator() == 3);
  REQUIRE(field::build(11, 1).generator() == 2);
  REQUIRE(field::build(23, 1).generator() == 5);
  // the independent rescan agrees with what build() chose
  field F = field::build(3, 2);
  REQUIRE(find_generator(F) == F.generator());
}

TEST_CASE("canonical moduli for small extensions", "[field]") {
  REQUIRE(field::build(2, 2).modulus() == std::vector<u64>{1, 1, 1});  // x^2+x+1
  REQUIRE(field::build(3, 2).modulus() == std::vector<u64>{1, 0, 1});  // x^2+1
  REQUIRE(field::build(2, 3).modulus() == std::vector<u64>{1, 0, 1, 1});  // x^3+x^2+1
}

TEST_CASE("field axioms hold on sampled triples", "[field]") {
  struct build_spec {
    u64 p;
    u32 m;
    u64 dlog_limit;
  };
  const build_spec specs[] = {
      {2, 16, u64{1} << 20},  // char 2, carry-free packing
      {7, 5, u64{1} << 20},   // odd characteristic extension
      {3, 10, 0},             // no dlog tables: generic multiply path
  };
  for (const auto& sp : specs) {
    field F = field::build(sp.p, sp.m, {u64{1} << 20, sp.dlog_limit});
    std::mt19937_64 rng(12345);
    for (int it = 0; it < 150; ++it) {
      elt a = rng() % F.q(), b = rng() % F.q(), c = rng() % F.q();
      REQUIRE(F.add(a, F.add(b, c)) == F.add(F.add(a, b), c));
      REQUIRE(F.add(a, b) == F.add(b, a));
      REQUIRE(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c));
      REQUIRE(F.mul(a, b) == F.mul(b, a));
      REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      REQUIRE(F.add(a, F.neg(a)) == F.zero());
      REQUIRE(F.sub(a, b) == F.add(a, F.neg(b)));
      REQUIRE(F.mul(a, F.one()) == a);
      if (a != 0) {
        REQUIRE(F.mul(a, F.inv(a)) == F.one());
        REQUIRE(F.div(b, a) == F.mul(b, F.inv(a)));
        REQUIRE(F.pow(a, F.q1()) == F.one());
      }
    }
    REQUIRE(F.pow(F.zero(), 0) == F.one());
  }
}

TEST_CASE("table-free discrete logs agree with table lookups", "[field]") {
  field Ft = field::build(3, 10);
  field Fn = field::build(3, 10, {u64{1} << 20, 0});
  REQUIRE(Ft.has_tables());
  REQUIRE(!Fn.has_tables());
  REQUIRE(Ft.generator() == Fn.generator());
  std::mt19937_64 rng(99);
  for (int it = 0; it < 20; ++it) {
    u64 t = rng() % Ft.q1();
    elt a = Ft.exp_g(t);
    REQUIRE(Fn.exp_g(t) == a);
    REQUIRE(Fn.dlog(a) == t);
    REQUIRE(Ft.dlog(a) == t);
  }
  REQUIRE_THROWS_AS(Fn.dlog(0), error);
}

TEST_CASE("generator change rebuilds a consistent log structure", "[field]") {
  field F = field::build(7, 1);
  field F5 = F.with_generator_power(5);
  REQUIRE(F5.generator() == 5);  // 3^5 = 5 mod 7
  REQUIRE(F5.dlog(5) == 1);
  for (elt a = 1; a < 7; ++a) REQUIRE(F5.exp_g(F5.dlog(a)) == a);
  REQUIRE_THROWS_AS(F.with_generator_power(2), error);  // gcd(2, 6) != 1
}

TEST_CASE("coset indices split the unit group", "[field]") {
  field F = field::build(7, 1);
  REQUIRE(F.coset_index(2, 3) == 2);  // dlog 2
  REQUIRE(F.coset_index(6, 3) == 0);  // dlog 3
  REQUIRE(F.coset_index(3, 6) == 1);
  REQUIRE_THROWS_AS(F.coset_index(2, 4), error);  // 4 does not divide 6
  REQUIRE_THROWS_AS(F.coset_index(0, 3), error);
}

TEST_CASE("element text round trips", "[field]") {
  field F9 = field::build(3, 2);
  REQUIRE(format_elt(F9, 5) == "2.1");  // 5 = 2 + 1*3, low digit first
  REQUIRE(parse_elt(F9, "2.1") == 5);
  for (elt a = 0; a < F9.q(); ++a) REQUIRE(parse_elt(F9, format_elt(F9, a)) == a);

  field F7 = field::build(7, 1);
  REQUIRE(format_elt(F7, 6) == "6");
  REQUIRE(parse_elt(F7, "6") == 6);
  REQUIRE_THROWS_AS(parse_elt(F7, "7"), error);    // out of range
  REQUIRE_THROWS_AS(parse_elt(F9, "1"), error);    // wrong digit count
  REQUIRE_THROWS_AS(parse_elt(F9, "3.0"), error);  // digit not below p
}

TEST_CASE("coefficient vectors match element codes", "[field]") {
  field F = field::build(5, 2);
  for (elt a = 0; a < F.q(); ++a) REQUIRE(F.from_coeffs(F.coeffs(a)) == a);
  REQUIRE(F.scalar(3) == 3);
  REQUIRE(F.scalar(7) == 2);  // scalars reduce mod p
  REQUIRE_THROWS_AS(F.from_coeffs({5, 0}), error);  // digit not below p
}

TEST_CASE("unit sets live in dlog space", "[field]") {
  field F = field::build(7, 1);
  unit_set s = unit_set::from_elements(F, {3, 6});  // dlogs 1 and 3
  REQUIRE(s.q1() == 6);
  REQUIRE(s.size() == 2);
  REQUIRE(s.dlogs() == std::vector<u64>{1, 3});
  REQUIRE(s.to_elements(F) == std::vector<elt>{3, 6});
  REQUIRE(unit_set::from_dlogs(6, {1, 3}) == s);
  REQUIRE(unit_set::all_units(F).size() == 6);
  REQUIRE(unit_set::empty(F).size() == 0);
  REQUIRE(unit_set::from_dlogs(6, {7}) == unit_set::from_dlogs(6, {1}));  // indices wrap
  REQUIRE_THROWS_AS(unit_set::from_elements(F, {0}), error);
}

TEST_CASE("bit-vector rotation matches the index map", "[bits]") {
  std::mt19937_64 rng(2024);
  for (std::size_t n : std::vector<std::size_t>{1, 5, 63, 64, 67, 128, 130}) {
    for (int it = 0; it < 15; ++it) {
      bitvec v(n);
      for (std::size_t i = 0; i < n; ++i)
        if (rng() & 1) v.set(i);
      std::size_t k = rng() % n;
      bitvec r = v.rotated(k);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(r.test((i + k) % n) == v.test(i));
      bitvec acc(n);
      acc.or_rotated(v, k);
      REQUIRE(acc == r);
      REQUIRE(v.rotated(0) == v);
      REQUIRE(r.count() == v.count());
    }
  }
}

TEST_CASE("bit-vector set algebra", "[bits]") {
  bitvec a(10);
  a.set(2);
  a.set(7);
  REQUIRE(a.elements() == std::vector<u32>{2, 7});
  REQUIRE(a.count() == 2);
  REQUIRE(a.any());
  bitvec b = bitvec::full(10);
  REQUIRE(b.count() == 10);
  REQUIRE(a.is_subset_of(b));
  REQUIRE(!b.is_subset_of(a));
  REQUIRE(a.intersects(b));
  bitvec c(10);
  REQUIRE(c.none());
  REQUIRE(!a.intersects(c));
  c |= a;
  REQUIRE(c == a);
  c.reset(2);
  REQUIRE(c.elements() == std::vector<u32>{7});
  c &= a;
  REQUIRE(c.count() == 1);
  std::vector<std::size_t> seen;
  a.for_each([&](std::size_t i) { seen.push_back(i); });
  REQUIRE(seen == std::vector<std::size_t>{2, 7});
}
