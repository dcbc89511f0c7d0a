#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "starset/cache.hpp"
#include "starset/config.hpp"
#include "starset/numtheory.hpp"
#include "starset/parallel.hpp"
#include "starset/verify.hpp"
#include "starset/version.hpp"

using namespace starset;

TEST_CASE("config text round trips", "[config]") {
  std::string text = "# tool settings\nthreads = 4\n\n[sweep]\nk = 2\nprimes = 7,13\n";
  config c = parse_config(text);
  REQUIRE(c.has("", "threads"));
  REQUIRE(c.get("", "threads") == "4");
  REQUIRE(c.get("sweep", "k") == "2");
  REQUIRE(c.get("sweep", "primes") == "7,13");
  REQUIRE(c.get("sweep", "missing", "fallback") == "fallback");
  REQUIRE(!c.has("sweep", "missing"));
  REQUIRE(parse_config(serialize_config(c)) == c);

  c.set("sweep", "k", "3");
  REQUIRE(c.get("sweep", "k") == "3");

  REQUIRE_THROWS_AS(parse_config("a = 1\na = 2\n"), error);  // duplicate key
  REQUIRE_THROWS_AS(parse_config("novalue\n"), error);
  REQUIRE_THROWS_AS(parse_config("[unclosed\n"), error);
}

TEST_CASE("result cache stores, reloads and detects conflicts", "[cache]") {
  std::string path =
      (std::filesystem::temp_directory_path() / "starset_cache_test.jsonl").string();
  std::filesystem::remove(path);
  nlohmann::json payload = {{"value", 3}, {"q", 7}};
  {
    result_cache cache(path);
    REQUIRE(cache.size() == 0);
    REQUIRE(!cache.lookup("k1").has_value());
    REQUIRE(cache.store("k1", payload));
    REQUIRE(!cache.store("k1", payload));  // identical re-store is a no-op
    nlohmann::json other = {{"value", 4}};
    REQUIRE_THROWS_AS(cache.store("k1", other), error);  // conflicting payload
    REQUIRE(cache.lookup("k1").has_value());
    REQUIRE(*cache.lookup("k1") == payload);
  }
  {
    result_cache reloaded(path);
    REQUIRE(reloaded.size() == 1);
    REQUIRE(reloaded.lookup("k1").has_value());
    REQUIRE((*reloaded.lookup("k1"))["value"] == 3);
  }
  REQUIRE(result_cache::fingerprint(payload) == result_cache::fingerprint(payload));
  std::filesystem::remove(path);
}

TEST_CASE("ordered map is deterministic and propagates errors", "[parallel]") {
  auto square = [](std::size_t i) { return i * i; };
  std::vector<std::size_t> seq = ordered_map(100, 1, square);
  std::vector<std::size_t> par = ordered_map(100, 4, square);
  REQUIRE(seq == par);
  REQUIRE(seq.size() == 100);
  REQUIRE(seq[7] == 49);
  REQUIRE(ordered_map(0, 4, square).empty());
  REQUIRE_THROWS_AS(ordered_map(10, 3,
                                [](std::size_t i) -> int {
                                  if (i == 5) throw std::runtime_error("boom");
                                  return 0;
                                }),
                    std::runtime_error);
}

TEST_CASE("report payload rendering is canonical", "[verify]") {
  std::vector<criterion_result> rs{{1, "sumset-oracle", true, "all good"},
                                   {2, "coprime-formula", false, "diff \"x\"\n"}};
  std::string payload = render_payload(rs);
  REQUIRE(payload ==
          "[{\"id\":1,\"name\":\"sumset-oracle\",\"pass\":true,\"detail\":\"all good\"},"
          "{\"id\":2,\"name\":\"coprime-formula\",\"pass\":false,"
          "\"detail\":\"diff \\\"x\\\"\\n\"}]");
  for (int id = 1; id <= 12; ++id) {
    REQUIRE(std::string(criterion_name(id)) != "?");
    REQUIRE(std::string(criterion_name(id)).find(' ') == std::string::npos);
  }
  REQUIRE(format_criterion_line(rs[0]).find("PASS") != std::string::npos);
  REQUIRE(format_criterion_line(rs[1]).find("FAIL") != std::string::npos);
}

TEST_CASE("hashes, primality and rationals", "[numtheory]") {
  REQUIRE(fnv1a64("") == 0xcbf29ce484222325ull);
  REQUIRE(fnv1a64("a") == 0xaf63dc4c8601ec8cull);

  REQUIRE(is_prime(2));
  REQUIRE(!is_prime(1));
  REQUIRE(!is_prime(561));  // Carmichael number
  REQUIRE(is_prime(2147483647ull));
  REQUIRE(is_prime(2305843009213693951ull));   // 2^61 - 1
  REQUIRE(!is_prime(2305843009213693953ull));  // 2^61 + 1 is divisible by 3

  REQUIRE(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  REQUIRE(divisors(1) == std::vector<u64>{1});
  REQUIRE(factorize(360) == std::vector<std::pair<u64, u32>>{{2, 3}, {3, 2}, {5, 1}});
  REQUIRE(factorize(1000036000099ull) ==
          std::vector<std::pair<u64, u32>>{{1000003, 1}, {1000033, 1}});

  REQUIRE(floor_div(7, 2) == 3);
  REQUIRE(floor_div(-7, 2) == -4);
  REQUIRE(floor_div(-6, 3) == -2);
  REQUIRE(inv_mod(3, 7) == 5);
  REQUIRE_THROWS_AS(inv_mod(2, 4), error);

  REQUIRE(frac::make(2, -4) == frac::make(-1, 2));
  REQUIRE((frac::make(3, 2) - frac::make(1, 2)) == frac::make(1, 1));
  REQUIRE(frac::make(3, 2).str() == "3/2");
  REQUIRE(frac::make(8, 2).str() == "4");
  REQUIRE(frac::make(1, 3).to_double() == Catch::Approx(1.0 / 3.0));
  REQUIRE_THROWS_AS(frac::make(1, 0), error);
}

TEST_CASE("library errors carry their classification", "[errors]") {
  try {
    fail(errc::degenerate, "sample message");
    FAIL("fail() returned");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::degenerate);
    REQUIRE(std::string(e.what()).find("sample message") != std::string::npos);
  }
  REQUIRE_NOTHROW(require(true, errc::degenerate, "unused"));
  REQUIRE_THROWS_AS(check(false, "broken"), error);
  REQUIRE(std::string(errc_name(errc::not_a_unit)) == "not_a_unit");
}

TEST_CASE("version constants", "[version]") {
  REQUIRE(std::string(version_string) == "0.1.0");
  REQUIRE(schema_version == 1);
}

TEST_CASE("single criteria can be run in isolation", "[verify]") {
  acceptance_options opt;
  opt.only = {4};  // the zero-rule slice of the grid criterion
  int seen = 0;
  acceptance_report rep = run_acceptance(opt, [&](const criterion_result& r) {
    ++seen;
    REQUIRE(r.id == 4);
    REQUIRE(r.pass);
  });
  REQUIRE(seen == 1);
  REQUIRE(rep.all_pass);
  REQUIRE(rep.results.size() == 1);
}
