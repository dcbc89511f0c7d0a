#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "starset/errors.hpp"

namespace starset {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 mod) { return (u128)a * b % mod; }

inline u64 powmod(u64 base, u64 exp, u64 mod) {
  if (mod == 1) return 0;
  u64 r = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for the full u64 range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Pollard rho (Brent variant) with deterministic parameter sequence.
inline u64 pollard_rho(u64 n) {
  if ((n & 1) == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace detail

// Prime factorization, (prime, exponent) pairs sorted by prime.
inline std::vector<std::pair<u64, u32>> factorize(u64 n) {
  std::vector<u64> primes;
  u64 rest = n;
  for (u64 p = 2; p * p <= rest && p < 100000; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) detail::factor_rec(rest, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, u32>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.push_back({p, 1});
  }
  return out;
}

// All divisors of n, ascending.
inline std::vector<u64> divisors(u64 n) {
  auto fs = factorize(n);
  std::vector<u64> out{1};
  for (auto [p, e] : fs) {
    std::size_t sz = out.size();
    u64 pe = 1;
    for (u32 i = 1; i <= e; ++i) {
      pe *= p;
      for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Floor division (rounds toward minus infinity, unlike C++ '/').
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline u64 egcd(u64 a, u64 b, i64& x, i64& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  i64 x1, y1;
  u64 g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (i64)(a / b) * y1;
  return g;
}

inline u64 inv_mod(u64 a, u64 mod) {
  a %= mod;
  i64 x, y;
  u64 g = egcd(a, mod, x, y);
  require(g == 1, errc::not_a_unit, "inverse of non-unit mod " + std::to_string(mod));
  i64 r = x % (i64)mod;
  if (r < 0) r += (i64)mod;
  return (u64)r;
}

// Exact rational with small magnitudes (den > 0, reduced).
struct frac {
  i64 num = 0;
  i64 den = 1;

  static frac make(i64 n, i64 d) {
    require(d != 0, errc::degenerate, "zero denominator");
    if (d < 0) n = -n, d = -d;
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) n /= g, d /= g;
    return frac{n, d};
  }
  friend bool operator==(const frac& a, const frac& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const frac& a, const frac& b) { return !(a == b); }
  friend frac operator-(const frac& a, const frac& b) {
    i128 n = (i128)a.num * b.den - (i128)b.num * a.den;
    i128 d = (i128)a.den * b.den;
    check(n >= INT64_MIN && n <= INT64_MAX && d <= INT64_MAX, "frac overflow");
    return make((i64)n, (i64)d);
  }
  double to_double() const { return (double)num / (double)den; }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

// FNV-1a 64-bit, used for cache fingerprints.
inline u64 fnv1a64(std::string_view s) {
  u64 h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace starset
