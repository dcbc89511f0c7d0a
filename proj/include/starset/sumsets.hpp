#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "starset/bits.hpp"
#include "starset/errors.hpp"
#include "starset/numtheory.hpp"

namespace starset {

// Subset of Z_n.
struct zn_set {
  u32 n = 0;
  bitvec bits;

  static zn_set empty(u32 n) {
    require(n >= 1, errc::degenerate, "Z_n needs n >= 1");
    return zn_set{n, bitvec(n)};
  }
  static zn_set of(u32 n, const std::vector<u32>& es) {
    zn_set s = empty(n);
    for (u32 e : es) {
      require(e < n, errc::precondition_violated, "element out of range");
      s.bits.set(e);
    }
    return s;
  }

  bool has(u32 e) const { return bits.test(e); }
  void add(u32 e) {
    require(e < n, errc::precondition_violated, "element out of range");
    bits.set(e);
  }
  std::size_t size() const { return bits.count(); }
  std::vector<u32> elements() const { return bits.elements(); }

  friend bool operator==(const zn_set& a, const zn_set& b) { return a.n == b.n && a.bits == b.bits; }
  friend bool operator!=(const zn_set& a, const zn_set& b) { return !(a == b); }
};

// {x + y : x in a, y in b} in Z_n.
inline zn_set sumset(const zn_set& a, const zn_set& b) {
  require(a.n == b.n, errc::precondition_violated, "sumset over mismatched Z_n");
  zn_set out = zn_set::empty(a.n);
  a.bits.for_each([&](std::size_t i) { out.bits.or_rotated(b.bits, i); });
  return out;
}

// kB = B + B + ... + B (k summands, repetition allowed), by doubling.
inline zn_set k_fold_sumset(const zn_set& B, u32 k) {
  require(k >= 1, errc::precondition_violated, "k must be >= 1");
  zn_set acc = zn_set::of(B.n, {0});
  zn_set base = B;
  u32 e = k;
  for (;;) {
    if (e & 1) acc = sumset(acc, base);
    e >>= 1;
    if (!e) break;
    base = sumset(base, base);
  }
  return acc;
}

// m(k,n;s) = 0  iff  n | k and s == 0.
inline bool zero_rule(u32 k, u32 n, u32 s) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  return (k % n == 0) && (s % n == 0);
}

// Largest-subset bounds, both valid for every s:
//   max_{d|n} (floor((d-1-gcd(d,k))/k)+1) * n/d
//     <= m(k,n;s) <=
//   max_{d|n} (floor((d-2)/k)+1) * n/d.
// Floors round toward minus infinity (d=1 gives a zero term, not -1).
struct m_bounds_result {
  u64 lower = 0;
  u64 upper = 0;
};

inline m_bounds_result m_bounds(u32 k, u32 n) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  m_bounds_result out;
  for (u64 d : divisors(n)) {
    i64 lo_t = floor_div((i64)d - 1 - (i64)std::gcd(d, (u64)k), (i64)k) + 1;
    i64 hi_t = floor_div((i64)d - 2, (i64)k) + 1;
    if (lo_t > 0) out.lower = std::max(out.lower, (u64)lo_t * (n / d));
    if (hi_t > 0) out.upper = std::max(out.upper, (u64)hi_t * (n / d));
  }
  return out;
}

// Exact value when gcd(k,n) = 1: the two bounds coincide.
inline u64 m_formula_coprime(u32 k, u32 n) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  require(std::gcd(k, n) == 1, errc::not_coprime, "formula needs gcd(k,n) = 1");
  u64 best = 0;
  for (u64 d : divisors(n)) {
    i64 t = floor_div((i64)d - 2, (i64)k) + 1;
    if (t > 0) best = std::max(best, (u64)t * (n / d));
  }
  return best;
}

// Interval construction behind the lower bound: for a divisor d | n, with
// r = gcd(d,k) and t = floor((d-1-r)/k)+1, pick the interval
// T = {a, ..., a+t-1} in Z_d whose k-fold image misses s mod d, and pull it
// back through Z_n -> Z_d.  Returns a set of size t*n/d avoiding s in kB.
inline zn_set interval_construction(u32 k, u32 n, u32 s, u32 d) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  require(d >= 1 && n % d == 0, errc::not_a_divisor, "d must divide n");
  s %= n;
  u32 r = (u32)std::gcd(d, k);
  i64 t = floor_div((i64)d - 1 - r, (i64)k) + 1;
  require(t >= 1, errc::degenerate, "interval construction is empty for this divisor");

  // F = (s mod d) - {0, ..., k(t-1)} in Z_d; pick smallest y in rZ_d \ F.
  u64 span = (u64)k * ((u64)t - 1);
  bitvec forbidden(d);
  for (u64 j = 0; j <= span; ++j) forbidden.set(((u64)(s % d) + d - (j % d)) % d);
  std::optional<u64> y;
  for (u64 cand = 0; cand < d; cand += r) {
    if (!forbidden.test(cand)) {
      y = cand;
      break;
    }
  }
  check(y.has_value(), "interval construction: no admissible multiple of gcd(d,k)");

  // smallest a in Z_d with k*a == y (mod d); solvable since r = gcd(k,d) | y
  std::optional<u64> a;
  for (u64 cand = 0; cand < d; ++cand) {
    if ((u64)k * cand % d == *y) {
      a = cand;
      break;
    }
  }
  check(a.has_value(), "interval construction: k*a = y has no solution");

  zn_set B = zn_set::empty(n);
  for (u32 x = 0; x < n; ++x) {
    u64 residue = (x % d + d - *a % d) % d;
    if (residue < (u64)t) B.bits.set(x);
  }
  check(B.size() == (u64)t * (n / d), "interval construction has the wrong size");
  check(!k_fold_sumset(B, k).has(s), "interval construction fails to avoid s");
  return B;
}

// Reduction m(k,n;s) = m(k,n;0) when gcd(k,n) = 1, via B -> B + t with
// t = -k^{-1} s.  Returns (new s, translation t).
inline std::pair<u32, u32> translate_reduce(u32 k, u32 n, u32 s) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  require(std::gcd(k, n) == 1, errc::not_coprime, "translation needs gcd(k,n) = 1");
  s %= n;
  u64 t = (n - mulmod(inv_mod(k % n == 0 ? 1 : k % n, n), s, n)) % n;
  return {0, (u32)t};
}

// Unit scaling s -> lambda * s (m(k,n;s) is invariant for units lambda).
inline u32 unit_scale(u32 n, u32 s, u32 lambda) {
  require(n >= 1, errc::precondition_violated, "n must be positive");
  require(std::gcd(lambda % n, n) == 1 || n == 1, errc::not_a_unit, "lambda is not a unit mod n");
  return (u32)((u64)lambda * s % n);
}

enum class m_method { search, formula, zero_rule_case, bounds_only };

inline const char* m_method_name(m_method m) {
  switch (m) {
    case m_method::search: return "search";
    case m_method::formula: return "formula";
    case m_method::zero_rule_case: return "zero-rule";
    case m_method::bounds_only: return "bounds-only";
  }
  return "?";
}

struct m_record {
  u32 k = 0, n = 0, s = 0;
  u64 lower = 0, upper = 0;
  std::optional<u64> value;     // set unless method == bounds_only
  std::optional<zn_set> witness;  // B with |B| = value and s not in kB
  m_method method = m_method::search;
};

struct m_search_options {
  u32 certify_cap = 28;  // exhaustive search allowed for n <= min(cap, 64)
};

namespace detail {

inline u64 rotl_n(u64 x, u32 r, u32 n) {
  r %= n;
  if (!r) return x;
  u64 mask = n == 64 ? ~0ull : (1ull << n) - 1;
  return ((x << r) | (x >> (n - r))) & mask;
}

// Depth-first search for a size `target` subset B with s not in kB.
// Elements are tried in ascending order and the first solution is taken, so
// the returned witness is the lexicographically least one.  P[j] tracks the
// j-fold sumset of the chosen prefix (repetition allowed): including e turns
// P[j] into P[j] | (P'[j-1] + e), evaluated with ascending j so that e may
// be reused within a sum.
inline bool m_dfs(u32 k, u32 n, u32 s, u32 target, u32 next, u32 count, const std::vector<u64>& P,
                  std::vector<u32>& chosen) {
  if (count == target) return true;
  if (count + (n - next) < target) return false;
  std::vector<u64> P2(k + 1);
  for (u32 e = next; e < n; ++e) {
    P2[0] = 1;  // {0}
    for (u32 j = 1; j <= k; ++j) P2[j] = P[j] | rotl_n(P2[j - 1], e, n);
    if ((P2[k] >> s) & 1) continue;  // s would enter kB
    chosen.push_back(e);
    if (m_dfs(k, n, s, target, e + 1, count + 1, P2, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

// Exhaustive certification of m(k,n;s): descends from the proven upper
// bound until a witness exists.  Never takes formula shortcuts — this is the
// ground truth the closed forms are tested against.
inline m_record m_exact(u32 k, u32 n, u32 s, const m_search_options& opt = {}) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  require(n <= opt.certify_cap && n <= 64, errc::size_cap_exceeded,
          "n = " + std::to_string(n) + " exceeds the certification cap");
  s %= n;
  auto bounds = m_bounds(k, n);
  m_record rec;
  rec.k = k;
  rec.n = n;
  rec.s = s;
  rec.lower = bounds.lower;
  rec.upper = bounds.upper;
  rec.method = m_method::search;
  std::vector<u64> P0(k + 1, 0);
  P0[0] = 1;
  for (u64 target = bounds.upper; target >= 1; --target) {
    std::vector<u32> chosen;
    if (detail::m_dfs(k, n, s, (u32)target, 0, 0, P0, chosen)) {
      rec.value = target;
      rec.witness = zn_set::of(n, chosen);
      check(!k_fold_sumset(*rec.witness, k).has(s), "certified witness fails its own check");
      return rec;
    }
  }
  rec.value = 0;
  rec.witness = zn_set::empty(n);
  return rec;
}

// Production dispatch: proven shortcut if one applies, search within the
// cap, closed formula when gcd(k,n)=1, otherwise bounds only.
inline m_record m_classify(u32 k, u32 n, u32 s, const m_search_options& opt = {}) {
  require(n >= 1 && k >= 1, errc::precondition_violated, "k, n must be positive");
  s %= n;
  if (zero_rule(k, n, s)) {
    m_record rec;
    rec.k = k;
    rec.n = n;
    rec.s = s;
    rec.lower = 0;
    rec.upper = 0;
    rec.value = 0;
    rec.witness = zn_set::empty(n);
    rec.method = m_method::zero_rule_case;
    return rec;
  }
  if (n <= opt.certify_cap && n <= 64) {
    return m_exact(k, n, s, opt);
  }
  auto bounds = m_bounds(k, n);
  m_record rec;
  rec.k = k;
  rec.n = n;
  rec.s = s;
  rec.lower = bounds.lower;
  rec.upper = bounds.upper;
  if (std::gcd(k, n) == 1) {
    rec.value = m_formula_coprime(k, n);
    rec.method = m_method::formula;
  } else {
    rec.method = m_method::bounds_only;
  }
  // Deterministic witness of the lower bound (and of the exact value in the
  // coprime case): the best interval construction.
  u64 best = 0;
  u32 best_d = 0;
  for (u64 d : divisors(n)) {
    i64 t = floor_div((i64)d - 1 - (i64)std::gcd(d, (u64)k), (i64)k) + 1;
    if (t > 0 && (u64)t * (n / d) > best) {
      best = (u64)t * (n / d);
      best_d = (u32)d;
    }
  }
  if (best_d) rec.witness = interval_construction(k, n, s, best_d);
  return rec;
}

}  // namespace starset
