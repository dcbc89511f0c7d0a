#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "starset/errors.hpp"
#include "starset/field.hpp"
#include "starset/poly.hpp"

namespace starset {

// Multiplicative character chi_j of F_q^*: chi_j(g^t) = e^(2*pi*i*j*t/(q-1)),
// extended by chi(0) = 0.  j = 0 is the trivial character.
struct character {
  const field* F = nullptr;
  u64 j = 0;

  u64 order() const { return F->q1() / std::gcd(j, F->q1()); }
  bool trivial() const { return j % F->q1() == 0; }
};

// Shared table of (q-1)-th roots of unity; build once per field when
// evaluating many characters.
struct unity_table {
  std::vector<std::complex<double>> w;

  static unity_table make(const field& F) {
    unity_table t;
    u64 n = F.q1();
    t.w.resize(n);
    for (u64 i = 0; i < n; ++i) {
      double ang = 2.0 * std::numbers::pi * (double)i / (double)n;
      t.w[i] = {std::cos(ang), std::sin(ang)};
    }
    return t;
  }
};

inline std::complex<double> char_value(const character& chi, elt a,
                                       const unity_table* tab = nullptr) {
  if (a == 0) return {0.0, 0.0};
  u64 t = mulmod(chi.j % chi.F->q1(), chi.F->dlog(a), chi.F->q1());
  if (tab) return tab->w[t];
  double ang = 2.0 * std::numbers::pi * (double)t / (double)chi.F->q1();
  return {std::cos(ang), std::sin(ang)};
}

struct char_sum_result {
  std::complex<double> value;
  double magnitude = 0;
  double bound = 0;  // (#distinct roots of f - 1) * sqrt(q)
};

// S = sum over x in F_q of chi(a * f(x)), with the square-root cancellation
// bound attached.
inline char_sum_result char_sum(const character& chi, const fpoly& f, elt a,
                                const unity_table* tab = nullptr, u64 seed = 0) {
  const field& F = *chi.F;
  require(a != 0, errc::zero_scalar, "character sum needs a != 0");
  require(f.deg() >= 1, errc::constant_polynomial, "character sum needs deg f >= 1");
  std::complex<double> acc{0, 0};
  for (elt x = 0; x < F.q(); ++x) {
    elt v = F.mul(a, p_eval(F, f, x));
    if (v) acc += char_value(chi, v, tab);
  }
  char_sum_result out;
  out.value = acc;
  out.magnitude = std::abs(acc);
  out.bound = ((double)radical_root_count(F, f, seed) - 1.0) * std::sqrt((double)F.q());
  return out;
}

struct weil_violation {
  u64 j = 0;
  elt a = 0;
  double magnitude = 0;
  double bound = 0;
};

struct weil_report {
  u64 q = 0;
  u64 checked = 0;  // (chi, a) pairs verified
  u64 skipped = 0;  // characters skipped because f is a constant multiple of a d-th power
  double max_ratio = 0.0;  // max magnitude/bound over checked pairs with bound > 0
  bool pass = true;
  std::vector<weil_violation> violations;
};

// Exhaustive check of |sum chi(a f(x))| <= (n_roots - 1) sqrt(q) over every
// nontrivial character whose order d keeps f outside the d-th-power
// hypothesis, and every a != 0.  Exploits chi(a f(x)) summing to
// chi(a) * S_chi, so each character's sum is computed once.
inline weil_report weil_verify(
    const field& F, const fpoly& f, double tol = 1e-6, const unity_table* tab = nullptr,
    u64 seed = 0,
    const std::function<void(u64 j, elt a, double mag, double bound)>& row_cb = nullptr) {
  require(f.deg() >= 1, errc::constant_polynomial, "weil check needs deg f >= 1");
  require(f.lc() == 1, errc::precondition_violated, "weil check expects monic f");
  weil_report rep;
  rep.q = F.q();
  unity_table local;
  if (!tab) {
    local = unity_table::make(F);
    tab = &local;
  }

  factorization fac = factor(F, f, seed);
  u32 mult_gcd = 0;
  u32 n_roots = 0;
  for (auto& [pi, e] : fac.factors) {
    mult_gcd = mult_gcd ? (u32)std::gcd(mult_gcd, e) : e;
    n_roots += (u32)pi.deg();
  }
  double bound = ((double)n_roots - 1.0) * std::sqrt((double)F.q());

  // dlog profile of f over the field, computed once
  std::vector<i64> lf(F.q());
  for (elt x = 0; x < F.q(); ++x) {
    elt v = p_eval(F, f, x);
    lf[x] = v ? (i64)F.dlog(v) : -1;
  }

  const u64 q1 = F.q1();
  for (u64 j = 1; j < q1; ++j) {
    u64 d = q1 / std::gcd(j, q1);  // order of chi_j
    if (mult_gcd % d == 0) {
      // f = c * u(x)^d: hypothesis fails for chi_j; Weil does not apply.
      ++rep.skipped;
      continue;
    }
    std::complex<double> s{0, 0};
    for (elt x = 0; x < F.q(); ++x)
      if (lf[x] >= 0) s += tab->w[mulmod(j, (u64)lf[x], q1)];
    for (u64 la = 0; la < q1; ++la) {
      double mag = std::abs(tab->w[mulmod(j, la, q1)] * s);
      ++rep.checked;
      if (bound > 0) rep.max_ratio = std::max(rep.max_ratio, mag / bound);
      if (mag > bound + tol) {
        rep.pass = false;
        if (rep.violations.size() < 32)
          rep.violations.push_back({j, F.exp_g(la), mag, bound});
      }
      if (row_cb) row_cb(j, F.exp_g(la), mag, bound);
    }
  }
  return rep;
}

// N = #{(a,b,x) in A x B x F_q : ab = f(x)}.
inline u64 count_representations(const field& F, const unit_set& A, const unit_set& B,
                                 const fpoly& f) {
  require(!f.is_zero(), errc::zero_polynomial, "counting against the zero polynomial");
  const u64 q1 = F.q1();
  auto la = A.dlogs();
  u64 count = 0;
  for (elt x = 0; x < F.q(); ++x) {
    elt v = p_eval(F, f, x);
    if (!v) continue;
    u64 lv = F.dlog(v);
    for (u64 l : la)
      if (B.bits.test((lv + q1 - l) % q1)) ++count;
  }
  return count;
}

struct pair_product_report {
  bool threshold_holds = false;
  u64 representations = 0;
  bool implication_ok = true;  // threshold -> representations > 0
};

// The product-representation guarantee: if |A||B| (q-m)^2 > q (q-1)^2 (m-1)^2
// then some ab (a in A, b in B) is a value of f.  Threshold comparison is
// exact integer arithmetic; the implication is asserted, not just reported.
inline pair_product_report pair_product_check(const field& F, const fpoly& f, const unit_set& A,
                                              const unit_set& B, u64 seed = 0) {
  const u64 q = F.q();
  const i64 m = f.deg();
  require(m > 1 && (u64)m < q, errc::hypothesis_violated, "need 1 < deg f < q");
  factorization fac = factor(F, f, seed);
  u32 mult_gcd = 0;
  for (auto& [pi, e] : fac.factors) mult_gcd = mult_gcd ? (u32)std::gcd(mult_gcd, e) : e;
  require(std::gcd((u64)mult_gcd, F.q1()) == 1, errc::hypothesis_violated,
          "f is a constant multiple of a d-th power for some d | q-1");

  pair_product_report rep;
  u128 lhs = (u128)A.size() * B.size() * (u128)(q - m) * (u128)(q - m);
  u128 rhs = (u128)q * (q - 1) * (q - 1) * (u128)(m - 1) * (u128)(m - 1);
  rep.threshold_holds = lhs > rhs;
  rep.representations = count_representations(F, A, B, f);
  if (rep.threshold_holds && rep.representations == 0) {
    rep.implication_ok = false;
    fail(errc::assertion_failed, "pair-product threshold met but no representation exists");
  }
  return rep;
}

// C_m = (m-1)(q-1)/(q-m), the constant in the distinct-product threshold.
inline frac product_constant(u64 q, u32 m_deg) {
  require(m_deg >= 1 && m_deg < q, errc::hypothesis_violated, "need 1 <= deg f < q");
  return frac::make((i64)(m_deg - 1) * (i64)(q - 1), (i64)(q - m_deg));
}

// Exact test of |A| >= 8 C_m sqrt(q) + 2k + 2 (integer square comparison).
inline bool distinct_product_threshold(u64 q, u32 m_deg, u32 k, u64 size) {
  require(m_deg >= 1 && m_deg < q, errc::hypothesis_violated, "need 1 <= deg f < q");
  if (size < (u64)2 * k + 2) return false;
  u128 lhs = (u128)(size - 2 * k - 2) * (q - m_deg);
  u128 rhs_sq = (u128)64 * (m_deg - 1) * (m_deg - 1) * (u128)(q - 1) * (q - 1) * q;
  return lhs * lhs >= rhs_sq;
}

enum class witness_state { found, none, inconclusive };

struct distinct_product_witness {
  witness_state state = witness_state::none;
  std::vector<elt> elems;  // a_1, ..., a_k (distinct, a_i in A_i)
  elt product = 0;
  elt x0 = 0;  // f(x0) = product
  u64 nodes = 0;
};

// Searches for distinct a_i in A_i with a_1 ... a_k in f(F_q), smallest in
// lexicographic dlog order.  Explored partial products are capped; hitting
// the cap yields `inconclusive` rather than a wrong "none".
inline distinct_product_witness find_distinct_product_witness(
    const field& F, const fpoly& f, const std::vector<unit_set>& sets, u64 node_cap = 100000000) {
  require(!sets.empty(), errc::precondition_violated, "need at least one set");
  require(!f.is_zero(), errc::zero_polynomial, "witness search against the zero polynomial");
  const u64 q1 = F.q1();
  const u32 k = (u32)sets.size();

  // value profile: dlog mask of f(F_q) \ {0} and the smallest preimage per value
  bitvec vmask(q1);
  std::vector<elt> pre(F.q(), (elt)F.q());
  for (elt x = 0; x < F.q(); ++x) {
    elt v = p_eval(F, f, x);
    if (pre[v] == (elt)F.q()) pre[v] = x;
    if (v) vmask.set(F.dlog(v));
  }

  distinct_product_witness out;
  std::vector<u64> chosen;
  bitvec used(q1);
  bool capped = false;

  std::function<bool(u32, u64)> dfs = [&](u32 depth, u64 sigma) -> bool {
    if (out.nodes >= node_cap) {
      capped = true;
      return false;
    }
    if (depth == k - 1) {
      // last slot: need l in sets[k-1], unused, with sigma + l a value dlog
      bitvec cand = sets[depth].bits;
      cand &= vmask.rotated(q1 - sigma % q1);  // bit l <-> vmask[(l + sigma) % q1]
      bool found = false;
      cand.for_each([&](std::size_t l) {
        if (found || used.test(l)) return;
        chosen.push_back((u64)l);
        found = true;
      });
      out.nodes += 1;
      return found;
    }
    bool hit = false;
    sets[depth].bits.for_each([&](std::size_t l) {
      if (hit || used.test(l)) return;
      ++out.nodes;
      used.set(l);
      chosen.push_back((u64)l);
      if (dfs(depth + 1, (sigma + l) % q1)) {
        hit = true;
        return;
      }
      chosen.pop_back();
      used.reset(l);
    });
    return hit;
  };

  bool found = dfs(0, 0);
  if (found) {
    out.state = witness_state::found;
    u64 sigma = 0;
    for (u64 l : chosen) {
      out.elems.push_back(F.exp_g(l));
      sigma = (sigma + l) % q1;
    }
    out.product = F.exp_g(sigma);
    check(pre[out.product] != (elt)F.q(), "witness product is not a value of f");
    out.x0 = pre[out.product];
    elt prod = 1;
    for (elt a : out.elems) prod = F.mul(prod, a);
    check(prod == out.product && p_eval(F, f, out.x0) == prod,
          "witness does not satisfy a_1...a_k = f(x0)");
  } else if (capped) {
    out.state = witness_state::inconclusive;
  }
  return out;
}

}  // namespace starset
