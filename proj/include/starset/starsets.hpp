#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "starset/chars.hpp"
#include "starset/errors.hpp"
#include "starset/field.hpp"
#include "starset/poly.hpp"
#include "starset/sumsets.hpp"

namespace starset {

// A problem instance: field, target polynomial h, product length k, and the
// derived invariants of the decomposition h = C * f^ell:
//   n = gcd(ell, q-1)   (index of the subgroup H = (F_q^*)^ell)
//   s = dlog(C) mod n   (the coset of h's nonzero values: h(x) in g^s H)
struct instance {
  std::shared_ptr<const field> F;
  fpoly h;
  u32 k = 2;
  power_part_result pp;
  u64 n = 1;
  u64 s = 0;
  bitvec vmask;  // dlogs of h(F_q) \ {0}
};

inline instance build_instance(std::shared_ptr<const field> F, fpoly h, u32 k, u64 seed = 0) {
  require(k >= 2, errc::precondition_violated, "k must be at least 2");
  require(!h.is_zero(), errc::zero_polynomial, "instance needs h != 0");
  require(h.deg() >= 1, errc::constant_polynomial, "instance needs deg h >= 1");
  instance inst;
  inst.F = std::move(F);
  inst.h = std::move(h);
  inst.k = k;
  inst.pp = power_part(*inst.F, inst.h, seed);
  inst.n = std::gcd((u64)inst.pp.ell, inst.F->q1());
  inst.s = inst.F->dlog(inst.pp.c) % inst.n;
  inst.vmask = bitvec(inst.F->q1());
  for (elt x = 0; x < inst.F->q(); ++x) {
    elt v = p_eval(*inst.F, inst.h, x);
    if (v) inst.vmask.set(inst.F->dlog(v));
  }
  // Every nonzero value of h lies in the coset g^s H.
  inst.vmask.for_each([&](std::size_t t) {
    check(t % inst.n == inst.s, "value of h outside the predicted coset");
  });
  return inst;
}

namespace detail {

// If A is an exact union of cosets of H (the index-n subgroup), return the
// index set.
inline std::optional<zn_set> coset_union_indices(const instance& inst, const unit_set& A) {
  const u64 q1 = inst.F->q1();
  const u64 n = inst.n;
  const u64 coset_size = q1 / n;
  std::vector<u64> cnt(n, 0);
  A.bits.for_each([&](std::size_t t) { ++cnt[t % n]; });
  zn_set b0 = zn_set::empty((u32)n);
  for (u64 i = 0; i < n; ++i) {
    if (cnt[i] == 0) continue;
    if (cnt[i] != coset_size) return std::nullopt;
    b0.bits.set(i);
  }
  return b0;
}

}  // namespace detail

// Does A satisfy the star property: no product of k distinct elements of A
// is a value of h?  Fast path: when A is a union of H-cosets with index set
// B0 and s is not in kB0, the property holds structurally (products land in
// cosets g^t H with t in kB0, values in g^s H).  Otherwise an ascending
// combination search over discrete logs decides exactly.
inline bool star_check(const instance& inst, const unit_set& A) {
  const u64 q1 = inst.F->q1();
  require(A.q1() == q1, errc::precondition_violated, "set belongs to a different field");
  const u32 k = inst.k;
  if (A.size() < k) return true;

  if (auto b0 = detail::coset_union_indices(inst, A)) {
    if (b0->size() > 0 && !k_fold_sumset(*b0, k).has((u32)inst.s)) return true;
    if (b0->size() == 0) return true;
    // fall through: coset union whose index sumset hits s can still be a
    // star set only if no product actually equals a value; decide exactly.
  }

  std::vector<u32> L = A.bits.elements();
  const u32 sz = (u32)L.size();
  // DFS over ascending (k-1)-combinations carrying partial dlog sums
  std::function<bool(u32, u32, u64)> rec = [&](u32 depth, u32 start, u64 sigma) -> bool {
    if (depth == k - 1) {
      for (u32 idx = start; idx < sz; ++idx) {
        if (inst.vmask.test((sigma + L[idx]) % q1)) return true;  // product hits a value
      }
      return false;
    }
    for (u32 idx = start; idx + (k - 1 - depth) <= sz; ++idx) {
      if (rec(depth + 1, idx + 1, (sigma + L[idx]) % q1)) return true;
    }
    return false;
  };
  return !rec(0, 0, 0);
}

struct fk_caps {
  u64 pair_q_cap = 64;   // exact search cap for k = 2
  u64 high_q_cap = 32;   // exact search cap for k >= 3
  m_search_options zn;   // cap for the Z_n side
};

enum class fk_mode { exact, bracket };

struct fk_result {
  fk_mode mode = fk_mode::exact;
  u64 value = 0;  // exact: F_k(q;h); bracket: the certified lower bound
  u64 lower = 0;
  u64 upper = 0;
  unit_set witness;  // extremal star set (exact) or best construction (bracket)
  m_record mrec;
  std::optional<frac> main_term;  // m(k,n;s) * q / n
  std::optional<frac> defect;     // value - main_term (exact mode only)
};

namespace detail {

// --- exact search, k = 2: maximum independent set on at most 64 vertices ---
struct mis_ctx {
  u32 nv = 0;
  std::vector<u64> adj;
  u32 best = 0;

  u32 clique_cover_bound(u64 cand) const {
    u32 cliques = 0;
    while (cand) {
      u32 v = (u32)std::countr_zero(cand);
      u64 clique = 1ull << v;
      u64 grow = cand & adj[v];
      while (grow) {
        u32 u = (u32)std::countr_zero(grow);
        clique |= 1ull << u;
        grow &= adj[u];
      }
      cand &= ~clique;
      ++cliques;
    }
    return cliques;
  }

  void expand(u64 cand, u32 cnt) {
    if (!cand) {
      best = std::max(best, cnt);
      return;
    }
    if (cnt + std::popcount(cand) <= best) return;
    if (cnt + clique_cover_bound(cand) <= best) return;
    u32 v = (u32)std::countr_zero(cand);
    expand(cand & ~(adj[v] | (1ull << v)), cnt + 1);  // take v
    expand(cand & ~(1ull << v), cnt);                 // skip v
  }

  bool lex_first(u32 target, u32 from, u32 cnt, u64 excluded, std::vector<u32>& out) const {
    if (cnt == target) return true;
    for (u32 v = from; v < nv; ++v) {
      if ((excluded >> v) & 1) continue;
      if (cnt + (nv - v) < target) return false;
      out.push_back(v);
      if (lex_first(target, v + 1, cnt + 1, excluded | adj[v] | (1ull << v), out)) return true;
      out.pop_back();
    }
    return false;
  }
};

// --- exact search, k >= 3: DFS with running subset-sum masks -------------
struct kdfs_ctx {
  u32 q1 = 0;
  u32 k = 0;
  std::vector<u64> rotv;  // rotv[v] bit sigma = vmask[(sigma + v) % q1]
  u32 best = 0;

  // Adding v completes a forbidden k-subset iff some (k-1)-subset sum sigma
  // of the current choice has sigma + v landing on a value dlog.
  bool conflict(const std::vector<u64>& S, u32 v) const { return (S[k - 1] & rotv[v]) != 0; }

  std::vector<u64> include(const std::vector<u64>& S, u32 v) const {
    std::vector<u64> S2(S);
    for (u32 j = k - 1; j >= 1; --j) S2[j] |= rotl_n(S[j - 1], v, q1);
    return S2;
  }

  void maximize(u32 idx, u32 cnt, const std::vector<u64>& S) {
    best = std::max(best, cnt);
    if (cnt + (q1 - idx) <= best) return;
    for (u32 v = idx; v < q1; ++v) {
      if (cnt + (q1 - v) <= best) break;
      if (conflict(S, v)) continue;
      maximize(v + 1, cnt + 1, include(S, v));
    }
  }

  bool lex_first(u32 target, u32 idx, u32 cnt, const std::vector<u64>& S,
                 std::vector<u32>& out) const {
    if (cnt == target) return true;
    for (u32 v = idx; v < q1; ++v) {
      if (cnt + (q1 - v) < target) return false;
      if (conflict(S, v)) continue;
      out.push_back(v);
      if (lex_first(target, v + 1, cnt + 1, include(S, v), out)) return true;
      out.pop_back();
    }
    return false;
  }
};

inline u64 bitvec_low64(const bitvec& b) { return b.words().empty() ? 0 : b.words()[0]; }

// floor(T * sqrt(q) / D) by binary search on z^2 D^2 <= T^2 q.
inline u64 floor_mul_sqrt_div(u64 T, u64 q, u64 D) {
  u128 lim = (u128)T * T * q;
  u64 lo = 0, hi = (u64)3 << 40;
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    u128 lhs = (u128)mid * mid * ((u128)D * D);
    if (lhs <= lim)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace detail

// The coset construction: A0 = union of g^i H over i in a witness B0 with
// s not in kB0.  Size m(k,n;s) * (q-1)/n when the witness is extremal.
struct coset_construction_result {
  unit_set a;
  zn_set b0;
  m_record mrec;
};

inline coset_construction_result coset_construction(const instance& inst) {
  m_record rec = m_classify(inst.k, (u32)inst.n, (u32)inst.s, {});
  require(rec.witness.has_value() && rec.witness->size() > 0, errc::empty_construction,
          "no nonempty witness exists: m(k,n;s) = 0");
  const u64 q1 = inst.F->q1();
  unit_set A{bitvec(q1)};
  for (u64 t = 0; t < q1; ++t)
    if (rec.witness->has((u32)(t % inst.n))) A.bits.set(t);
  coset_construction_result out{std::move(A), *rec.witness, std::move(rec)};
  check(star_check(inst, out.a), "coset construction failed the star check");
  return out;
}

// F_k(q;h) by exhaustive search (small q), or a certified bracket
// [construction, counting bound] past the caps.
inline fk_result exact_fk(const instance& inst, const fk_caps& caps = {}) {
  const field& F = *inst.F;
  const u64 q1 = F.q1();
  const u32 k = inst.k;
  fk_result out;
  out.witness = unit_set{bitvec(q1)};
  out.mrec = m_classify(k, (u32)inst.n, (u32)inst.s, caps.zn);

  if (out.mrec.value) {
    out.main_term = frac::make((i64)(*out.mrec.value * F.q()), (i64)inst.n);
  }

  const bool searchable = (k == 2) ? (F.q() <= caps.pair_q_cap && q1 <= 64)
                                   : (F.q() <= caps.high_q_cap && q1 <= 64);
  if (searchable) {
    out.mode = fk_mode::exact;
    std::vector<u32> witness_logs;
    u32 best = 0;
    if (k == 2) {
      detail::mis_ctx ctx;
      ctx.nv = (u32)q1;
      ctx.adj.assign(q1, 0);
      for (u32 u = 0; u < q1; ++u)
        for (u32 v = 0; v < q1; ++v)
          if (u != v && inst.vmask.test((u + v) % q1)) ctx.adj[u] |= 1ull << v;
      u64 all = q1 == 64 ? ~0ull : (1ull << q1) - 1;
      ctx.expand(all, 0);
      best = ctx.best;
      if (best) check(ctx.lex_first(best, 0, 0, 0, witness_logs), "witness pass lost the optimum");
    } else {
      detail::kdfs_ctx ctx;
      ctx.q1 = (u32)q1;
      ctx.k = k;
      ctx.rotv.assign(q1, 0);
      u64 vm = detail::bitvec_low64(inst.vmask);
      for (u32 v = 0; v < q1; ++v) ctx.rotv[v] = detail::rotl_n(vm, (u32)((q1 - v) % q1), (u32)q1);
      std::vector<u64> S0(k, 0);
      S0[0] = 1;
      ctx.maximize(0, 0, S0);
      best = ctx.best;
      if (best)
        check(ctx.lex_first(best, 0, 0, S0, witness_logs), "witness pass lost the optimum");
    }
    out.value = out.lower = out.upper = best;
    out.witness = unit_set::from_dlogs(q1, std::vector<u64>(witness_logs.begin(), witness_logs.end()));
    check(star_check(inst, out.witness), "exact witness failed the star check");
    if (out.main_term) {
      out.defect = frac::make((i64)out.value, 1) - *out.main_term;
    }
    return out;
  }

  // Bracket mode: construction lower bound vs. coset-counting upper bound.
  out.mode = fk_mode::bracket;
  u64 m_low = out.mrec.value.value_or(out.mrec.lower);
  u64 m_high = out.mrec.value.value_or(out.mrec.upper);
  u64 coset_size = q1 / inst.n;
  u64 lower_sets = m_low * coset_size;
  u64 trivial_lower = std::min<u64>(k - 1, q1);
  if (lower_sets >= trivial_lower && m_low > 0) {
    out.lower = lower_sets;
    unit_set A{bitvec(q1)};
    if (out.mrec.witness) {
      for (u64 t = 0; t < q1; ++t)
        if (out.mrec.witness->has((u32)(t % inst.n))) A.bits.set(t);
    }
    out.witness = std::move(A);
  } else {
    out.lower = trivial_lower;
    unit_set A{bitvec(q1)};
    for (u64 t = 0; t < out.lower; ++t) A.bits.set(t);
    out.witness = std::move(A);
  }
  check(star_check(inst, out.witness), "bracket witness failed the star check");

  const u64 m_deg = (u64)inst.pp.f.deg();
  if (m_deg >= 1 && m_deg < F.q()) {
    // counting bound: m(k,n;s) (q-1)/n + n * (8 C_m + 2k + 2) sqrt(q)
    u64 T = inst.n * (8 * (m_deg - 1) * q1 + (u64)(2 * k + 2) * (F.q() - m_deg));
    u64 small_cosets = detail::floor_mul_sqrt_div(T, F.q(), F.q() - m_deg);
    u128 ub = (u128)m_high * coset_size + small_cosets;
    out.upper = ub > q1 ? q1 : (u64)ub;
  } else {
    out.upper = q1;
  }
  out.value = out.lower;
  return out;
}

// B = {i in Z_n : |A_i| >= M sqrt(q)} with M = 8 C_m + 2k + 2; for a
// verified star set the index s stays outside the k-fold sumset of B.
struct large_coset_report {
  zn_set b;
  std::vector<u64> coset_sizes;
  bool vacuous = true;       // no coset can meet the threshold at this q
  bool claim_holds = true;   // s not in kB
};

inline large_coset_report large_coset_indices(const instance& inst, const unit_set& A) {
  require(star_check(inst, A), errc::precondition_violated,
          "large-coset claim applies to star sets only");
  const field& F = *inst.F;
  const u32 m_deg = (u32)inst.pp.f.deg();
  large_coset_report rep;
  rep.b = zn_set::empty((u32)inst.n);
  rep.coset_sizes.assign(inst.n, 0);
  A.bits.for_each([&](std::size_t t) { ++rep.coset_sizes[t % inst.n]; });
  if ((u64)m_deg >= F.q()) return rep;  // threshold undefined; nothing can qualify
  rep.vacuous = !distinct_product_threshold(F.q(), m_deg, inst.k, F.q1() / inst.n);
  for (u64 i = 0; i < inst.n; ++i)
    if (distinct_product_threshold(F.q(), m_deg, inst.k, rep.coset_sizes[i]))
      rep.b.bits.set(i);
  if (rep.b.size() > 0 && k_fold_sumset(rep.b, inst.k).has((u32)inst.s)) {
    rep.claim_holds = false;
    fail(errc::assertion_failed, "large-coset index set reaches s in its k-fold sumset");
  }
  return rep;
}

// Distance from A to the nearest exact coset union over an admissible index
// set (|B0| = m(k,n;s), s not in kB0): min |A symmetric-difference union|.
struct structure_report {
  zn_set best_b0;
  u64 distance = 0;
  std::vector<u64> coset_sizes;
};

inline structure_report structure_distance(const instance& inst, const unit_set& A) {
  const u64 n = inst.n;
  m_record rec = m_exact(inst.k, (u32)n, (u32)inst.s, {});
  const u64 m = *rec.value;
  const u64 coset_size = inst.F->q1() / n;

  structure_report rep;
  rep.best_b0 = zn_set::empty((u32)n);
  rep.coset_sizes.assign(n, 0);
  A.bits.for_each([&](std::size_t t) { ++rep.coset_sizes[t % n]; });

  u64 total = A.size();
  std::optional<u64> best;
  std::vector<u32> comb;
  // enumerate size-m subsets of Z_n in lexicographic order
  std::function<void(u32, u32)> go = [&](u32 from, u32 left) {
    if (!left) {
      zn_set b0 = zn_set::of((u32)n, comb);
      if (k_fold_sumset(b0, inst.k).has((u32)inst.s)) return;
      u64 inside = 0;
      for (u32 i : comb) inside += rep.coset_sizes[i];
      u64 dist = (m * coset_size - inside) + (total - inside);
      if (!best || dist < *best) {
        best = dist;
        rep.best_b0 = b0;
      }
      return;
    }
    for (u32 i = from; i + left <= n; ++i) {
      comb.push_back(i);
      go(i + 1, left - 1);
      comb.pop_back();
    }
  };
  if (m == 0) {
    best = total;  // the empty union is the only admissible one
  } else {
    go(0, (u32)m);
  }
  require(best.has_value(), errc::no_valid_b0, "no admissible index set of the extremal size");
  rep.distance = *best;
  return rep;
}

// --- explicit Theta(sqrt q) / Theta(q^{1/m}) star sets --------------------

struct subfield_construction {
  std::shared_ptr<const field> F;
  instance inst;
  unit_set a;
  u64 t = 0;         // |A|
  elt alpha = 0;     // the non-power scaling coefficient in h
  elt u = 0;         // generator of the subfield's unit group
  bool sum_bound_ok = false;       // k(t-1) - k(k-1)/2 < (p-1)/2
  bool subfield_power_check = false;  // F_p^* inside the right power classes
  bool star_ok = false;
};

// A = {1, u, ..., u^{t-1}} in F_{p^2}, h = alpha x^2 - 1 with alpha a
// nonsquare: a star set of size Theta(sqrt q) although m(k,n;s) = 0.
inline subfield_construction sqrt_subfield_construction(u64 p, u32 k,
                                                        const field_options& opt = {},
                                                        u64 seed = 0) {
  require(is_prime(p), errc::non_prime, "p must be prime");
  require(p >= 3, errc::precondition_violated, "p must be odd");
  require(k >= 2, errc::precondition_violated, "k must be at least 2");
  auto F = std::make_shared<const field>(field::build(p, 2, opt));
  subfield_construction out;
  out.F = F;

  for (elt c = 1; c < F->q(); ++c) {
    if (F->dlog(c) % 2 == 1) {
      out.alpha = c;
      break;
    }
  }
  fpoly h(std::vector<elt>{F->neg(1), 0, out.alpha});
  out.inst = build_instance(F, h, k, seed);
  check(out.inst.pp.ell == 1 && out.inst.n == 1 && out.inst.s == 0,
        "quadratic construction should have ell = 1, n = 1, s = 0");

  out.t = (p - 1) / (2 * k) + 1;
  out.u = F->exp_g(p + 1);  // generator of F_p^* inside F_{p^2}^*
  std::vector<u64> logs;
  for (u64 i = 0; i < out.t; ++i) logs.push_back((p + 1) * i % F->q1());
  out.a = unit_set::from_dlogs(F->q1(), logs);
  check(out.a.size() == out.t, "subfield powers collided");

  i64 top = (i64)k * ((i64)out.t - 1) - (i64)k * (k - 1) / 2;
  out.sum_bound_ok = top < (i64)(p - 1) / 2;
  out.subfield_power_check = true;
  for (elt c = 1; c < p; ++c)
    if (F->dlog(c) % 2 != 0) out.subfield_power_check = false;  // F_p^* must be squares
  out.star_ok = star_check(out.inst, out.a);
  return out;
}

// A inside the prime subfield of F_{p^m}, h = alpha x^m - 1 with alpha not
// an m-th power and p = 1 mod m: a star set of size Theta(q^{1/m}).
inline subfield_construction qroot_subfield_construction(u64 p, u32 m, u32 k,
                                                         const field_options& opt = {},
                                                         u64 seed = 0) {
  require(is_prime(p), errc::non_prime, "p must be prime");
  require(m >= 3, errc::precondition_violated, "m must be at least 3");
  require(p % m == 1, errc::precondition_violated, "need p = 1 (mod m)");
  require(k >= 2, errc::precondition_violated, "k must be at least 2");
  auto F = std::make_shared<const field>(field::build(p, m, opt));
  subfield_construction out;
  out.F = F;

  for (elt c = 1; c < F->q(); ++c) {
    if (F->dlog(c) % m != 0) {
      out.alpha = c;
      break;
    }
  }
  fpoly h = p_add(*F, fpoly::monomial(m, out.alpha), fpoly::constant(F->neg(1)));
  out.inst = build_instance(F, h, k, seed);
  check(out.inst.pp.ell == 1 && out.inst.n == 1 && out.inst.s == 0,
        "q^{1/m} construction should have ell = 1, n = 1, s = 0");

  out.t = (p - 1) / (2 * k) + 1;
  u64 step = F->q1() / (p - 1);
  out.u = F->exp_g(step);
  std::vector<u64> logs;
  for (u64 i = 0; i < out.t; ++i) logs.push_back(step * i % F->q1());
  out.a = unit_set::from_dlogs(F->q1(), logs);
  check(out.a.size() == out.t, "subfield powers collided");

  i64 top = (i64)k * ((i64)out.t - 1) - (i64)k * (k - 1) / 2;
  out.sum_bound_ok = top < (i64)(p - 1) / 2;
  out.subfield_power_check = true;
  for (elt c = 1; c < p; ++c)
    if (F->dlog(c) % m != 0) out.subfield_power_check = false;  // F_p^* must be m-th powers
  out.star_ok = star_check(out.inst, out.a);
  return out;
}

// --- generator invariance --------------------------------------------------

struct invariance_row {
  u64 u = 0;      // generator exponent: g_u = g^u
  u64 s_u = 0;    // coset offset recomputed under g_u
  std::optional<u64> m_u;
};

struct invariance_report {
  bool pass = true;
  u64 n = 0;
  std::optional<u64> m_value;
  std::vector<invariance_row> rows;
};

// Rebuilds the instance from scratch under every generator g^u
// (gcd(u, q-1) = 1) and under rescaled power-part representatives
// f -> c f, C -> C c^{-ell}: n, m(k,n;s) and the main term must not move.
inline invariance_report generator_invariance_check(const instance& inst, u64 seed = 0) {
  const field& F = *inst.F;
  const u64 q1 = F.q1();
  invariance_report rep;
  rep.n = inst.n;
  m_record base = m_classify(inst.k, (u32)inst.n, (u32)inst.s, {});
  rep.m_value = base.value;

  for (u64 u = 1; u < q1; ++u) {
    if (std::gcd(u, q1) != 1) continue;
    auto Fu = std::make_shared<const field>(F.with_generator_power(u));
    instance iu = build_instance(Fu, inst.h, inst.k, seed);
    check(iu.n == inst.n, "subgroup index changed with the generator");
    m_record mu = m_classify(inst.k, (u32)iu.n, (u32)iu.s, {});
    rep.rows.push_back({u, iu.s, mu.value});
    if (mu.value != base.value) {
      rep.pass = false;
      fail(errc::assertion_failed, "m(k,n;s) changed under a generator change");
    }
  }

  // alternative representatives of the power part: f -> c f forces
  // C -> C c^{-ell}; s = dlog(C) mod n must be unchanged.
  const u64 sample_cap = 512;
  for (elt c = 1; c < F.q() && c <= sample_cap; ++c) {
    elt c_new = F.mul(inst.pp.c, F.pow(F.inv(c), inst.pp.ell));
    fpoly f_new = p_scale(F, inst.pp.f, c);
    check(p_scale(F, p_pow(F, f_new, inst.pp.ell), c_new) == inst.h,
          "rescaled representative does not recompose");
    if (F.dlog(c_new) % inst.n != inst.s) {
      rep.pass = false;
      fail(errc::assertion_failed, "coset offset moved under a representative change");
    }
  }
  return rep;
}

}  // namespace starset
