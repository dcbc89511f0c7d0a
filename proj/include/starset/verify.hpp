#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "starset/chars.hpp"
#include "starset/field.hpp"
#include "starset/parallel.hpp"
#include "starset/poly.hpp"
#include "starset/starsets.hpp"
#include "starset/sumsets.hpp"
#include "starset/version.hpp"

// The acceptance suite: twelve self-contained checks of the library against
// independent brute-force oracles and closed-form predictions.  Every check
// is deterministic; the final criterion re-runs the other eleven and demands
// a byte-identical report.

namespace starset {

struct criterion_result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct acceptance_options {
  unsigned threads = 1;
  u64 seed = 0;
  std::vector<int> only;  // empty = run all criteria
};

struct acceptance_report {
  std::vector<criterion_result> results;
  std::string payload;  // canonical JSON of the core criteria
  bool all_pass = true;
};

inline const char* criterion_name(int id) {
  switch (id) {
    case 1: return "sumset-oracle";
    case 2: return "coprime-formula";
    case 3: return "divisor-bounds";
    case 4: return "zero-rule";
    case 5: return "char-sum-bound";
    case 6: return "square-product-pairs";
    case 7: return "cube-product-growth";
    case 8: return "sqrt-construction";
    case 9: return "root-construction";
    case 10: return "generator-invariance";
    case 11: return "coset-structure";
    case 12: return "determinism";
  }
  return "?";
}

namespace detail {

inline std::string fmt_f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", (unsigned)(unsigned char)ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

// Runs a criterion body, converting any escaped exception into a failure.
template <typename Body>
criterion_result run_guarded(int id, Body&& body) {
  criterion_result r{id, criterion_name(id), false, ""};
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

// Pinned instances (p, m, h as coefficient text, k) used by the invariance
// and structure criteria.  The list mixes prime and extension fields, pure
// powers, scaled powers, and a non-trivial square decomposition.
struct pinned_instance {
  u64 p = 0;
  u32 m = 1;
  const char* h = "";
  u32 k = 2;
};

inline const std::vector<pinned_instance>& invariance_pins() {
  static const std::vector<pinned_instance> pins = {
      {7, 1, "0,0,0,1", 2},                              // x^3
      {7, 1, "0,0,0,1", 3},                              // x^3, k = 3
      {7, 1, "0,0,3", 2},                                // 3x^2
      {13, 1, "0,0,0,1", 2},                             // x^3
      {13, 1, "0,0,0,0,2", 2},                           // 2x^4
      {13, 1, "0,0,0,0,0,0,1", 2},                       // x^6
      {11, 1, "0,0,0,0,0,1", 2},                         // x^5
      {11, 1, "0,0,0,0,0,2", 2},                         // 2x^5
      {17, 1, "0,0,0,0,1", 2},                           // x^4
      {19, 1, "0,0,0,1", 2},                             // x^3
      {19, 1, "0,0,0,0,0,0,1", 3},                       // x^6, k = 3
      {23, 1, "0,0,5", 2},                               // 5x^2
      {29, 1, "0,0,0,0,2", 2},                           // 2x^4
      {31, 1, "0,0,0,1", 2},                             // x^3
      {3, 2, "0.0,0.0,0.0,0.0,1.0", 2},                  // x^4 over F_9
      {2, 4, "0.0.0.0,0.0.0.0,0.0.0.0,1.0.0.0", 2},      // x^3 over F_16
      {5, 2, "0.0,0.0,0.0,1.0", 2},                      // x^3 over F_25
      {3, 3, "0.0.0,0.0.0,1.0.0", 2},                    // x^2 over F_27
      {7, 2, "0.0,0.0,0.0,0.0,1.0", 2},                  // x^4 over F_49
      {7, 1, "2,0,4,0,2", 2},                            // 2(x^2+1)^2
  };
  return pins;
}

inline const std::vector<pinned_instance>& structure_pins() {
  static const std::vector<pinned_instance> pins = {
      {7, 1, "0,0,0,1", 2},        // x^3
      {7, 1, "0,0,3", 2},          // 3x^2
      {13, 1, "0,0,0,1", 2},       // x^3
      {13, 1, "0,0,0,0,2", 2},     // 2x^4
      {11, 1, "0,0,0,0,0,1", 2},   // x^5
      {17, 1, "0,0,0,0,1", 2},     // x^4
      {13, 1, "0,0,0,0,0,0,1", 2}, // x^6
  };
  return pins;
}

inline instance build_pinned(const pinned_instance& pin, const field_options& opt = {},
                             u64 seed = 0) {
  auto F = std::make_shared<const field>(field::build(pin.p, pin.m, opt));
  return build_instance(F, parse_poly(*F, pin.h), pin.k, seed);
}

namespace detail {

// --- criterion 1: k-fold sumsets vs. direct tuple enumeration -------------
inline void crit_sumset_oracle(criterion_result& r) {
  u64 cases = 0;
  for (u32 n = 1; n <= 12; ++n) {
    std::vector<char> hit(n);
    for (u64 mask = 0; mask < (u64{1} << n); ++mask) {
      std::vector<u32> es;
      for (u32 i = 0; i < n; ++i)
        if ((mask >> i) & 1) es.push_back(i);
      zn_set B = zn_set::of(n, es);
      for (u32 k = 1; k <= 4; ++k) {
        zn_set fast = k_fold_sumset(B, k);
        std::fill(hit.begin(), hit.end(), 0);
        switch (k) {  // every k-tuple with repetition, summed directly
          case 1:
            for (u32 a : es) hit[a % n] = 1;
            break;
          case 2:
            for (u32 a : es)
              for (u32 b : es) hit[(a + b) % n] = 1;
            break;
          case 3:
            for (u32 a : es)
              for (u32 b : es)
                for (u32 c : es) hit[(a + b + c) % n] = 1;
            break;
          case 4:
            for (u32 a : es)
              for (u32 b : es)
                for (u32 c : es)
                  for (u32 d : es) hit[(a + b + c + d) % n] = 1;
            break;
        }
        ++cases;
        for (u32 i = 0; i < n; ++i) {
          if (fast.has(i) != (hit[i] != 0)) {
            r.detail = "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                       " set mask=" + std::to_string(mask) + " element " + std::to_string(i);
            return;
          }
        }
      }
    }
  }
  r.pass = true;
  r.detail = std::to_string(cases) +
             " (subset,k) cases over Z_1..Z_12, k=1..4 match the tuple enumeration";
}

// --- criteria 2-4: one exhaustive (k,n,s) grid, three checks ---------------
struct m_grid_out {
  bool ok2 = true, ok3 = true, ok4 = true;
  std::string d2, d3, d4;
  u64 formula_cases = 0, grid_cases = 0;
};

inline m_grid_out crit_m_grid() {
  m_grid_out g;
  for (u32 k = 2; k <= 6; ++k) {
    for (u32 n = 1; n <= 18; ++n) {
      const bool coprime = std::gcd(k, n) == 1;
      const u64 formula = coprime ? m_formula_coprime(k, n) : 0;
      for (u32 s = 0; s < n; ++s) {
        m_record rec = m_exact(k, n, s);
        const u64 v = *rec.value;
        std::string at = "(k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                         ", s=" + std::to_string(s) + ")";
        ++g.grid_cases;
        if (g.ok3 && !(rec.lower <= v && v <= rec.upper)) {
          g.ok3 = false;
          g.d3 = "search value " + std::to_string(v) + " escapes [" + std::to_string(rec.lower) +
                 ", " + std::to_string(rec.upper) + "] at " + at;
        }
        if (g.ok4 && ((v == 0) != zero_rule(k, n, s))) {
          g.ok4 = false;
          g.d4 = "vanishing test disagrees with the search at " + at;
        }
        if (coprime) {
          ++g.formula_cases;
          if (g.ok2 && v != formula) {
            g.ok2 = false;
            g.d2 = "closed form gives " + std::to_string(formula) + ", search gives " +
                   std::to_string(v) + " at " + at;
          }
        }
      }
    }
  }
  return g;
}

// --- criterion 5: character sums vs. the square-root bound -----------------
struct weil_cell {
  u64 checked = 0, skipped = 0;
  double max_ratio = 0.0;
  bool pass = true;
  std::string first_violation;
};

inline void crit_char_sum_bound(criterion_result& r, unsigned threads, u64 seed) {
  static const std::pair<u64, u32> field_list[] = {{5, 1}, {7, 1},  {3, 2},  {11, 1}, {13, 1},
                                                   {2, 4}, {17, 1}, {19, 1}, {23, 1}, {5, 2}};
  u64 polys = 0, pairs = 0, skipped = 0;
  double max_ratio = 0.0;
  for (auto [p, m] : field_list) {
    const field F = field::build(p, m);
    const unity_table tab = unity_table::make(F);
    const u64 q = F.q();
    for (u32 deg = 2; deg <= 3; ++deg) {
      u64 total = 1;
      for (u32 i = 0; i < deg; ++i) total *= q;
      auto cells = ordered_map(total, threads, [&](std::size_t idx) -> weil_cell {
        std::vector<elt> c(deg + 1, 0);
        u64 rest = idx;
        for (u32 i = 0; i < deg; ++i) {
          c[i] = rest % q;
          rest /= q;
        }
        c[deg] = 1;
        fpoly f{std::move(c)};
        weil_report rep = weil_verify(F, f, 1e-6, &tab, seed);
        weil_cell cell;
        cell.checked = rep.checked;
        cell.skipped = rep.skipped;
        cell.max_ratio = rep.max_ratio;
        cell.pass = rep.pass;
        if (!rep.pass && !rep.violations.empty()) {
          const auto& v = rep.violations.front();
          cell.first_violation = "q=" + std::to_string(q) + " f=" + format_poly(F, f) +
                                 " char " + std::to_string(v.j) + " scale " +
                                 format_elt(F, v.a) + ": |sum| " + fmt_f6(v.magnitude) +
                                 " > bound " + fmt_f6(v.bound);
        }
        return cell;
      });
      polys += total;
      for (const weil_cell& cell : cells) {
        pairs += cell.checked;
        skipped += cell.skipped;
        max_ratio = std::max(max_ratio, cell.max_ratio);
        if (!cell.pass) {
          r.detail = cell.first_violation;
          return;
        }
      }
    }
  }
  r.pass = true;
  r.detail = "10 fields, " + std::to_string(polys) + " monic cubics/quadratics, " +
             std::to_string(pairs) + " (char,scale) pairs within bound (" +
             std::to_string(skipped) + " power-multiple chars skipped); max |S|/bound = " +
             fmt_f6(max_ratio);
}

// --- criterion 6: pair products against squares -----------------------------
// Independent oracle: subsets of {1,...,q-1} under plain integer arithmetic.
inline u64 naive_pair_star_max(u64 q, const std::vector<char>& is_value) {
  const u32 nu = (u32)(q - 1);
  u64 best = 0;
  for (u64 mask = 0; mask < (u64{1} << nu); ++mask) {
    bool ok = true;
    for (u32 i = 0; i < nu && ok; ++i) {
      if (!((mask >> i) & 1)) continue;
      for (u32 j = i + 1; j < nu; ++j) {
        if (!((mask >> j) & 1)) continue;
        if (is_value[(u64)(i + 1) * (j + 1) % q]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) best = std::max<u64>(best, (u64)std::popcount(mask));
  }
  return best;
}

inline void crit_square_product_pairs(criterion_result& r, u64 seed) {
  static const u64 primes[] = {5, 7, 11, 13, 17, 19, 23, 29, 31};
  u64 oracle_count = 0;
  for (u64 q : primes) {
    auto F = std::make_shared<const field>(field::build(q, 1));
    instance inst = build_instance(F, fpoly({0, 0, 1}), 2, seed);
    fk_result fk = exact_fk(inst);
    if (fk.mode != fk_mode::exact || fk.value != 2) {
      r.detail = "largest pair-product-free set over F_" + std::to_string(q) + " came out " +
                 std::to_string(fk.value) + ", expected 2";
      return;
    }
    if (q <= 13) {
      std::vector<char> is_sq(q, 0);
      for (u64 a = 1; a < q; ++a) is_sq[a * a % q] = 1;
      ++oracle_count;
      if (naive_pair_star_max(q, is_sq) != 2) {
        r.detail = "subset oracle disagrees at q = " + std::to_string(q);
        return;
      }
    }
  }
  r.pass = true;
  r.detail = "largest set with no two-element product a nonzero square is 2 for 9 odd primes"
             " (subset oracle agrees on " + std::to_string(oracle_count) + " small fields)";
}

// --- criterion 7: pair products against cubes grow like q/3 ----------------
inline void crit_cube_product_growth(criterion_result& r, u64 seed) {
  static const u64 primes[] = {7, 13, 19, 31, 37, 43, 61};
  double worst = 0.0;
  for (u64 q : primes) {
    auto F = std::make_shared<const field>(field::build(q, 1));
    instance inst = build_instance(F, fpoly({0, 0, 0, 1}), 2, seed);
    fk_result fk = exact_fk(inst);
    if (fk.mode != fk_mode::exact) {
      r.detail = "q = " + std::to_string(q) + " fell out of the exact range";
      return;
    }
    if (fk.value < (q - 1) / 3) {
      r.detail = "value " + std::to_string(fk.value) + " below the coset floor " +
                 std::to_string((q - 1) / 3) + " at q = " + std::to_string(q);
      return;
    }
    double dev = ((double)fk.value - (double)q / 3.0) / std::sqrt((double)q);
    worst = std::max(worst, dev);
    if (dev > 10.0) {
      r.detail = "normalized deviation " + fmt_f6(dev) + " exceeds 10 at q = " + std::to_string(q);
      return;
    }
  }
  r.pass = true;
  r.detail = "7 prime fields: value >= (q-1)/3 and (value - q/3)/sqrt(q) <= 10 (max " +
             fmt_f6(worst) + ")";
}

// --- criterion 8: the sqrt(q) construction ----------------------------------
inline void crit_sqrt_construction(criterion_result& r, u64 seed) {
  static const u64 primes[] = {5, 7, 11, 13};
  u64 combos = 0;
  for (u64 p : primes) {
    for (u32 k = 2; k <= 3; ++k) {
      subfield_construction c = sqrt_subfield_construction(p, k, {}, seed);
      u64 t_expect = (p - 1) / (2 * k) + 1;
      std::string at = "(p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")";
      if (c.t != t_expect || c.a.size() != c.t) {
        r.detail = "set size " + std::to_string(c.a.size()) + " != " + std::to_string(t_expect) +
                   " at " + at;
        return;
      }
      if (!c.star_ok || !c.sum_bound_ok || !c.subfield_power_check) {
        r.detail = std::string(!c.star_ok ? "product-freeness"
                               : !c.sum_bound_ok ? "exponent sum bound"
                                                 : "subfield power class") +
                   " failed at " + at;
        return;
      }
      ++combos;
    }
  }
  r.pass = true;
  r.detail = std::to_string(combos) +
             " (p,k) quadratic-extension sets of size (p-1)/(2k)+1, all product-free";
}

// --- criterion 9: the q^(1/m) construction ----------------------------------
inline void crit_root_construction(criterion_result& r, u64 seed) {
  static const std::pair<u64, u32> cases[] = {{7, 3}, {13, 3}};
  for (auto [p, m] : cases) {
    subfield_construction c = qroot_subfield_construction(p, m, 2, {}, seed);
    std::string at = "(p=" + std::to_string(p) + ", m=" + std::to_string(m) + ")";
    if (c.a.size() != c.t) {
      r.detail = "prime-subfield powers collided at " + at;
      return;
    }
    if (!c.star_ok || !c.subfield_power_check) {
      r.detail = std::string(!c.star_ok ? "product-freeness" : "subfield power class") +
                 " failed at " + at;
      return;
    }
  }
  r.pass = true;
  r.detail = "degree-3 extensions of F_7 and F_13: prime-subfield sets are product-free";
}

// --- criterion 10: nothing depends on the generator or the representative ---
inline void crit_generator_invariance(criterion_result& r, u64 seed) {
  u64 rebuilds = 0;
  for (const pinned_instance& pin : invariance_pins()) {
    instance inst = build_pinned(pin, {}, seed);
    invariance_report rep = generator_invariance_check(inst, seed);
    if (!rep.pass) {
      r.detail = "invariance failed for h = " + std::string(pin.h) + " over F_" +
                 std::to_string(pin.p) + "^" + std::to_string(pin.m);
      return;
    }
    rebuilds += rep.rows.size();
  }
  r.pass = true;
  r.detail = std::to_string(invariance_pins().size()) + " pinned instances, " +
             std::to_string(rebuilds) +
             " generator rebuilds plus representative rescales: n, s-class and m all stable";
}

// --- criterion 11: extremal sets against the coset structure ----------------
inline void crit_coset_structure(criterion_result& r, u64 seed) {
  u64 max_dist = 0;
  for (const pinned_instance& pin : structure_pins()) {
    instance inst = build_pinned(pin, {}, seed);
    std::string at = "h = " + std::string(pin.h) + " over F_" + std::to_string(pin.p);
    coset_construction_result cc = coset_construction(inst);
    structure_report on_union = structure_distance(inst, cc.a);
    if (on_union.distance != 0) {
      r.detail = "coset union sits at distance " + std::to_string(on_union.distance) +
                 " from itself for " + at;
      return;
    }
    fk_result fk = exact_fk(inst);
    structure_report on_witness = structure_distance(inst, fk.witness);
    max_dist = std::max(max_dist, on_witness.distance);
    if (on_witness.distance > inst.F->q1()) {
      r.detail = "witness distance exceeds the unit group size for " + at;
      return;
    }
  }
  r.pass = true;
  r.detail = std::to_string(structure_pins().size()) +
             " instances: coset unions at distance 0, extremal witnesses within " +
             std::to_string(max_dist) + " of a coset union";
}

}  // namespace detail

inline std::string render_payload(const std::vector<criterion_result>& rs) {
  std::string out = "[";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (i) out += ",";
    out += "{\"id\":" + std::to_string(rs[i].id) + ",\"name\":\"" +
           detail::json_escape(rs[i].name) + "\",\"pass\":" + (rs[i].pass ? "true" : "false") +
           ",\"detail\":\"" + detail::json_escape(rs[i].detail) + "\"}";
  }
  out += "]";
  return out;
}

namespace detail {

inline std::vector<criterion_result> run_core_criteria(
    const acceptance_options& opt, const std::function<bool(int)>& selected,
    const std::function<void(const criterion_result&)>& on_result) {
  std::vector<criterion_result> out;
  auto emit = [&](criterion_result r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };

  if (selected(1)) emit(run_guarded(1, [&](criterion_result& r) { crit_sumset_oracle(r); }));

  if (selected(2) || selected(3) || selected(4)) {
    m_grid_out g;
    bool grid_threw = false;
    std::string threw_what;
    try {
      g = crit_m_grid();
    } catch (const std::exception& e) {
      grid_threw = true;
      threw_what = std::string("exception: ") + e.what();
    }
    auto grid_result = [&](int id, bool ok, const std::string& fail_detail,
                           const std::string& pass_detail) {
      criterion_result r{id, criterion_name(id), false, ""};
      if (grid_threw) {
        r.detail = threw_what;
      } else {
        r.pass = ok;
        r.detail = ok ? pass_detail : fail_detail;
      }
      emit(std::move(r));
    };
    std::string grid_tag = std::to_string(g.grid_cases) + " (k,n,s) cells, k=2..6, n=1..18";
    if (selected(2))
      grid_result(2, g.ok2, g.d2,
                  std::to_string(g.formula_cases) +
                      " coprime cells: closed form equals the exhaustive search");
    if (selected(3))
      grid_result(3, g.ok3, g.d3, grid_tag + ": search value inside the divisor bounds");
    if (selected(4))
      grid_result(4, g.ok4, g.d4,
                  grid_tag + ": search vanishes exactly on the divisibility case");
  }

  if (selected(5))
    emit(run_guarded(
        5, [&](criterion_result& r) { crit_char_sum_bound(r, opt.threads, opt.seed); }));
  if (selected(6))
    emit(run_guarded(6, [&](criterion_result& r) { crit_square_product_pairs(r, opt.seed); }));
  if (selected(7))
    emit(run_guarded(7, [&](criterion_result& r) { crit_cube_product_growth(r, opt.seed); }));
  if (selected(8))
    emit(run_guarded(8, [&](criterion_result& r) { crit_sqrt_construction(r, opt.seed); }));
  if (selected(9))
    emit(run_guarded(9, [&](criterion_result& r) { crit_root_construction(r, opt.seed); }));
  if (selected(10))
    emit(run_guarded(10, [&](criterion_result& r) { crit_generator_invariance(r, opt.seed); }));
  if (selected(11))
    emit(run_guarded(11, [&](criterion_result& r) { crit_coset_structure(r, opt.seed); }));
  return out;
}

}  // namespace detail

// Runs the selected criteria (all twelve by default).  Criterion 12 re-runs
// the others and compares the canonical reports byte for byte.
inline acceptance_report run_acceptance(
    const acceptance_options& opt = {},
    const std::function<void(const criterion_result&)>& on_result = nullptr) {
  auto selected = [&](int id) {
    return opt.only.empty() ||
           std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
  };
  acceptance_report rep;
  rep.results = detail::run_core_criteria(opt, selected, on_result);
  rep.payload = render_payload(rep.results);
  if (selected(12)) {
    std::vector<criterion_result> rerun = detail::run_core_criteria(opt, selected, nullptr);
    std::string payload2 = render_payload(rerun);
    criterion_result c12{12, criterion_name(12), rep.payload == payload2, ""};
    c12.detail = c12.pass ? "second run reproduced the report byte for byte (" +
                                std::to_string(rep.payload.size()) + " bytes)"
                          : "second run produced a different report";
    if (on_result) on_result(c12);
    rep.results.push_back(std::move(c12));
  }
  for (const criterion_result& r : rep.results) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

inline std::string format_criterion_line(const criterion_result& r) {
  char head[64];
  std::snprintf(head, sizeof head, "criterion %2d  %-22s %s", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL");
  return std::string(head) + "  " + r.detail;
}

}  // namespace starset
