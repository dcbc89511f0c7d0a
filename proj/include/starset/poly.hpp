#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "starset/errors.hpp"
#include "starset/field.hpp"

namespace starset {

// Univariate polynomial over F_q, coefficients ascending by degree,
// normalized (no trailing zeros; the zero polynomial has no coefficients).
class fpoly {
 public:
  fpoly() = default;
  explicit fpoly(std::vector<elt> c) : c_(std::move(c)) { trim(); }

  static fpoly constant(elt c) { return fpoly(c ? std::vector<elt>{c} : std::vector<elt>{}); }
  static fpoly x() { return fpoly({0, 1}); }
  static fpoly monomial(u32 deg, elt c) {
    if (!c) return {};
    std::vector<elt> v(deg + 1, 0);
    v[deg] = c;
    return fpoly(std::move(v));
  }

  int deg() const { return (int)c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_const() const { return c_.size() <= 1; }
  elt lc() const { return c_.empty() ? 0 : c_.back(); }
  elt operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<elt>& coeffs() const { return c_; }

  friend bool operator==(const fpoly& a, const fpoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const fpoly& a, const fpoly& b) { return !(a == b); }

  // Canonical order: by degree, then by coefficient tuple (c_0, ..., c_d).
  friend bool canon_less(const fpoly& a, const fpoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    return a.c_ < b.c_;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<elt> c_;
};

inline fpoly p_add(const field& F, const fpoly& a, const fpoly& b) {
  std::vector<elt> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a[i], b[i]);
  return fpoly(std::move(c));
}

inline fpoly p_neg(const field& F, const fpoly& a) {
  std::vector<elt> c = a.coeffs();
  for (auto& x : c) x = F.neg(x);
  return fpoly(std::move(c));
}

inline fpoly p_sub(const field& F, const fpoly& a, const fpoly& b) { return p_add(F, a, p_neg(F, b)); }

inline fpoly p_scale(const field& F, const fpoly& a, elt c) {
  if (!c) return {};
  std::vector<elt> v = a.coeffs();
  for (auto& x : v) x = F.mul(x, c);
  return fpoly(std::move(v));
}

inline fpoly p_mul(const field& F, const fpoly& a, const fpoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<elt> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
  }
  return fpoly(std::move(c));
}

inline std::pair<fpoly, fpoly> p_divmod(const field& F, const fpoly& a, const fpoly& b) {
  require(!b.is_zero(), errc::zero_polynomial, "division by the zero polynomial");
  if (a.deg() < b.deg()) return {{}, a};
  std::vector<elt> rem = a.coeffs();
  std::vector<elt> quo(a.deg() - b.deg() + 1, 0);
  elt lc_inv = F.inv(b.lc());
  for (int d = a.deg(); d >= b.deg(); --d) {
    elt c = F.mul(rem[d], lc_inv);
    if (c) {
      quo[d - b.deg()] = c;
      for (int j = 0; j <= b.deg(); ++j)
        rem[d - b.deg() + j] = F.sub(rem[d - b.deg() + j], F.mul(c, b[j]));
    }
  }
  return {fpoly(std::move(quo)), fpoly(std::move(rem))};
}

inline fpoly p_div(const field& F, const fpoly& a, const fpoly& b) {
  auto [q, r] = p_divmod(F, a, b);
  check(r.is_zero(), "exact polynomial division had a remainder");
  return q;
}

inline fpoly p_mod(const field& F, const fpoly& a, const fpoly& b) { return p_divmod(F, a, b).second; }

inline fpoly p_make_monic(const field& F, const fpoly& a) {
  if (a.is_zero() || a.lc() == 1) return a;
  return p_scale(F, a, F.inv(a.lc()));
}

inline fpoly p_gcd(const field& F, fpoly a, fpoly b) {
  while (!b.is_zero()) {
    fpoly r = p_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return p_make_monic(F, a);
}

inline fpoly p_pow(const field& F, fpoly base, u64 e) {
  fpoly r = fpoly::constant(1);
  while (e) {
    if (e & 1) r = p_mul(F, r, base);
    base = p_mul(F, base, base);
    e >>= 1;
  }
  return r;
}

inline fpoly p_mulmod(const field& F, const fpoly& a, const fpoly& b, const fpoly& mod) {
  return p_mod(F, p_mul(F, a, b), mod);
}

inline fpoly p_powmod(const field& F, fpoly base, u64 e, const fpoly& mod) {
  fpoly r = fpoly::constant(1);
  base = p_mod(F, base, mod);
  while (e) {
    if (e & 1) r = p_mulmod(F, r, base, mod);
    base = p_mulmod(F, base, base, mod);
    e >>= 1;
  }
  return r;
}

inline elt p_eval(const field& F, const fpoly& f, elt x) {
  elt acc = 0;
  for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

inline fpoly p_derivative(const field& F, const fpoly& f) {
  if (f.deg() < 1) return {};
  std::vector<elt> c(f.deg(), 0);
  for (int i = 1; i <= f.deg(); ++i) c[i - 1] = F.mul(f[i], F.scalar((u64)i % F.p()));
  return fpoly(std::move(c));
}

namespace detail {

// Coefficient-wise p-th root of f = g(x^p): g's coefficient j is
// f_{jp}^{p^{m-1}} (Frobenius inverse on coefficients).
inline fpoly p_pth_root(const field& F, const fpoly& f) {
  const u64 p = F.p();
  check(f.deg() % (int)p == 0, "pth root of a polynomial with bad degree");
  u64 root_exp = 1;
  for (u32 i = 0; i + 1 < F.m(); ++i) root_exp *= p;
  std::vector<elt> c(f.deg() / (int)p + 1, 0);
  for (int i = 0; i <= f.deg(); ++i) {
    if (!f[i]) continue;
    check(i % (int)p == 0, "pth root: coefficient at non-multiple degree");
    c[i / (int)p] = F.pow(f[i], root_exp);
  }
  return fpoly(std::move(c));
}

// Squarefree decomposition of a monic f (characteristic-p aware).
// Appends (g, e) pairs: g monic squarefree, pairwise coprime, f = prod g^e.
inline void squarefree_rec(const field& F, const fpoly& f, u32 scale,
                           std::vector<std::pair<fpoly, u32>>& out) {
  fpoly fp = p_derivative(F, f);
  if (fp.is_zero()) {
    squarefree_rec(F, p_pth_root(F, f), scale * (u32)F.p(), out);
    return;
  }
  fpoly c = p_gcd(F, f, fp);
  fpoly w = p_div(F, f, c);
  u32 i = 1;
  while (w.deg() > 0) {
    fpoly y = p_gcd(F, w, c);
    fpoly z = p_div(F, w, y);
    if (z.deg() > 0) out.push_back({z, i * scale});
    ++i;
    w = std::move(y);
    c = p_div(F, c, w);
  }
  if (c.deg() > 0) squarefree_rec(F, p_pth_root(F, c), scale * (u32)F.p(), out);
}

// Distinct-degree splitting of a monic squarefree g: (product, d) pairs with
// d ascending.  Frobenius powers are iterated (exponent never exceeds q), so
// no q^d-sized exponent is ever formed.
inline std::vector<std::pair<fpoly, u32>> distinct_degree(const field& F, fpoly g) {
  std::vector<std::pair<fpoly, u32>> out;
  const fpoly x = fpoly::x();
  fpoly y = p_mod(F, x, g);
  u32 d = 0;
  while (g.deg() >= 2 * (int)(d + 1)) {
    ++d;
    y = p_powmod(F, y, F.q(), g);
    fpoly gd = p_gcd(F, p_sub(F, y, p_mod(F, x, g)), g);
    if (gd.deg() > 0) {
      out.push_back({gd, d});
      g = p_div(F, g, gd);
      y = p_mod(F, y, g);
    }
  }
  if (g.deg() > 0) out.push_back({g, (u32)g.deg()});
  return out;
}

inline fpoly random_poly_below(const field& F, int degbound, std::mt19937_64& rng) {
  for (;;) {
    std::vector<elt> c(degbound);
    for (auto& x : c) x = rng() % F.q();
    fpoly r(std::move(c));
    if (!r.is_zero()) return r;
  }
}

// Equal-degree splitting (Cantor–Zassenhaus).  Odd q uses the norm map
// z = prod_{i<d} r^{q^i} followed by z^{(q-1)/2}; characteristic 2 uses the
// trace map sum_{i<d*m} r^{2^i}.  Exponents stay below q either way.
inline void equal_degree_rec(const field& F, const fpoly& h, u32 d, std::mt19937_64& rng,
                             std::vector<fpoly>& out) {
  if ((u32)h.deg() == d) {
    out.push_back(h);
    return;
  }
  fpoly split;
  for (;;) {
    fpoly r = random_poly_below(F, h.deg(), rng);
    fpoly b;
    if (F.p() == 2) {
      u32 steps = d * F.m();
      fpoly acc = p_mod(F, r, h), sum = acc;
      for (u32 i = 1; i < steps; ++i) {
        acc = p_mulmod(F, acc, acc, h);
        sum = p_add(F, sum, acc);
      }
      b = sum;  // trace: gcd(b, h) splits when b is 0 mod some factors only
    } else {
      fpoly y = p_mod(F, r, h), z = y;
      for (u32 i = 1; i < d; ++i) {
        y = p_powmod(F, y, F.q(), h);
        z = p_mulmod(F, z, y, h);
      }
      fpoly nrm = p_powmod(F, z, (F.q() - 1) / 2, h);
      b = p_sub(F, nrm, fpoly::constant(1));
    }
    fpoly g1 = p_gcd(F, b, h);
    if (g1.deg() > 0 && g1.deg() < h.deg()) {
      split = std::move(g1);
      break;
    }
  }
  equal_degree_rec(F, split, d, rng, out);
  equal_degree_rec(F, p_div(F, h, split), d, rng, out);
}

inline std::string poly_bytes(const fpoly& f) {
  std::string s;
  for (elt c : f.coeffs())
    for (int b = 0; b < 8; ++b) s.push_back((char)((c >> (8 * b)) & 0xff));
  return s;
}

}  // namespace detail

// Rabin irreducibility test over F_q.
inline bool is_irreducible(const field& F, const fpoly& f) {
  if (f.deg() < 1) return false;
  if (f.deg() == 1) return true;
  const u32 d = (u32)f.deg();
  const fpoly x = fpoly::x();
  std::vector<u32> checkpoints;
  for (auto [r, e] : factorize(d)) checkpoints.push_back(d / (u32)r);
  fpoly y = p_mod(F, x, f);
  for (u32 t = 1; t <= d; ++t) {
    y = p_powmod(F, y, F.q(), f);
    for (u32 c : checkpoints)
      if (t == c && p_gcd(F, p_sub(F, y, p_mod(F, x, f)), f).deg() != 0) return false;
    if (t == d && !(p_sub(F, y, p_mod(F, x, f)).is_zero())) return false;
  }
  return true;
}

struct factorization {
  elt unit = 1;                                // leading coefficient of the input
  std::vector<std::pair<fpoly, u32>> factors;  // (monic irreducible, multiplicity)
};

// Full factorization over F_q.  Output order is canonical (degree, then
// coefficient tuple), so the result is independent of the RNG draw; the RNG
// itself is seeded from the polynomial bytes and the caller seed.  The
// product of the parts is re-expanded and compared with the input before
// returning.
inline factorization factor(const field& F, const fpoly& h, u64 seed = 0) {
  require(!h.is_zero(), errc::zero_polynomial, "factor of the zero polynomial");
  factorization out;
  out.unit = h.lc();
  if (h.deg() == 0) return out;
  fpoly f = p_make_monic(F, h);
  std::mt19937_64 rng(fnv1a64(detail::poly_bytes(f)) ^ (seed * 0x9e3779b97f4a7c15ull));

  std::vector<std::pair<fpoly, u32>> sf;
  detail::squarefree_rec(F, f, 1, sf);
  for (auto& [g, e] : sf) {
    for (auto& [prod, d] : detail::distinct_degree(F, g)) {
      std::vector<fpoly> irr;
      detail::equal_degree_rec(F, prod, d, rng, irr);
      for (auto& pi : irr) out.factors.push_back({pi, e});
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return canon_less(a.first, b.first); });

  fpoly recomposed = fpoly::constant(out.unit);
  for (auto& [pi, e] : out.factors) {
    check(is_irreducible(F, pi), "factor() produced a reducible part");
    recomposed = p_mul(F, recomposed, p_pow(F, pi, e));
  }
  check(recomposed == h, "factorization does not re-expand to its input");
  return out;
}

// Largest ell with h = C * f(x)^ell (f monic, C the leading coefficient).
struct power_part_result {
  elt c = 1;
  fpoly f;
  u32 ell = 1;
};

inline power_part_result power_part(const field& F, const fpoly& h, u64 seed = 0) {
  require(!h.is_zero(), errc::zero_polynomial, "power part of the zero polynomial");
  require(h.deg() >= 1, errc::constant_polynomial, "power part of a constant");
  factorization fac = factor(F, h, seed);
  u32 ell = 0;
  for (auto& [pi, e] : fac.factors) ell = ell ? (u32)std::gcd(ell, e) : e;
  fpoly f = fpoly::constant(1);
  for (auto& [pi, e] : fac.factors) f = p_mul(F, f, p_pow(F, pi, e / ell));
  power_part_result out{fac.unit, f, ell};
  check(p_scale(F, p_pow(F, out.f, out.ell), out.c) == h, "power part does not re-expand");
  return out;
}

// Is h = c * u(x)^d for some constant c and polynomial u?  Over a finite
// field this holds iff d divides every multiplicity in the factorization.
inline bool is_dth_power_multiple(const field& F, const fpoly& h, u32 d, u64 seed = 0) {
  require(!h.is_zero(), errc::zero_polynomial, "power test of the zero polynomial");
  require(d >= 1, errc::precondition_violated, "d must be positive");
  if (h.deg() == 0) return true;  // constants are c * 1^d
  factorization fac = factor(F, h, seed);
  for (auto& [pi, e] : fac.factors)
    if (e % d != 0) return false;
  return true;
}

// Number of distinct roots of h in its splitting field = sum of the degrees
// of its distinct irreducible factors.
inline u32 radical_root_count(const field& F, const fpoly& h, u64 seed = 0) {
  require(!h.is_zero(), errc::zero_polynomial, "radical of the zero polynomial");
  require(h.deg() >= 1, errc::constant_polynomial, "radical of a constant");
  factorization fac = factor(F, h, seed);
  u32 total = 0;
  for (auto& [pi, e] : fac.factors) total += (u32)pi.deg();
  return total;
}

// The image h(F_q) as a sorted vector of element codes.
inline std::vector<elt> value_set(const field& F, const fpoly& h) {
  std::vector<bool> seen(F.q(), false);
  for (elt x = 0; x < F.q(); ++x) seen[p_eval(F, h, x)] = true;
  std::vector<elt> out;
  for (elt v = 0; v < F.q(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

// --- polynomial text format ----------------------------------------------
// Comma-separated coefficient tokens, constant term first: "6,0,1" is
// x^2 + 6.  Tokens use the element format (dotted digits for extensions).

inline std::string format_poly(const field& F, const fpoly& f) {
  if (f.is_zero()) return format_elt(F, 0);
  std::string s;
  for (int i = 0; i <= f.deg(); ++i) {
    if (i) s += ',';
    s += format_elt(F, f[i]);
  }
  return s;
}

inline fpoly parse_poly(const field& F, const std::string& text) {
  std::vector<elt> c;
  std::size_t pos = 0;
  require(!text.empty(), errc::config_invalid, "empty polynomial text");
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    c.push_back(parse_elt(F, tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return fpoly(std::move(c));
}

}  // namespace starset
