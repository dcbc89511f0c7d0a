#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "starset/bits.hpp"
#include "starset/errors.hpp"
#include "starset/numtheory.hpp"

namespace starset {

// An element of F_{p^m} is a coefficient vector (a_0, ..., a_{m-1}) over F_p
// packed into the canonical integer code sum a_i * p^i.  Every code in
// [0, q) is a valid element; code arithmetic is field arithmetic.
using elt = u64;

struct field_spec {
  u64 p = 0;
  u32 m = 0;
  u64 q = 0;
};

struct field_options {
  u64 size_cap = u64{1} << 20;         // largest q build() accepts
  u64 dlog_table_limit = u64{1} << 20; // build exp/log tables when q <= this
};

namespace detail {

// Polynomial helpers over the prime field F_p (coefficient vectors,
// ascending degree, normalized).  Used only to bootstrap the extension
// field: modulus scan and irreducibility tests.
inline void pf_trim(std::vector<u64>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> pf_mul(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  pf_trim(c);
  return c;
}

inline std::vector<u64> pf_mod(std::vector<u64> a, const std::vector<u64>& mod, u64 p) {
  u64 lc_inv = inv_mod(mod.back(), p);
  while (a.size() >= mod.size()) {
    u64 c = mulmod(a.back(), lc_inv, p);
    std::size_t shift = a.size() - mod.size();
    if (c) {
      for (std::size_t j = 0; j < mod.size(); ++j) {
        u64 sub = mulmod(c, mod[j], p);
        a[shift + j] = (a[shift + j] + p - sub) % p;
      }
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.size() < mod.size()) break;
  }
  return a;
}

inline std::vector<u64> pf_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
  while (!b.empty()) {
    a = pf_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  if (!a.empty() && a.back() != 1) {
    u64 inv = inv_mod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

inline std::vector<u64> pf_powmod(std::vector<u64> base, u64 e, const std::vector<u64>& mod, u64 p) {
  std::vector<u64> r{1};
  base = pf_mod(std::move(base), mod, p);
  while (e) {
    if (e & 1) r = pf_mod(pf_mul(r, base, p), mod, p);
    base = pf_mod(pf_mul(base, base, p), mod, p);
    e >>= 1;
  }
  return r;
}

// Rabin irreducibility test over F_p for monic f of degree d:
// x^{p^d} == x (mod f) and gcd(x^{p^{d/r}} - x, f) = 1 for prime r | d.
inline bool pf_irreducible(const std::vector<u64>& f, u64 p) {
  std::size_t d = f.size() - 1;
  if (d == 0) return false;
  std::vector<u64> x{0, 1};
  std::vector<std::size_t> checkpoints;
  for (auto [r, e] : factorize(d)) checkpoints.push_back(d / r);
  std::vector<u64> y = pf_mod(x, f, p);
  for (std::size_t t = 1; t <= d; ++t) {
    y = pf_powmod(std::move(y), p, f, p);  // y = x^{p^t} mod f
    bool at_checkpoint = false;
    for (std::size_t c : checkpoints) at_checkpoint |= (t == c);
    if (at_checkpoint) {
      // gcd(y - x, f) must be constant
      std::vector<u64> diff = y;
      if (diff.size() < 2) diff.resize(2, 0);
      diff[1] = (diff[1] + p - 1) % p;
      pf_trim(diff);
      if (pf_gcd(diff, f, p).size() != 1) return false;
    }
    if (t == d) {
      std::vector<u64> xr = pf_mod(x, f, p);
      if (y != xr) return false;
    }
  }
  return true;
}

}  // namespace detail

class field {
 public:
  // Constructs F_{p^m} with the canonical (lexicographically smallest)
  // monic irreducible modulus over F_p and the smallest-code generator.
  static field build(u64 p, u32 m, const field_options& opt = {}) {
    require(is_prime(p), errc::non_prime, "p = " + std::to_string(p) + " is not prime");
    require(m >= 1 && m <= 63, errc::precondition_violated, "extension degree out of range");
    u128 qq = 1;
    for (u32 i = 0; i < m; ++i) {
      qq *= p;
      require(qq <= opt.size_cap, errc::size_cap_exceeded,
              "q = p^m exceeds size cap " + std::to_string(opt.size_cap));
    }
    field F;
    F.spec_ = {p, m, (u64)qq};
    F.mod_ = (m == 1) ? std::vector<u64>{0, 1} : smallest_irreducible(p, m);
    F.q1_factors_ = factorize(F.q1());
    F.gen_ = F.scan_generator();
    if (F.q() <= opt.dlog_table_limit && F.q() <= (u64{1} << 32)) F.build_tables();
    return F;
  }

  const field_spec& spec() const { return spec_; }
  u64 p() const { return spec_.p; }
  u32 m() const { return spec_.m; }
  u64 q() const { return spec_.q; }
  u64 q1() const { return spec_.q - 1; }
  const std::vector<u64>& modulus() const { return mod_; }
  elt generator() const { return gen_; }
  bool prime_field() const { return spec_.m == 1; }
  bool has_tables() const { return tables_; }
  const std::vector<std::pair<u64, u32>>& unit_group_factors() const { return q1_factors_; }

  elt zero() const { return 0; }
  elt one() const { return 1; }

  elt add(elt a, elt b) const {
    if (prime_field()) {
      elt s = a + b;
      return s >= spec_.p ? s - spec_.p : s;
    }
    const u64 p = spec_.p;
    elt r = 0;
    u64 mult = 1;
    for (u32 i = 0; i < spec_.m; ++i) {
      u64 s = a % p + b % p;
      if (s >= p) s -= p;
      r += s * mult;
      mult *= p;
      a /= p;
      b /= p;
    }
    return r;
  }

  elt neg(elt a) const {
    if (prime_field()) return a ? spec_.p - a : 0;
    const u64 p = spec_.p;
    elt r = 0;
    u64 mult = 1;
    for (u32 i = 0; i < spec_.m; ++i) {
      u64 d = a % p;
      r += (d ? p - d : 0) * mult;
      mult *= p;
      a /= p;
    }
    return r;
  }

  elt sub(elt a, elt b) const { return add(a, neg(b)); }

  elt mul(elt a, elt b) const {
    if (a == 0 || b == 0) return 0;
    if (prime_field()) return mulmod(a, b, spec_.p);
    if (tables_) return exp_[(u64)(log_[a] + (u64)log_[b]) % q1()];
    return mul_nt(a, b);
  }

  elt inv(elt a) const {
    require(a != 0, errc::zero_element, "inverse of zero");
    if (prime_field()) return inv_mod(a, spec_.p);
    if (tables_) return exp_[(q1() - log_[a]) % q1()];
    return pow_nt(a, q() - 2);
  }

  elt div(elt a, elt b) const { return mul(a, inv(b)); }

  elt pow(elt a, u64 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    if (tables_ && !prime_field()) return exp_[mulmod(log_[a], e % q1(), q1())];
    if (prime_field()) return powmod(a, e % q1(), spec_.p);
    return pow_nt(a, e % q1());
  }

  // Discrete log base the stored generator: a = g^t, t in [0, q-1).
  u64 dlog(elt a) const {
    require(a != 0, errc::zero_element, "dlog of zero");
    if (tables_) return log_[a];
    return dlog_bsgs(a);
  }

  elt exp_g(u64 t) const {
    if (tables_) return exp_[t % q1()];
    return pow_nt(gen_, t % q1());
  }

  // Index of the H-coset of a, H the unique subgroup of index n: dlog mod n.
  u64 coset_index(elt a, u64 n) const {
    require(n >= 1 && q1() % n == 0, errc::not_a_divisor,
            "n = " + std::to_string(n) + " does not divide q-1");
    return dlog(a) % n;
  }

  std::vector<u64> coeffs(elt a) const {
    std::vector<u64> d(spec_.m);
    for (u32 i = 0; i < spec_.m; ++i) {
      d[i] = a % spec_.p;
      a /= spec_.p;
    }
    return d;
  }

  elt from_coeffs(const std::vector<u64>& d) const {
    require(d.size() <= spec_.m, errc::precondition_violated, "too many coefficients");
    elt a = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
      require(d[i] < spec_.p, errc::precondition_violated, "coefficient out of range");
      a = a * spec_.p + d[i];
    }
    return a;
  }

  elt scalar(u64 c) const { return c % spec_.p; }

  // Same field, same modulus, generator replaced by g^u (u a unit mod q-1).
  // Discrete logs and coset indices change; arithmetic does not.
  field with_generator_power(u64 u) const {
    require(std::gcd(u, q1()) == 1, errc::not_coprime, "u not coprime to q-1");
    field F = *this;
    F.gen_ = pow(gen_, u);
    if (tables_) F.build_tables();
    return F;
  }

 private:
  field() = default;

  // Enumerates monic degree-m polynomials over F_p in lexicographic order of
  // (c_0, c_1, ..., c_{m-1}) — constant coefficient most significant — and
  // returns the first irreducible one.
  static std::vector<u64> smallest_irreducible(u64 p, u32 m) {
    u128 total = 1;
    for (u32 i = 0; i < m; ++i) total *= p;
    std::vector<u64> f(m + 1, 0);
    f[m] = 1;
    for (u128 idx = 0; idx < total; ++idx) {
      u128 rest = idx;
      for (u32 i = 0; i < m; ++i) {
        u128 place = 1;
        for (u32 j = 0; j < m - 1 - i; ++j) place *= p;
        f[i] = (u64)(rest / place);
        rest %= place;
      }
      if (detail::pf_irreducible(f, p)) return f;
    }
    fail(errc::assertion_failed, "no irreducible polynomial found");
  }

  elt scan_generator() const {
    for (elt cand = 1; cand < q(); ++cand) {
      bool ok = true;
      for (auto [r, e] : q1_factors_) {
        if (pow_any(cand, q1() / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return cand;
    }
    fail(errc::assertion_failed, "no generator found");
  }

  // pow that never consults tables (usable during construction).
  elt pow_any(elt a, u64 e) const {
    if (prime_field()) return powmod(a, e, spec_.p);
    return pow_nt(a, e);
  }

  elt mul_raw(elt a, elt b) const {
    if (a == 0 || b == 0) return 0;
    if (prime_field()) return mulmod(a, b, spec_.p);
    return mul_nt(a, b);
  }

  elt mul_nt(elt a, elt b) const {
    const u64 p = spec_.p;
    const u32 m = spec_.m;
    u64 da[64], db[64], prod[127] = {0};
    for (u32 i = 0; i < m; ++i) {
      da[i] = a % p;
      a /= p;
      db[i] = b % p;
      b /= p;
    }
    for (u32 i = 0; i < m; ++i) {
      if (!da[i]) continue;
      for (u32 j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    }
    for (u32 d = 2 * m - 2; d >= m && d < 127; --d) {
      u64 c = prod[d];
      if (c) {
        prod[d] = 0;
        for (u32 j = 0; j < m; ++j) {
          if (!mod_[j]) continue;
          u64 sub = mulmod(c, mod_[j], p);
          prod[d - m + j] = (prod[d - m + j] + p - sub) % p;
        }
      }
      if (d == m) break;
    }
    elt r = 0;
    for (u32 i = m; i-- > 0;) r = r * p + prod[i];
    return r;
  }

  elt pow_nt(elt a, u64 e) const {
    elt r = 1;
    while (e) {
      if (e & 1) r = mul_raw(r, a);
      a = mul_raw(a, a);
      e >>= 1;
    }
    return r;
  }

  void build_tables() {
    exp_.assign(q1(), 0);
    log_.assign(q(), 0);
    elt acc = 1;
    for (u64 i = 0; i < q1(); ++i) {
      exp_[i] = (u32)acc;
      log_[acc] = (u32)i;
      acc = mul_raw(acc, gen_);
    }
    check(acc == 1, "generator order != q-1 while building dlog tables");
    tables_ = true;
  }

  // Baby-step giant-step discrete log for table-less fields.
  u64 dlog_bsgs(elt a) const {
    const u64 n = q1();
    u64 M = 1;
    while (M * M < n) ++M;
    std::unordered_map<elt, u64> baby;
    baby.reserve(M * 2);
    elt cur = 1;
    for (u64 j = 0; j < M; ++j) {
      baby.emplace(cur, j);
      cur = mul_raw(cur, gen_);
    }
    elt step = inv(cur);  // g^{-M}
    elt y = a;
    for (u64 i = 0; i * M <= n; ++i) {
      auto it = baby.find(y);
      if (it != baby.end()) return (i * M + it->second) % n;
      y = mul_raw(y, step);
    }
    fail(errc::assertion_failed, "bsgs: element not in the unit group");
  }

  field_spec spec_;
  std::vector<u64> mod_;
  std::vector<std::pair<u64, u32>> q1_factors_;
  elt gen_ = 0;
  std::vector<u32> exp_, log_;
  bool tables_ = false;
};

// Independent generator scan (same deterministic rule build() uses), with the
// order property verified through public arithmetic only.
inline elt find_generator(const field& F) {
  for (elt cand = 1; cand < F.q(); ++cand) {
    bool ok = true;
    for (auto [r, e] : F.unit_group_factors()) {
      if (F.pow(cand, F.q1() / r) == F.one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (auto [r, e] : F.unit_group_factors())
        check(F.pow(cand, F.q1() / r) != F.one(), "generator order check");
      return cand;
    }
  }
  fail(errc::assertion_failed, "no generator exists");
}

// --- element text format -----------------------------------------------
// Prime fields: plain decimal residue.  Extensions: base-p digits joined by
// '.'  low degree first, e.g. "2.1" = 2 + x in F_9.

inline std::string format_elt(const field& F, elt a) {
  if (F.prime_field()) return std::to_string(a);
  auto d = F.coeffs(a);
  std::string s;
  for (u32 i = 0; i < F.m(); ++i) {
    if (i) s += '.';
    s += std::to_string(d[i]);
  }
  return s;
}

inline elt parse_elt(const field& F, const std::string& tok) {
  std::vector<u64> digits;
  std::size_t pos = 0;
  while (pos <= tok.size()) {
    std::size_t dot = tok.find('.', pos);
    std::string part = tok.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    require(!part.empty() && part.find_first_not_of("0123456789") == std::string::npos,
            errc::config_invalid, "bad element token '" + tok + "'");
    digits.push_back(std::stoull(part));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (F.prime_field()) {
    require(digits.size() == 1, errc::config_invalid, "prime-field element must be one integer");
    require(digits[0] < F.p(), errc::config_invalid, "residue out of range");
    return digits[0];
  }
  require(digits.size() == F.m(), errc::config_invalid,
          "element needs " + std::to_string(F.m()) + " dotted digits");
  return F.from_coeffs(digits);
}

// --- subsets of the unit group ------------------------------------------
// Stored in discrete-log space: bit t of `bits` is the element g^t.

struct unit_set {
  bitvec bits;  // size q-1

  u64 q1() const { return bits.size(); }
  std::size_t size() const { return bits.count(); }

  static unit_set empty(const field& F) { return unit_set{bitvec(F.q1())}; }
  static unit_set all_units(const field& F) { return unit_set{bitvec::full(F.q1())}; }

  static unit_set from_dlogs(u64 q1, const std::vector<u64>& logs) {
    unit_set s{bitvec(q1)};
    for (u64 t : logs) s.bits.set(t % q1);
    return s;
  }

  static unit_set from_elements(const field& F, const std::vector<elt>& es) {
    unit_set s{bitvec(F.q1())};
    for (elt a : es) s.bits.set(F.dlog(a));
    return s;
  }

  std::vector<u64> dlogs() const {
    std::vector<u64> out;
    bits.for_each([&](std::size_t t) { out.push_back(t); });
    return out;
  }

  std::vector<elt> to_elements(const field& F) const {
    std::vector<elt> out;
    bits.for_each([&](std::size_t t) { out.push_back(F.exp_g(t)); });
    return out;
  }

  friend bool operator==(const unit_set& a, const unit_set& b) { return a.bits == b.bits; }
};

}  // namespace starset
