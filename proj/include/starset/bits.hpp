#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "starset/errors.hpp"
#include "starset/numtheory.hpp"

namespace starset {

// Fixed-size bit set with cyclic rotation, the workhorse behind sumsets and
// star-set searches.  Bit i lives in word i/64; unused top bits of the last
// word are kept zero as a class invariant.
class bitvec {
 public:
  bitvec() = default;
  explicit bitvec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static bitvec full(std::size_t n) {
    bitvec v(n);
    for (auto& w : v.w_) w = ~0ull;
    v.mask_top();
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty_domain() const { return n_ == 0; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (u64 w : w_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (u64 w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bitvec& operator|=(const bitvec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  bitvec& operator&=(const bitvec& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  friend bool operator==(const bitvec& a, const bitvec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
  friend bool operator!=(const bitvec& a, const bitvec& b) { return !(a == b); }

  bool intersects(const bitvec& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool is_subset_of(const bitvec& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  // this |= rotate(src, k): bit i of src lands on bit (i + k) mod n.
  void or_rotated(const bitvec& src, std::size_t k) {
    k %= n_ ? n_ : 1;
    if (k == 0) {
      *this |= src;
      return;
    }
    or_shifted_left(src, k);        // bits [0, n-k) -> [k, n)
    or_shifted_right(src, n_ - k);  // bits [n-k, n) -> [0, k)
    mask_top();
  }

  bitvec rotated(std::size_t k) const {
    bitvec out(n_);
    out.or_rotated(*this, k);
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      u64 w = w_[wi];
      while (w) {
        f(wi * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  std::vector<u32> elements() const {
    std::vector<u32> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back((u32)i); });
    return out;
  }

  const std::vector<u64>& words() const { return w_; }

 private:
  void mask_top() {
    if (n_ & 63) w_.back() &= (~0ull) >> (64 - (n_ & 63));
  }
  // dst bit (i + k) |= src bit i, for i + k < n_ (no wrap).
  void or_shifted_left(const bitvec& src, std::size_t k) {
    std::size_t off = k >> 6, sh = k & 63;
    for (std::size_t i = src.w_.size(); i-- > 0;) {
      if (i + off >= w_.size()) continue;
      w_[i + off] |= src.w_[i] << sh;
      if (sh && i + off + 1 < w_.size()) w_[i + off + 1] |= src.w_[i] >> (64 - sh);
    }
  }
  // dst bit (i - k) |= src bit i, for i >= k.
  void or_shifted_right(const bitvec& src, std::size_t k) {
    std::size_t off = k >> 6, sh = k & 63;
    for (std::size_t i = off; i < src.w_.size(); ++i) {
      w_[i - off] |= src.w_[i] >> sh;
      if (sh && i + 1 < src.w_.size()) w_[i - off] |= src.w_[i + 1] << (64 - sh);
    }
  }

  std::size_t n_ = 0;
  std::vector<u64> w_;
};

}  // namespace starset
