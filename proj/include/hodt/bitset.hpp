#ifndef HODT_BITSET_HPP
#define HODT_BITSET_HPP

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace hodt {

/// Fixed-size bitset over point indices. All binary operations assume equal
/// sizes; the fused count helpers avoid temporaries on the solver hot path.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

  int size() const { return n_; }

  bool test(int i) const {
    assert(i >= 0 && i < n_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(int i) {
    assert(i >= 0 && i < n_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(int i) {
    assert(i >= 0 && i < n_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  PointSet& operator&=(const PointSet& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  PointSet& operator|=(const PointSet& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }

  bool operator==(const PointSet& o) const { return n_ == o.n_ && words_ == o.words_; }

  static int count_and(const PointSet& a, const PointSet& b) {
    assert(a.n_ == b.n_);
    int c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += std::popcount(a.words_[i] & b.words_[i]);
    return c;
  }
  static int count_and(const PointSet& a, const PointSet& b, const PointSet& c) {
    assert(a.n_ == b.n_ && a.n_ == c.n_);
    int r = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      r += std::popcount(a.words_[i] & b.words_[i] & c.words_[i]);
    return r;
  }

  /// Invoke fn(index) for every set bit, ascending.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        int b = std::countr_zero(w);
        fn(static_cast<int>(wi * 64 + b));
        w &= w - 1;
      }
    }
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hodt

#endif
