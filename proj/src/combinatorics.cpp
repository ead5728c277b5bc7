#include "hodt/combinatorics.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "hodt/common.hpp"

namespace hodt {

std::int64_t binomial(std::int64_t n, std::int64_t k, Overflow mode) {
  if (n < 0 || k < 0) throw InvalidParams("binomial: negative argument");
  if (k > n) return 0;
  k = std::min(k, n - k);
  // multiplicative formula; each partial product C(n-k+i, i) is integral
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    __int128 t = static_cast<__int128>(r) * (n - k + i);
    t /= i;
    if (t > kSaturated) {
      if (mode == Overflow::kSaturate) return kSaturated;
      throw std::overflow_error("binomial: result exceeds 64-bit range");
    }
    r = static_cast<std::int64_t>(t);
  }
  return r;
}

std::int64_t colex_rank(std::span<const int> comb) {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < comb.size(); ++i) {
    if (i > 0 && comb[i] <= comb[i - 1])
      throw InvalidParams("colex_rank: combination must be sorted and distinct");
    r += binomial(comb[i], static_cast<std::int64_t>(i) + 1);
  }
  return r;
}

std::vector<int> colex_unrank(std::int64_t rank, int k) {
  if (rank < 0 || k < 0) throw InvalidParams("colex_unrank: negative argument");
  std::vector<int> comb(k);
  for (int i = k; i >= 1; --i) {
    // largest c with C(c, i) <= rank
    int lo = i - 1, hi = i;  // C(i-1, i) = 0 <= rank always
    while (binomial(hi, i, Overflow::kSaturate) <= rank) {
      lo = hi;
      hi *= 2;
    }
    while (lo + 1 < hi) {
      int mid = lo + (hi - lo) / 2;
      if (binomial(mid, i, Overflow::kSaturate) <= rank)
        lo = mid;
      else
        hi = mid;
    }
    comb[i - 1] = lo;
    rank -= binomial(lo, i);
  }
  return comb;
}

bool next_colex_combination(std::span<int> comb, int n) {
  int k = static_cast<int>(comb.size());
  // find the lowest element that can move up without colliding
  for (int i = 0; i < k; ++i) {
    int limit = (i + 1 < k) ? comb[i + 1] : n;
    if (comb[i] + 1 < limit) {
      ++comb[i];
      for (int j = 0; j < i; ++j) comb[j] = j;
      return true;
    }
  }
  return false;
}

CombStream::CombStream(int g) : g_(g) {
  if (g < 1) throw InvalidParams("CombStream: inner size must be >= 1");
  css_.resize(g + 1);
  css_[0].push_back({});  // the single empty combination
}

std::span<const std::vector<int>> CombStream::step() {
  int n = next_++;
  int jmax = std::min(g_, n + 1);
  std::size_t g_before = css_[g_].size();
  for (int j = jmax; j >= 1; --j) {
    auto& lower = css_[j - 1];
    std::vector<std::vector<int>> updates;
    updates.reserve(lower.size());
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) {
      std::vector<int> ext = *it;
      ext.push_back(n);
      updates.push_back(std::move(ext));
    }
    auto& level = css_[j];
    level.insert(level.end(), std::make_move_iterator(updates.begin()),
                 std::make_move_iterator(updates.end()));
  }
  return {css_[g_].data() + g_before, css_[g_].size() - g_before};
}

namespace {

// Rank tiers with the Alg.-5 block discipline: blocks stored oldest to newest,
// iterated newest block first, each block in creation order.
class RankTier {
 public:
  explicit RankTier(int k) : k_(k) {}

  std::size_t total() const { return k_ ? flat_.size() / k_ : 0; }

  void push_block(std::vector<std::int64_t> block_flat) {
    if (block_flat.empty()) return;
    block_starts_.push_back(flat_.size());
    flat_.insert(flat_.end(), block_flat.begin(), block_flat.end());
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t b = block_starts_.size(); b-- > 0;) {
      std::size_t begin = block_starts_[b];
      std::size_t end = (b + 1 < block_starts_.size()) ? block_starts_[b + 1] : flat_.size();
      for (std::size_t p = begin; p + k_ <= end; p += k_)
        fn(std::span<const std::int64_t>(flat_.data() + p, k_));
    }
  }

 private:
  int k_;
  std::vector<std::int64_t> flat_;
  std::vector<std::size_t> block_starts_;
};

}  // namespace

void nested_combs(int n_points, int k_outer, int g_inner,
                  const std::function<void(std::span<const std::int64_t>)>& sink) {
  if (k_outer < 1) throw InvalidParams("nested_combs: K must be >= 1");
  if (g_inner < 1) throw InvalidParams("nested_combs: G must be >= 1");
  std::vector<RankTier> tiers;
  tiers.reserve(k_outer + 1);
  for (int k = 0; k <= k_outer; ++k) tiers.emplace_back(k);

  std::vector<std::int64_t> scratch;
  for (int n = 0; n < n_points; ++n) {
    std::int64_t c1 = binomial(n, g_inner);
    std::int64_t c2 = binomial(n + 1, g_inner);
    for (std::int64_t i = c1; i < c2; ++i) {
      for (int k = k_outer; k >= 1; --k) {
        scratch.clear();
        if (k == 1) {
          scratch.push_back(i);
        } else {
          tiers[k - 1].for_each([&](std::span<const std::int64_t> cfg) {
            scratch.insert(scratch.end(), cfg.begin(), cfg.end());
            scratch.push_back(i);
          });
        }
        if (k == k_outer) {
          for (std::size_t p = 0; p + k <= scratch.size(); p += k)
            sink(std::span<const std::int64_t>(scratch.data() + p, k));
          // tier K is emitted, never stored (Alg. 2 thins it anyway)
        } else {
          tiers[k].push_block(scratch);
        }
      }
    }
  }
}

}  // namespace hodt
