#ifndef HODT_COMBINATORICS_HPP
#define HODT_COMBINATORICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hodt {

/// What to do when a binomial coefficient exceeds 64-bit range.
enum class Overflow { kThrow, kSaturate };

/// Sentinel returned by the saturating mode.
inline constexpr std::int64_t kSaturated = INT64_MAX;

/// Exact binomial coefficient C(n, k); 0 when k > n.
std::int64_t binomial(std::int64_t n, std::int64_t k, Overflow mode = Overflow::kThrow);

/// Colexicographic rank of a sorted combination c0 < c1 < ... < c[k-1]:
/// rank = sum_i C(c_i, i+1). Unsorted input is a contract violation.
std::int64_t colex_rank(std::span<const int> comb);

/// Inverse of colex_rank (greedy largest-element-first decoding).
std::vector<int> colex_unrank(std::int64_t rank, int k);

/// Advance a sorted k-combination of {0..n-1} to its colex successor.
/// Returns false when comb was the last one.
bool next_colex_combination(std::span<int> comb, int n);

/// Streaming generator of all G-combinations in the incremental per-point
/// order: processing point n appends exactly the combinations whose maximum
/// element is n, which occupy colex ranks [C(n,G), C(n+1,G)).
///
/// css() exposes the internal per-size combination lists; levels below G keep
/// the reverse/append discipline of the generator so runs are reproducible.
class CombStream {
 public:
  explicit CombStream(int g);

  int inner_size() const { return g_; }
  int next_point() const { return next_; }

  /// Process the next point. Returns the block of new size-G combinations
  /// created by this step (in the stream's storage order; their colex ranks
  /// cover [C(n,G), C(n+1,G)) as a set).
  std::span<const std::vector<int>> step();

  const std::vector<std::vector<std::vector<int>>>& css() const { return css_; }

 private:
  int g_;
  int next_ = 0;
  std::vector<std::vector<std::vector<int>>> css_;  // css_[j]: combinations of size j
};

/// Emit every K-combination of G-combination colex ranks over {0..n_points-1}
/// exactly once. Each emitted list is ascending. Order: outer loop over points,
/// then new ranks ascending within [C(n,G), C(n+1,G)), then extensions in the
/// tier's newest-block-first order (Alg.-5 prepend discipline).
void nested_combs(int n_points, int k_outer, int g_inner,
                  const std::function<void(std::span<const std::int64_t>)>& sink);

}  // namespace hodt

#endif
