#ifndef HODT_GEOMETRY_HPP
#define HODT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hodt/bitset.hpp"
#include "hodt/dataset.hpp"

namespace hodt {

/// Ancestry relation value: +1 (all of h_j's defining points on h_i's positive
/// side), -1 (all on the negative side), 0 (straddling).
using ancestry_t = std::int8_t;
inline constexpr ancestry_t kAncestryPos = 1;
inline constexpr ancestry_t kAncestryNeg = -1;
inline constexpr ancestry_t kAncestryNone = 0;

struct FitOptions {
  /// On-hyperplane tolerance, relative to the magnitude of the w.x terms.
  /// Points with |w.x| within tolerance land on the positive side, so defining
  /// points (and shared defining points) are unambiguously positive.
  double side_eps_rel = 1e-9;
  /// Residual gate on defining points after normalization; combinations
  /// failing it are treated as degenerate.
  double residual_rel = 1e-7;
};

/// A splitting rule: hyperplane through G defining points of the embedded
/// dataset. normal has G+1 entries (last is the bias), unit Euclidean length,
/// first nonzero coordinate positive.
struct Hyperplane {
  std::int64_t rank = -1;
  std::vector<int> defining;
  Eigen::VectorXd normal;
  PointSet side_pos, side_neg;
};

/// Signed value w.(x,1) for an embedded point.
double side_value(const Eigen::VectorXd& normal, const Eigen::RowVectorXd& point);

/// Scale-aware positivity test: w.(x,1) >= -eps_rel * sum_i |w_i x_i|.
bool on_positive_side(const Eigen::VectorXd& normal, const Eigen::RowVectorXd& point,
                      double eps_rel);

/// Fit the hyperplane through the given G embedded points and classify every
/// dataset point. Returns nullopt when the points are not in general position
/// (nullspace dimension != 1) or the residual gate fails.
std::optional<Hyperplane> fit_hyperplane(const EmbeddedDataset& embedded,
                                         std::span<const int> defining,
                                         const FitOptions& opts = {});

/// Crossed predicate (both defining sets straddle the other hyperplane).
bool crossed(const Hyperplane& hi, const Hyperplane& hj);

/// Ancestry of h_j relative to h_i.
ancestry_t ancestry(const Hyperplane& hi, const Hyperplane& hj);

/// Rank-indexed store of fitted rules. Degenerate ranks are remembered so the
/// generators can skip (and count) them. With a dense bound the lookup is a
/// flat array; otherwise a hash map.
class RuleTable {
 public:
  RuleTable() = default;
  /// dense_bound: total number of ranks (C(N,G)) when known and modest.
  explicit RuleTable(std::int64_t dense_bound);

  void add(Hyperplane h);
  void mark_degenerate(std::int64_t rank);

  /// nullptr when the rank is absent or degenerate.
  const Hyperplane* find(std::int64_t rank) const;
  bool is_degenerate(std::int64_t rank) const;
  bool contains(std::int64_t rank) const { return find(rank) != nullptr; }

  std::size_t size() const { return rules_.size(); }
  std::size_t degenerate_count() const { return degenerate_count_; }
  const std::vector<Hyperplane>& rules() const { return rules_; }

 private:
  static constexpr std::int32_t kAbsent = -1;
  static constexpr std::int32_t kDegenerate = -2;

  std::int32_t slot(std::int64_t rank) const;

  std::vector<Hyperplane> rules_;
  bool dense_ = false;
  std::vector<std::int32_t> dense_index_;
  std::unordered_map<std::int64_t, std::int32_t> sparse_index_;
  std::size_t degenerate_count_ = 0;
};

}  // namespace hodt

#endif
