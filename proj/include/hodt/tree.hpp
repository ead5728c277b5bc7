#ifndef HODT_TREE_HPP
#define HODT_TREE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hodt/config.hpp"

namespace hodt {

/// Binary decision tree with index-based node storage. Child references
/// encode internal nodes as nonnegative indices and leaves as ~leaf_index.
struct TreeNode {
  std::int64_t rule = -1;  // rank into the rule table
  int pos = 0;             // child taken when w.(x,1) >= -eps
  int neg = 0;
};

struct TreeLeaf {
  int label = 0;
  PointSet reached;  // training points routed here
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<TreeLeaf> leaves;
  int root = ~0;  // encoded reference

  static constexpr bool is_leaf(int ref) { return ref < 0; }
  static constexpr int leaf_index(int ref) { return ~ref; }
  static constexpr int leaf_ref(int idx) { return ~idx; }

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Per-dataset label info shared by the solvers.
struct LabelContext {
  std::span<const PointSet> class_masks;
  int num_classes = 0;
};

/// Majority label and 0-1 loss contribution of a leaf; empty -> (0, 0),
/// ties -> smallest class id.
std::pair<int, int> majority_label(const PointSet& points,
                                   std::span<const PointSet> class_masks);

/// One valid root choice: rule index (config-local) plus bitmasks of the rules
/// routed to its positive/negative subtree.
struct Split {
  int root = 0;
  std::uint32_t pos_mask = 0;
  std::uint32_t neg_mask = 0;
};

/// Valid roots of a configuration: r_i is valid iff ar[i][j] != 0 for every
/// j != i. May be empty even for configurations free of crossed pairs
/// (asymmetric ancestry cycles); such configurations admit no proper tree.
std::vector<Split> splits(ConfigView cfg);

struct SodtResult {
  int loss = 0;
  Tree tree;
};

/// Minimum-0-1-loss proper tree using all rules of the configuration exactly
/// once (DP over rule subsets, min fused into the recursion). Ties broken by
/// root order. nullopt when the configuration admits no proper tree.
/// build_tree=false skips tree materialization (loss only).
std::optional<SodtResult> sodt_rec(const PointSet& data, ConfigView cfg,
                                   const RuleTable& table, const LabelContext& labels,
                                   bool build_tree = true);

/// Enumerate every proper tree over the configuration (one output per valid
/// rule-insertion sequence; duplicates across sequences are kept, so the list
/// length is at most K!).
void gen_dts_vec_visit(const PointSet& data, ConfigView cfg, const RuleTable& table,
                       const LabelContext& labels,
                       const std::function<void(const Tree&, int loss)>& visit);

std::vector<std::pair<Tree, int>> gen_dts_vec(const PointSet& data, ConfigView cfg,
                                              const RuleTable& table,
                                              const LabelContext& labels);

/// Two-phase solver: min over gen_dts_vec, ties broken by generation order.
std::optional<SodtResult> sodt_vec(const PointSet& data, ConfigView cfg,
                                   const RuleTable& table, const LabelContext& labels,
                                   bool build_tree = true);

/// Route one embedded point; throws CorruptModel on unknown rule ranks.
int predict(const Tree& tree, const RuleTable& table, const Eigen::RowVectorXd& embedded_point,
            double side_eps_rel = 1e-9);

/// 0-1 loss of the tree on an embedded dataset.
int evaluate(const Tree& tree, const RuleTable& table, const EmbeddedDataset& data,
             std::span<const int> labels, double side_eps_rel = 1e-9);

}  // namespace hodt

#endif
