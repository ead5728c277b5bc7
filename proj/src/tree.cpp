#include "hodt/tree.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "hodt/common.hpp"

namespace hodt {

std::pair<int, int> majority_label(const PointSet& points,
                                   std::span<const PointSet> class_masks) {
  int best_label = 0, best_count = 0, total = 0;
  for (std::size_t c = 0; c < class_masks.size(); ++c) {
    int cnt = PointSet::count_and(points, class_masks[c]);
    total += cnt;
    if (cnt > best_count) {  // ties keep the smallest class id
      best_count = cnt;
      best_label = static_cast<int>(c);
    }
  }
  return {best_label, total - best_count};
}

std::vector<Split> splits(ConfigView cfg) {
  if (cfg.k > 31) throw InvalidParams("splits: K > 31 unsupported");
  std::vector<Split> out;
  for (int i = 0; i < cfg.k; ++i) {
    std::uint32_t pos = 0, neg = 0;
    bool valid = true;
    for (int j = 0; j < cfg.k && valid; ++j) {
      if (j == i) continue;
      ancestry_t a = cfg.at(i, j);
      if (a == kAncestryPos)
        pos |= 1u << j;
      else if (a == kAncestryNeg)
        neg |= 1u << j;
      else
        valid = false;
    }
    if (valid) out.push_back({i, pos, neg});
  }
  return out;
}

namespace {

constexpr int kLossUnset = -1;
constexpr int kLossNoTree = -2;

struct DpEntry {
  int loss = kLossUnset;
  int root = -1;
};

// Shared state of one sodt_rec invocation.
struct RecCtx {
  ConfigView cfg;
  const RuleTable* table;
  const LabelContext* labels;
  std::vector<const Hyperplane*> rules;  // resolved once, config-local order
  std::vector<DpEntry> memo;             // indexed by rule-subset mask

  std::uint32_t full_mask() const { return (cfg.k == 32) ? ~0u : (1u << cfg.k) - 1; }
};

// Valid-root split of `mask` at local rule i; false when some ar entry is 0.
bool split_masks(const RecCtx& ctx, std::uint32_t mask, int i, std::uint32_t& pos,
                 std::uint32_t& neg) {
  pos = neg = 0;
  std::uint32_t rest = mask & ~(1u << i);
  while (rest) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    ancestry_t a = ctx.cfg.at(i, j);
    if (a == kAncestryPos)
      pos |= 1u << j;
    else if (a == kAncestryNeg)
      neg |= 1u << j;
    else
      return false;
  }
  return true;
}

// DP over rule subsets. The point set reaching a subproblem is a function of
// the subset alone (the excluded rules' branch signs are forced by the ar
// matrix), so memoizing on the mask is sound. Empty masks are leaves and are
// evaluated inline from the passed point set.
int solve_mask(RecCtx& ctx, std::uint32_t mask, const PointSet& pts) {
  if (mask == 0) {
    return majority_label(pts, ctx.labels->class_masks).second;
  }
  DpEntry& e = ctx.memo[mask];
  if (e.loss != kLossUnset) return e.loss;

  int best = kLossNoTree, best_root = -1;
  std::uint32_t cand = mask;
  while (cand) {
    int i = std::countr_zero(cand);
    cand &= cand - 1;
    std::uint32_t pos, neg;
    if (!split_masks(ctx, mask, i, pos, neg)) continue;
    const Hyperplane& h = *ctx.rules[i];
    int lp = solve_mask(ctx, pos, pts & h.side_pos);
    if (lp == kLossNoTree) continue;
    int ln = solve_mask(ctx, neg, pts & h.side_neg);
    if (ln == kLossNoTree) continue;
    int loss = lp + ln;
    if (best == kLossNoTree || loss < best) {  // strict: first root wins ties
      best = loss;
      best_root = i;
    }
  }
  e.loss = best;
  e.root = best_root;
  return best;
}

int build_leaf(Tree& tree, const PointSet& pts, const LabelContext& labels) {
  auto [label, _] = majority_label(pts, labels.class_masks);
  tree.leaves.push_back(TreeLeaf{label, pts});
  return Tree::leaf_ref(static_cast<int>(tree.leaves.size()) - 1);
}

int rebuild(RecCtx& ctx, Tree& tree, std::uint32_t mask, const PointSet& pts) {
  if (mask == 0) return build_leaf(tree, pts, *ctx.labels);
  const DpEntry& e = ctx.memo[mask];
  assert(e.loss >= 0 && e.root >= 0);
  std::uint32_t pos, neg;
  bool ok = split_masks(ctx, mask, e.root, pos, neg);
  (void)ok;
  assert(ok);
  const Hyperplane& h = *ctx.rules[e.root];
  int node_idx = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{ctx.cfg.rules[e.root], 0, 0});
  int pc = rebuild(ctx, tree, pos, pts & h.side_pos);
  int nc = rebuild(ctx, tree, neg, pts & h.side_neg);
  tree.nodes[node_idx].pos = pc;
  tree.nodes[node_idx].neg = nc;
  return node_idx;
}

}  // namespace

std::optional<SodtResult> sodt_rec(const PointSet& data, ConfigView cfg,
                                   const RuleTable& table, const LabelContext& labels,
                                   bool build_tree) {
  if (cfg.k > 31) throw InvalidParams("sodt_rec: K > 31 unsupported");
  if (cfg.k == 0) {
    SodtResult res;
    res.loss = majority_label(data, labels.class_masks).second;
    if (build_tree) res.tree.root = build_leaf(res.tree, data, labels);
    return res;
  }

  RecCtx ctx;
  ctx.cfg = cfg;
  ctx.table = &table;
  ctx.labels = &labels;
  ctx.rules.resize(cfg.k);
  for (int i = 0; i < cfg.k; ++i) {
    ctx.rules[i] = table.find(cfg.rules[i]);
    if (ctx.rules[i] == nullptr) throw InvalidParams("sodt_rec: rule missing from table");
  }
  ctx.memo.assign(std::size_t{1} << cfg.k, DpEntry{});

  int loss = solve_mask(ctx, ctx.full_mask(), data);
  if (loss == kLossNoTree) return std::nullopt;

  SodtResult res;
  res.loss = loss;
  if (build_tree) res.tree.root = rebuild(ctx, res.tree, ctx.full_mask(), data);
  return res;
}

namespace {

// Partial tree carried through the insertion enumeration. Leaves keep their
// reached point sets and loss contributions so the running loss is O(1).
struct PartialTree {
  struct PNode {
    int rule;  // config-local
    int pos, neg;
  };
  std::vector<PNode> nodes;
  std::vector<PointSet> leaf_pts;
  std::vector<int> leaf_loss;
  int root = ~0;
  int total_loss = 0;
};

struct VecCtx {
  ConfigView cfg;
  const RuleTable* table;
  const LabelContext* labels;
  std::vector<const Hyperplane*> rules;
  const std::function<void(const Tree&, int)>* visit;
};

// Insert rule r at its unique ancestry-consistent leaf (descend following
// ar[node][r]); returns false when some ancestor has no relation to r.
bool insert_rule(const VecCtx& ctx, PartialTree& t, int r) {
  int parent = -1;  // -1: the root slot
  bool parent_pos = false;
  int ref = t.root;
  while (!Tree::is_leaf(ref)) {
    const PartialTree::PNode& nd = t.nodes[ref];
    ancestry_t a = ctx.cfg.at(nd.rule, r);
    if (a == kAncestryNone) return false;
    parent = ref;
    parent_pos = (a == kAncestryPos);
    ref = parent_pos ? nd.pos : nd.neg;
  }
  int leaf = Tree::leaf_index(ref);
  const Hyperplane& h = *ctx.rules[r];
  PointSet pos_pts = t.leaf_pts[leaf] & h.side_pos;
  PointSet neg_pts = t.leaf_pts[leaf] & h.side_neg;
  int pos_loss = majority_label(pos_pts, ctx.labels->class_masks).second;
  int neg_loss = majority_label(neg_pts, ctx.labels->class_masks).second;

  t.total_loss += pos_loss + neg_loss - t.leaf_loss[leaf];
  // reuse the displaced leaf slot for the positive side
  t.leaf_pts[leaf] = std::move(pos_pts);
  t.leaf_loss[leaf] = pos_loss;
  int neg_leaf = static_cast<int>(t.leaf_pts.size());
  t.leaf_pts.push_back(std::move(neg_pts));
  t.leaf_loss.push_back(neg_loss);

  int node_idx = static_cast<int>(t.nodes.size());
  t.nodes.push_back(PartialTree::PNode{r, Tree::leaf_ref(leaf), Tree::leaf_ref(neg_leaf)});
  if (parent < 0)
    t.root = node_idx;
  else if (parent_pos)
    t.nodes[parent].pos = node_idx;
  else
    t.nodes[parent].neg = node_idx;
  return true;
}

void emit_tree(const VecCtx& ctx, const PartialTree& t) {
  Tree out;
  out.nodes.reserve(t.nodes.size());
  for (const auto& nd : t.nodes)
    out.nodes.push_back(TreeNode{ctx.cfg.rules[nd.rule], nd.pos, nd.neg});
  out.leaves.reserve(t.leaf_pts.size());
  for (std::size_t l = 0; l < t.leaf_pts.size(); ++l) {
    int label = majority_label(t.leaf_pts[l], ctx.labels->class_masks).first;
    out.leaves.push_back(TreeLeaf{label, t.leaf_pts[l]});
  }
  out.root = t.root;
  (*ctx.visit)(out, t.total_loss);
}

void enumerate(const VecCtx& ctx, const PartialTree& t, std::uint32_t remaining) {
  if (remaining == 0) {
    emit_tree(ctx, t);
    return;
  }
  std::uint32_t cand = remaining;
  while (cand) {
    int r = std::countr_zero(cand);
    cand &= cand - 1;
    PartialTree next = t;
    if (insert_rule(ctx, next, r)) enumerate(ctx, next, remaining & ~(1u << r));
  }
}

}  // namespace

void gen_dts_vec_visit(const PointSet& data, ConfigView cfg, const RuleTable& table,
                       const LabelContext& labels,
                       const std::function<void(const Tree&, int)>& visit) {
  if (cfg.k > 31) throw InvalidParams("gen_dts_vec: K > 31 unsupported");
  VecCtx ctx;
  ctx.cfg = cfg;
  ctx.table = &table;
  ctx.labels = &labels;
  ctx.visit = &visit;
  ctx.rules.resize(cfg.k);
  for (int i = 0; i < cfg.k; ++i) {
    ctx.rules[i] = table.find(cfg.rules[i]);
    if (ctx.rules[i] == nullptr) throw InvalidParams("gen_dts_vec: rule missing from table");
  }

  PartialTree seed;
  seed.leaf_pts.push_back(data);
  seed.leaf_loss.push_back(majority_label(data, labels.class_masks).second);
  seed.total_loss = seed.leaf_loss[0];
  seed.root = Tree::leaf_ref(0);
  std::uint32_t full = (cfg.k == 0) ? 0 : (1u << cfg.k) - 1;
  enumerate(ctx, seed, full);
}

std::vector<std::pair<Tree, int>> gen_dts_vec(const PointSet& data, ConfigView cfg,
                                              const RuleTable& table,
                                              const LabelContext& labels) {
  std::vector<std::pair<Tree, int>> out;
  gen_dts_vec_visit(data, cfg, table, labels,
                    [&](const Tree& t, int loss) { out.emplace_back(t, loss); });
  return out;
}

std::optional<SodtResult> sodt_vec(const PointSet& data, ConfigView cfg,
                                   const RuleTable& table, const LabelContext& labels,
                                   bool build_tree) {
  std::optional<SodtResult> best;
  gen_dts_vec_visit(data, cfg, table, labels, [&](const Tree& t, int loss) {
    if (!best || loss < best->loss) {
      best = SodtResult{loss, build_tree ? t : Tree{}};
    }
  });
  return best;
}

int predict(const Tree& tree, const RuleTable& table, const Eigen::RowVectorXd& embedded_point,
            double side_eps_rel) {
  int ref = tree.root;
  while (!Tree::is_leaf(ref)) {
    const TreeNode& nd = tree.nodes[ref];
    const Hyperplane* h = table.find(nd.rule);
    if (h == nullptr)
      throw CorruptModel("predict: rule rank " + std::to_string(nd.rule) + " not in table");
    ref = on_positive_side(h->normal, embedded_point, side_eps_rel) ? nd.pos : nd.neg;
  }
  return tree.leaves[Tree::leaf_index(ref)].label;
}

int evaluate(const Tree& tree, const RuleTable& table, const EmbeddedDataset& data,
             std::span<const int> labels, double side_eps_rel) {
  int loss = 0;
  for (int i = 0; i < data.n(); ++i)
    if (predict(tree, table, data.points.row(i), side_eps_rel) != labels[i]) ++loss;
  return loss;
}

}  // namespace hodt
