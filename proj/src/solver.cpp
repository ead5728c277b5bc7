#include "hodt/solver.hpp"

#include <algorithm>
#include <future>

#include "hodt/combinatorics.hpp"
#include "hodt/common.hpp"

namespace hodt {

namespace {

struct EvalOutcome {
  bool has_tree = false;
  int loss = 0;
  std::int64_t trees_seen = 0;  // trees whose loss was computed
};

EvalOutcome eval_config(ConfigView cfg, Backend backend, const PointSet& all_points,
                        const RuleTable& table, const LabelContext& labels) {
  EvalOutcome out;
  if (backend == Backend::kRec) {
    auto res = sodt_rec(all_points, cfg, table, labels, /*build_tree=*/false);
    if (res) {
      out.has_tree = true;
      out.loss = res->loss;
      out.trees_seen = 1;
    }
  } else {
    std::optional<int> best;
    gen_dts_vec_visit(all_points, cfg, table, labels, [&](const Tree&, int loss) {
      ++out.trees_seen;
      if (!best || loss < *best) best = loss;
    });
    if (best) {
      out.has_tree = true;
      out.loss = *best;
    }
  }
  return out;
}

// One reduction window of tier-K configurations awaiting evaluation.
struct EvalWindow {
  ConfigBatch batch;
  std::int64_t base_stream_index = 0;

  explicit EvalWindow(int k) : batch(k) {}
};

struct Incumbent {
  bool set = false;
  int loss = 0;
  std::int64_t stream_index = 0;
  Config config;
};

struct ChunkResult {
  bool set = false;
  int loss = 0;
  std::int64_t stream_index = 0;
  std::size_t local_index = 0;
  std::int64_t trees = 0;
  std::int64_t no_tree = 0;
};

ChunkResult eval_chunk(const EvalWindow& win, std::size_t lo, std::size_t hi, Backend backend,
                       const PointSet& all_points, const RuleTable& table,
                       const LabelContext& labels) {
  ChunkResult r;
  for (std::size_t c = lo; c < hi; ++c) {
    EvalOutcome o = eval_config(win.batch.at(c), backend, all_points, table, labels);
    r.trees += o.trees_seen;
    if (!o.has_tree) {
      ++r.no_tree;
      continue;
    }
    std::int64_t idx = win.base_stream_index + static_cast<std::int64_t>(c);
    if (!r.set || o.loss < r.loss || (o.loss == r.loss && idx < r.stream_index)) {
      r.set = true;
      r.loss = o.loss;
      r.stream_index = idx;
      r.local_index = c;
    }
  }
  return r;
}

void flush_window(EvalWindow& win, const SolverOptions& opts, const PointSet& all_points,
                  const RuleTable& table, const LabelContext& labels, Incumbent& best,
                  SearchStats& stats) {
  std::size_t n = win.batch.size();
  if (n == 0) return;
  stats.configs_evaluated += static_cast<std::int64_t>(n);

  std::vector<ChunkResult> results;
  int threads = std::max(1, opts.threads);
  if (threads == 1 || n < 2) {
    results.push_back(eval_chunk(win, 0, n, opts.backend, all_points, table, labels));
  } else {
    std::size_t chunks = std::min<std::size_t>(threads, n);
    std::size_t per = (n + chunks - 1) / chunks;
    std::vector<std::future<ChunkResult>> futs;
    for (std::size_t c = 0; c < chunks; ++c) {
      std::size_t lo = c * per, hi = std::min(n, lo + per);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, [&, lo, hi] {
        return eval_chunk(win, lo, hi, opts.backend, all_points, table, labels);
      }));
    }
    for (auto& f : futs) results.push_back(f.get());
  }

  for (const auto& r : results) {
    stats.trees_evaluated += r.trees;
    stats.configs_no_tree += r.no_tree;
    if (!r.set) continue;
    if (!best.set || r.loss < best.loss ||
        (r.loss == best.loss && r.stream_index < best.stream_index)) {
      best.set = true;
      best.loss = r.loss;
      best.stream_index = r.stream_index;
      ConfigView v = win.batch.at(r.local_index);
      best.config = Config{v.k, {v.rules.begin(), v.rules.end()}, {v.ar.begin(), v.ar.end()}};
    }
  }
  win.batch = ConfigBatch(win.batch.k());
}

}  // namespace

HodtResult hodt(const Dataset& data, int k, int degree, const SolverOptions& opts) {
  if (k < 1) throw InvalidParams("hodt: K must be >= 1");
  if (k > 31) throw InvalidParams("hodt: K > 31 unsupported");
  EmbeddedDataset embedded = veronese_embed(data, degree);

  HodtResult result;
  result.degree = degree;
  result.dim_embedded = embedded.dim_embedded;

  StreamOptions sopts;
  sopts.fit = opts.fit;
  sopts.max_rule_ranks = opts.max_rule_ranks;
  FeasibleConfigStream stream(embedded, k, sopts);

  auto masks = class_masks(data);
  LabelContext labels{masks, data.num_classes};
  PointSet all_points(data.n());
  for (int i = 0; i < data.n(); ++i) all_points.set(i);

  Incumbent best;
  EvalWindow window(k);
  stream.run([&](ConfigView cfg, std::int64_t stream_index) {
    if (window.batch.size() == 0) window.base_stream_index = stream_index;
    window.batch.append(cfg);
    if (window.batch.size() >= static_cast<std::size_t>(std::max(1, opts.batch_size)))
      flush_window(window, opts, all_points, stream.rules(), labels, best, result.stats);
  });
  flush_window(window, opts, all_points, stream.rules(), labels, best, result.stats);

  const StreamStats& ss = stream.stats();
  result.stats.rules_total = ss.rules_total;
  result.stats.rules_degenerate = ss.rules_degenerate;
  result.stats.extensions = ss.extensions;
  result.stats.feasible_per_k = ss.feasible_per_k;
  result.stats.store_thinned = stream.store_was_thinned();

  result.rules = std::make_shared<RuleTable>(stream.take_rules());
  if (best.set) {
    result.has_solution = true;
    result.loss = best.loss;
    result.best_stream_index = best.stream_index;
    result.best_config = std::move(best.config);
    // re-solve the winner with tree materialization
    auto solved = (opts.backend == Backend::kRec)
                      ? sodt_rec(all_points, result.best_config.view(), *result.rules, labels)
                      : sodt_vec(all_points, result.best_config.view(), *result.rules, labels);
    if (!solved || solved->loss != best.loss)
      throw InternalError("hodt: winner re-solve mismatch");
    result.tree = std::move(solved->tree);
  }
  return result;
}

NaiveResult odt_size_naive(const Dataset& data, int k, int degree, const FitOptions& fit) {
  if (k < 1) throw InvalidParams("odt_size_naive: K must be >= 1");
  EmbeddedDataset embedded = veronese_embed(data, degree);
  const int g = embedded.dim_embedded;
  std::int64_t total_ranks = binomial(data.n(), g, Overflow::kSaturate);
  if (total_ranks == kSaturated || total_ranks > 5000)
    throw InvalidParams("odt_size_naive: instance too large for the reference composition");

  RuleTable table(total_ranks);
  for (std::int64_t r = 0; r < total_ranks; ++r) {
    auto comb = colex_unrank(r, g);
    auto h = fit_hyperplane(embedded, comb, fit);
    if (h) {
      h->rank = r;
      table.add(std::move(*h));
    } else {
      table.mark_degenerate(r);
    }
  }

  auto masks = class_masks(data);
  LabelContext labels{masks, data.num_classes};
  PointSet all_points(data.n());
  for (int i = 0; i < data.n(); ++i) all_points.set(i);

  NaiveResult out;
  if (total_ranks < k) return out;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  std::vector<std::int64_t> rules(k);
  do {
    bool usable = true;
    for (int i = 0; i < k; ++i) {
      rules[i] = comb[i];
      if (!table.contains(comb[i])) usable = false;
    }
    if (!usable) continue;
    Config cfg = cal_arm(rules, table);
    if (!is_feasible(cfg.view())) continue;
    auto res = sodt_rec(all_points, cfg.view(), table, labels, /*build_tree=*/false);
    if (!res) continue;
    if (!out.has_solution || res->loss < out.loss) {
      out.has_solution = true;
      out.loss = res->loss;
    }
  } while (next_colex_combination(comb, static_cast<int>(total_ranks)));
  return out;
}

}  // namespace hodt
