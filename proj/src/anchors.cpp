#include "nodetok/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nodetok/parallel.hpp"

namespace nodetok {

namespace {

constexpr std::pair<AnchorStrategy, std::string_view> kStrategyNames[] = {
    {AnchorStrategy::kGreedy, "greedy"},         {AnchorStrategy::kDegree, "degree"},
    {AnchorStrategy::kRandom, "random"},         {AnchorStrategy::kCloseness, "closeness"},
    {AnchorStrategy::kEigenvector, "eigenvector"}, {AnchorStrategy::kPageRank, "pagerank"},
    {AnchorStrategy::kBetweenness, "betweenness"},
};

// Number of nodes that must be covered: ceil(cr * n), computed so that
// cr = 0.7, n = 10 asks for exactly 7.
std::size_t coverage_target(double cr, std::size_t n) {
  const double raw = cr * static_cast<double>(n);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) < 1e-9) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(raw));
}

void check_anchor_ids(const Graph& g, std::span<const NodeId> anchors) {
  for (NodeId a : anchors) {
    if (a >= g.node_count()) {
      throw Error("anchor " + std::to_string(a) + " out of range [0, " + std::to_string(g.node_count()) + ")");
    }
  }
}

}  // namespace

std::string_view strategy_name(AnchorStrategy s) {
  for (auto [k, name] : kStrategyNames) {
    if (k == s) return name;
  }
  return "unknown";
}

AnchorStrategy parse_strategy(std::string_view name) {
  for (auto [k, n] : kStrategyNames) {
    if (n == name) return k;
  }
  throw Error("unknown anchor strategy '" + std::string(name) + "'");
}

const std::vector<AnchorStrategy>& all_strategies() {
  static const std::vector<AnchorStrategy> all = [] {
    std::vector<AnchorStrategy> v;
    for (auto [k, n] : kStrategyNames) v.push_back(k);
    return v;
  }();
  return all;
}

void AnchorConfig::validate() const {
  if (c < 1) throw Error("coverage radius c must be >= 1");
  if (!(cr > 0.0 && cr <= 1.0)) throw Error("coverage ratio must lie in (0, 1], got " + std::to_string(cr));
}

bool AnchorSet::is_covered(NodeId v) const { return std::binary_search(covered.begin(), covered.end(), v); }

NeighborhoodCache::NeighborhoodCache(const Graph& g, Hops radius) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> lists(n);
  parallel_for(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    BfsScratch scratch(n);
    std::vector<Hops> dist(n);
    for (std::size_t v = begin; v < end; ++v) {
      scratch.run(g, static_cast<NodeId>(v), dist, radius);
      lists[v].assign(scratch.visited().begin(), scratch.visited().end());
    }
  });
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + lists[v].size();
  members_.reserve(offsets_.back());
  for (auto& l : lists) members_.insert(members_.end(), l.begin(), l.end());
}

AnchorSet select_greedy(const Graph& g, const AnchorConfig& cfg) { return select_greedy(g, cfg, nullptr); }

AnchorSet select_greedy(const Graph& g, const AnchorConfig& cfg, std::vector<std::size_t>* gains) {
  cfg.validate();
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("anchor selection on an empty graph");

  const NeighborhoodCache hoods(g, cfg.c);
  // gain[v] = |N_c(v) \ covered|, kept current incrementally.
  std::vector<std::size_t> gain(n);
  for (NodeId v = 0; v < n; ++v) gain[v] = hoods[v].size();
  std::vector<char> is_anchor(n, 0), is_covered(n, 0);

  AnchorSet out;
  out.config = cfg;
  out.graph_hash = g.hash();
  out.node_count = n;
  const std::size_t target = coverage_target(cfg.cr, n);
  std::size_t covered = 0;

  while (covered < target) {
    NodeId best = 0;
    std::size_t best_gain = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      if (is_anchor[v]) continue;
      if (!found || gain[v] > best_gain) {
        best = v;
        best_gain = gain[v];
        found = true;
      }
    }
    if (!found || best_gain == 0) {
      out.no_progress = true;
      break;
    }
    is_anchor[best] = 1;
    out.anchors.push_back(best);
    if (gains != nullptr) gains->push_back(best_gain);
    for (NodeId w : hoods[best]) {
      if (is_covered[w]) continue;
      is_covered[w] = 1;
      ++covered;
      for (NodeId x : hoods[w]) --gain[x];
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    if (is_covered[v]) out.covered.push_back(v);
  }
  out.achieved_ratio = static_cast<double>(covered) / static_cast<double>(n);
  return out;
}

std::vector<NodeId> strategy_order(const Graph& g, const AnchorConfig& cfg) {
  switch (cfg.strategy) {
    case AnchorStrategy::kDegree:
      return centrality::rank_descending(centrality::degree(g));
    case AnchorStrategy::kCloseness:
      return centrality::rank_descending(centrality::closeness(g));
    case AnchorStrategy::kEigenvector:
      return centrality::rank_descending(centrality::eigenvector(g, cfg.power));
    case AnchorStrategy::kPageRank:
      return centrality::rank_descending(centrality::pagerank(g, 0.85, cfg.power));
    case AnchorStrategy::kBetweenness:
      return centrality::rank_descending(centrality::betweenness(g));
    case AnchorStrategy::kRandom: {
      std::vector<NodeId> order(g.node_count());
      std::iota(order.begin(), order.end(), NodeId{0});
      std::mt19937_64 rng(cfg.seed);
      // Fisher-Yates with an explicit draw so the order does not depend on
      // the standard library's shuffle implementation.
      for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
      }
      return order;
    }
    case AnchorStrategy::kGreedy:
      break;
  }
  throw Error("strategy_order: greedy has no static order");
}

AnchorSet select_baseline(const Graph& g, const AnchorConfig& cfg) {
  cfg.validate();
  if (cfg.strategy == AnchorStrategy::kGreedy) throw Error("select_baseline called with the greedy strategy");
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("anchor selection on an empty graph");

  const auto order = strategy_order(g, cfg);
  AnchorSet out;
  out.config = cfg;
  out.graph_hash = g.hash();
  out.node_count = n;

  if (cfg.k_override) {
    const std::size_t k = std::min(*cfg.k_override, n);
    out.anchors.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    auto cov = coverage(g, out.anchors, cfg.c);
    out.covered = std::move(cov.covered);
    out.achieved_ratio = cov.ratio;
    return out;
  }

  const NeighborhoodCache hoods(g, cfg.c);
  const std::size_t target = coverage_target(cfg.cr, n);
  std::vector<char> is_covered(n, 0);
  std::size_t covered = 0;
  for (NodeId a : order) {
    if (covered >= target) break;
    out.anchors.push_back(a);
    for (NodeId w : hoods[a]) {
      if (!is_covered[w]) {
        is_covered[w] = 1;
        ++covered;
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (is_covered[v]) out.covered.push_back(v);
  }
  out.achieved_ratio = static_cast<double>(covered) / static_cast<double>(n);
  return out;
}

AnchorSet select_anchors(const Graph& g, const AnchorConfig& cfg) {
  return cfg.strategy == AnchorStrategy::kGreedy ? select_greedy(g, cfg) : select_baseline(g, cfg);
}

Coverage coverage(const Graph& g, std::span<const NodeId> anchors, Hops c) {
  check_anchor_ids(g, anchors);
  const std::size_t n = g.node_count();
  std::vector<char> mark(n, 0);
  std::vector<Hops> dist(n);
  BfsScratch scratch(n);
  for (NodeId a : anchors) {
    scratch.run(g, a, dist, c);
    for (NodeId w : scratch.visited()) mark[w] = 1;
  }
  Coverage out;
  for (NodeId v = 0; v < n; ++v) {
    if (mark[v]) out.covered.push_back(v);
  }
  out.ratio = n == 0 ? 0.0 : static_cast<double>(out.covered.size()) / static_cast<double>(n);
  return out;
}

}  // namespace nodetok
