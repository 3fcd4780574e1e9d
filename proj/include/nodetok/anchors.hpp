#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nodetok/centrality.hpp"
#include "nodetok/graph.hpp"

namespace nodetok {

enum class AnchorStrategy { kGreedy, kDegree, kRandom, kCloseness, kEigenvector, kPageRank, kBetweenness };

std::string_view strategy_name(AnchorStrategy s);
AnchorStrategy parse_strategy(std::string_view name);
const std::vector<AnchorStrategy>& all_strategies();

struct AnchorConfig {
  Hops c = 1;
  double cr = 0.7;
  AnchorStrategy strategy = AnchorStrategy::kGreedy;
  std::uint64_t seed = 0;
  /// Fixed anchor count for non-greedy strategies.
  std::optional<std::size_t> k_override;
  centrality::PowerIterationOptions power{};

  /// Throws Error when c < 1 or cr is outside (0, 1].
  void validate() const;
};

struct AnchorSet {
  std::vector<NodeId> anchors;
  /// Sorted ascending.
  std::vector<NodeId> covered;
  double achieved_ratio = 0.0;
  /// Greedy stopped because no candidate added coverage.
  bool no_progress = false;
  AnchorConfig config;
  std::uint64_t graph_hash = 0;
  std::size_t node_count = 0;

  bool is_covered(NodeId v) const;
};

/// Stored c-hop neighborhoods of every node. Because hop distance is
/// symmetric, u is in N_c(v) iff v is in N_c(u).
class NeighborhoodCache {
 public:
  NeighborhoodCache(const Graph& g, Hops radius);
  std::span<const NodeId> operator[](NodeId v) const noexcept {
    return {members_.data() + offsets_[v], members_.data() + offsets_[v + 1]};
  }
  std::size_t size() const noexcept { return offsets_.size() - 1; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> members_;
};

/// Greedy maximum-coverage selection. Repeatedly adds the non-anchor
/// maximizing |N_c(v) \ covered| (ties to the lowest id) until
/// |covered| >= cr * |V| or the best gain is zero.
AnchorSet select_greedy(const Graph& g, const AnchorConfig& cfg);

/// Same as select_greedy, additionally recording the gain of each pick.
AnchorSet select_greedy(const Graph& g, const AnchorConfig& cfg, std::vector<std::size_t>* gains);

/// Centrality-ranked or seeded-random anchors. With k_override the first k
/// are taken; otherwise anchors are added in rank order until coverage >= cr.
AnchorSet select_baseline(const Graph& g, const AnchorConfig& cfg);

/// Dispatches on cfg.strategy.
AnchorSet select_anchors(const Graph& g, const AnchorConfig& cfg);

/// Node order a baseline strategy draws anchors from.
std::vector<NodeId> strategy_order(const Graph& g, const AnchorConfig& cfg);

struct Coverage {
  std::vector<NodeId> covered;
  double ratio = 0.0;
};

Coverage coverage(const Graph& g, std::span<const NodeId> anchors, Hops c);

}  // namespace nodetok
