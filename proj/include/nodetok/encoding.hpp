#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nodetok/anchors.hpp"
#include "nodetok/graph.hpp"

namespace nodetok {

/// Per-node hop distances to an ordered anchor list, row-major |V| x K.
class AnchorEncoding {
 public:
  AnchorEncoding() = default;
  AnchorEncoding(std::size_t node_count, std::vector<NodeId> anchor_ids, std::vector<Hops> values,
                 std::uint64_t graph_hash);

  std::size_t node_count() const noexcept { return rows_; }
  std::size_t anchor_count() const noexcept { return anchors_.size(); }
  std::span<const NodeId> anchor_ids() const noexcept { return anchors_; }
  std::uint64_t graph_hash() const noexcept { return graph_hash_; }

  std::span<const Hops> row(NodeId v) const noexcept {
    return {values_.data() + static_cast<std::size_t>(v) * anchors_.size(), anchors_.size()};
  }
  std::span<const Hops> values() const noexcept { return values_; }

  /// min_k d_u[k] + d_v[k] over anchors reachable from both; 0 when u == v.
  Hops estimate(NodeId u, NodeId v) const;
  /// The literal min-sum, including u == v (gives 2 * nearest-anchor distance).
  Hops estimate_raw(NodeId u, NodeId v) const;
  /// Distance from v to its nearest anchor.
  Hops nearest_anchor_distance(NodeId v) const;

  bool operator==(const AnchorEncoding&) const = default;

 private:
  void check_node(NodeId v) const;

  std::size_t rows_ = 0;
  std::vector<NodeId> anchors_;
  std::vector<Hops> values_;
  std::uint64_t graph_hash_ = 0;
};

/// One BFS per anchor; columns follow anchor order.
AnchorEncoding encode_all(const Graph& g, std::span<const NodeId> anchors);
AnchorEncoding encode_all(const Graph& g, const AnchorSet& anchors);

Hops estimate_distance(const AnchorEncoding& enc, NodeId u, NodeId v);
Hops estimate_raw(const AnchorEncoding& enc, NodeId u, NodeId v);

struct BoundViolation {
  NodeId u = 0;
  NodeId v = 0;
  Hops estimate = 0;
  Hops truth = 0;
};

struct BoundReport {
  std::uint64_t pairs_checked = 0;
  /// Pairs with at least one endpoint within c hops of an anchor.
  std::uint64_t covered_pairs_checked = 0;
  Hops max_error_covered_pairs = 0;
  Hops max_error_all_pairs = 0;
  double mean_error_covered_pairs = 0.0;
  double mean_error_all_pairs = 0.0;
  /// error_histogram[e] = number of checked pairs with estimate - truth == e.
  std::vector<std::uint64_t> error_histogram;
  /// Ordered pairs (diagonal included) with both endpoints uncovered.
  std::uint64_t both_uncovered_pairs = 0;
  std::uint64_t total_ordered_pairs = 0;
  double fraction_both_uncovered = 0.0;
  std::uint64_t uncovered_nodes = 0;
  Hops bound_2c = 0;
  /// Finite estimates below the true distance; must stay empty.
  std::vector<BoundViolation> underestimates;
  std::vector<BoundViolation> violations;

  bool ok() const noexcept { return violations.empty() && underestimates.empty(); }
};

struct PairSampling {
  /// 0 checks every unordered pair; otherwise BFS runs from this many
  /// uniformly drawn sources, each checked against all targets.
  std::size_t sources = 0;
  std::uint64_t seed = 0;
};

/// Checks estimate - truth <= 2c on every checked pair that has a covered
/// endpoint, using BFS ground truth.
BoundReport verify_error_bound(const Graph& g, const AnchorEncoding& enc, const AnchorSet& anchors,
                               const PairSampling& sampling = {});

}  // namespace nodetok
