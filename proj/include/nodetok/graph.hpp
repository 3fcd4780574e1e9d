#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nodetok/error.hpp"

namespace nodetok {

using NodeId = std::uint32_t;
using Hops = std::uint32_t;

/// Marks a node with no path from the source. Never participates in arithmetic.
inline constexpr Hops kUnreachable = std::numeric_limits<Hops>::max();

inline constexpr bool is_reachable(Hops d) noexcept { return d != kUnreachable; }

using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected graph in compressed adjacency form. Both arc
/// directions are stored; neighbor lists are sorted and duplicate-free and
/// contain no self-loops.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over nodes [0, node_count). Edges are symmetrized,
  /// duplicates collapsed, and self-loops dropped.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  bool empty() const noexcept { return node_count() == 0; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  /// Undirected edges with u < v in ascending order.
  std::vector<Edge> canonical_edges() const;

  /// Text form that the loader reads back into an identical graph. Carries a
  /// `# nodes: N` directive so isolated nodes survive the round trip.
  std::string canonical_edge_list() const;

  /// 64-bit FNV-1a over canonical_edge_list().
  std::uint64_t hash() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

enum class EdgeFormat { kEdgeList, kCsv };

EdgeFormat parse_edge_format(std::string_view name);

struct LoadResult {
  Graph graph;
  /// original_ids[dense] = id as written in the input.
  std::vector<std::uint64_t> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
  /// Warning lines produced during load (self-loops etc).
  std::vector<std::string> warnings;
};

/// Parses an edge list. Ids need not be contiguous; they are compacted to
/// [0, |V|) in ascending original order unless a `# nodes: N` directive is
/// present and every id already lies in [0, N).
LoadResult load_edge_list(std::string_view text, EdgeFormat format = EdgeFormat::kEdgeList);

LoadResult load_edge_list_file(const std::string& path, EdgeFormat format = EdgeFormat::kEdgeList);

using DistanceArray = std::vector<Hops>;

DistanceArray bfs_distances(const Graph& g, NodeId source);

/// Reusable BFS workspace. One instance per thread.
class BfsScratch {
 public:
  explicit BfsScratch(std::size_t node_count);
  /// Fills `dist` with hop counts from source, stopping at max_depth.
  /// Nodes beyond max_depth keep kUnreachable.
  void run(const Graph& g, NodeId source, std::span<Hops> dist, Hops max_depth = kUnreachable);
  /// Nodes reached by the last run, in BFS order.
  std::span<const NodeId> visited() const noexcept { return {queue_.data(), visited_}; }

 private:
  std::vector<NodeId> queue_;
  std::size_t visited_ = 0;
};

/// Nodes within `radius` hops of v, v included, sorted ascending.
std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, Hops radius);

/// Row-major |V| x |V| hop matrix. Intended for oracle-scale graphs
/// (|V| up to a few thousand): memory is |V|^2 * 4 bytes.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, kUnreachable) {}

  std::size_t size() const noexcept { return n_; }
  Hops operator()(std::size_t u, std::size_t v) const noexcept { return data_[u * n_ + v]; }
  std::span<Hops> row(std::size_t u) noexcept { return {data_.data() + u * n_, n_}; }
  std::span<const Hops> row(std::size_t u) const noexcept { return {data_.data() + u * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<Hops> data_;
};

DistanceMatrix all_pairs_distances(const Graph& g);

std::string to_hex(std::uint64_t value);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace nodetok
