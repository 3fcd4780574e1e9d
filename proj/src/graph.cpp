#include "nodetok/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nodetok/parallel.hpp"

namespace nodetok {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  std::vector<std::size_t> deg(node_count, 0);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw Error("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for " +
                  std::to_string(node_count) + " nodes");
    }
    if (u == v) continue;
    ++deg[u];
    ++deg[v];
  }

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  std::vector<NodeId> arcs(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    arcs[fill[u]++] = v;
    arcs[fill[v]++] = u;
  }

  // Sort and dedup each list, then compact.
  std::size_t out = 0;
  std::vector<std::size_t> offsets(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) {
    auto first = arcs.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = arcs.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) arcs[out++] = *it;
    offsets[v + 1] = out;
  }
  arcs.resize(out);
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(arcs);
  return g;
}

std::vector<Edge> Graph::canonical_edges() const {
  std::vector<Edge> edges;
  edges.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

std::string Graph::canonical_edge_list() const {
  std::string out = "# nodes: " + std::to_string(node_count()) + "\n";
  for (auto [u, v] : canonical_edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

std::uint64_t Graph::hash() const { return fnv1a64(canonical_edge_list()); }

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

EdgeFormat parse_edge_format(std::string_view name) {
  if (name == "edgelist") return EdgeFormat::kEdgeList;
  if (name == "csv") return EdgeFormat::kCsv;
  throw Error("unknown edge format '" + std::string(name) + "' (expected edgelist or csv)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_id(std::string_view tok, std::uint64_t& out) {
  tok = trim(tok);
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_fields(std::string_view line, EdgeFormat format) {
  std::vector<std::string_view> fields;
  if (format == EdgeFormat::kCsv) {
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// "# nodes: N" directive written by canonical_edge_list().
bool parse_nodes_directive(std::string_view comment, std::uint64_t& n) {
  comment = trim(comment.substr(1));
  constexpr std::string_view key = "nodes:";
  if (comment.substr(0, key.size()) != key) return false;
  return parse_id(comment.substr(key.size()), n);
}

}  // namespace

LoadResult load_edge_list(std::string_view text, EdgeFormat format) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::uint64_t declared_nodes = 0;
  bool has_declared = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_data_line = true;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::uint64_t n = 0;
      if (parse_nodes_directive(line, n)) {
        declared_nodes = n;
        has_declared = true;
      }
      continue;
    }
    const auto fields = split_fields(line, format);
    std::uint64_t u = 0, v = 0;
    const bool ok = fields.size() == 2 && parse_id(fields[0], u) && parse_id(fields[1], v);
    if (!ok) {
      // A CSV file may open with a column header such as "source,target".
      if (format == EdgeFormat::kCsv && first_data_line && fields.size() == 2) {
        first_data_line = false;
        continue;
      }
      throw ParseError(line_no, "expected two non-negative integer node ids, got '" + std::string(line) + "'");
    }
    first_data_line = false;
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw ParseError(0, "edge list contains no edges");

  LoadResult result;
  bool identity = has_declared;
  if (identity) {
    for (auto [u, v] : raw) {
      if (u >= declared_nodes || v >= declared_nodes) {
        identity = false;
        break;
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::size_t node_count = 0;
  if (identity) {
    node_count = declared_nodes;
    result.original_ids.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) result.original_ids[i] = i;
    for (auto [u, v] : raw) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  } else {
    std::vector<std::uint64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [u, v] : raw) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > std::numeric_limits<NodeId>::max() - 1) throw Error("too many nodes");
    auto dense = [&](std::uint64_t id) {
      return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    for (auto [u, v] : raw) edges.emplace_back(dense(u), dense(v));
    node_count = ids.size();
    result.original_ids = std::move(ids);
  }

  for (auto [u, v] : edges) {
    if (u == v) ++result.self_loops_dropped;
  }
  if (result.self_loops_dropped > 0) {
    result.warnings.push_back("dropped " + std::to_string(result.self_loops_dropped) + " self-loop(s)");
  }
  result.graph = Graph::from_edges(node_count, edges);
  result.duplicate_edges = raw.size() - result.self_loops_dropped - result.graph.edge_count();
  return result;
}

LoadResult load_edge_list_file(const std::string& path, EdgeFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str(), format);
}

BfsScratch::BfsScratch(std::size_t node_count) : queue_(node_count) {}

void BfsScratch::run(const Graph& g, NodeId source, std::span<Hops> dist, Hops max_depth) {
  std::fill(dist.begin(), dist.end(), kUnreachable);
  dist[source] = 0;
  queue_[0] = source;
  std::size_t head = 0, tail = 1;
  while (head < tail) {
    const NodeId u = queue_[head++];
    const Hops next = dist[u] + 1;
    if (dist[u] >= max_depth) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = next;
        queue_[tail++] = w;
      }
    }
  }
  visited_ = tail;
}

DistanceArray bfs_distances(const Graph& g, NodeId source) {
  if (source >= g.node_count()) {
    throw Error("bfs source " + std::to_string(source) + " out of range [0, " + std::to_string(g.node_count()) + ")");
  }
  DistanceArray dist(g.node_count());
  BfsScratch scratch(g.node_count());
  scratch.run(g, source, dist);
  return dist;
}

std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, Hops radius) {
  if (v >= g.node_count()) {
    throw Error("node " + std::to_string(v) + " out of range [0, " + std::to_string(g.node_count()) + ")");
  }
  if (radius < 1) throw Error("neighborhood radius must be >= 1");
  std::vector<Hops> dist(g.node_count());
  BfsScratch scratch(g.node_count());
  scratch.run(g, v, dist, radius);
  std::vector<NodeId> out(scratch.visited().begin(), scratch.visited().end());
  std::sort(out.begin(), out.end());
  return out;
}

DistanceMatrix all_pairs_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  DistanceMatrix m(n);
  parallel_for(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    BfsScratch scratch(n);
    for (std::size_t s = begin; s < end; ++s) scratch.run(g, static_cast<NodeId>(s), m.row(s));
  });
  return m;
}

}  // namespace nodetok
