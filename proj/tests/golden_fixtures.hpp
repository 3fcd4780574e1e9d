#pragma once

// Fixed NTPE images checked into tests/golden/. The acceptance suite
// rebuilds them in memory and compares byte-for-byte with the files on disk.

#include <cstdint>
#include <string>
#include <vector>

#include "nodetok/encoding.hpp"
#include "nodetok/generators.hpp"
#include "nodetok/ntpe.hpp"

namespace nodetok::golden {

inline constexpr const char* kCreated = "2026-01-01T00:00:00Z";

struct Fixture {
  std::string name;
  std::vector<std::uint8_t> bytes;
  ntpe::Meta meta;
};

inline ntpe::Meta base_meta(ntpe::Kind kind, std::uint64_t rows, std::uint64_t cols, std::uint64_t graph_hash,
                            std::vector<std::uint32_t> anchors) {
  ntpe::Meta m;
  m.kind = kind;
  m.rows = rows;
  m.cols = cols;
  m.graph_hash = graph_hash;
  m.anchors = std::move(anchors);
  m.c = 1;
  m.cr = 0.7;
  m.strategy = "greedy";
  m.seed = 0;
  m.created = kCreated;
  return m;
}

/// Valid files: P5 encoding, a two-component encoding with unreachable
/// entries, and a small float matrix exercising signed zero and extremes.
inline std::vector<Fixture> valid_fixtures() {
  std::vector<Fixture> out;
  {
    const Graph g = gen::path(5);
    const std::vector<NodeId> anchors{1, 3};
    const auto enc = encode_all(g, anchors);
    out.push_back({"p5_encoding.ntpe", ntpe::encode_u32(5, 2, enc.values()),
                   base_meta(ntpe::Kind::kDistance, 5, 2, g.hash(), {1, 3})});
  }
  {
    const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    const std::vector<NodeId> anchors{0};
    const auto enc = encode_all(g, anchors);
    out.push_back({"two_components_encoding.ntpe", ntpe::encode_u32(4, 1, enc.values()),
                   base_meta(ntpe::Kind::kDistance, 4, 1, g.hash(), {0})});
  }
  {
    const std::vector<float> values{1.0f, -2.5f, 0.125f, 3.0e-8f, 65504.0f, -0.0f};
    auto meta = base_meta(ntpe::Kind::kEmbedding, 2, 3, 0x0123456789abcdefULL, {});
    out.push_back({"embedding_2x3.ntpe", ntpe::encode_f32(2, 3, values), meta});
  }
  return out;
}

/// Malformed files: bad magic, a payload one byte short, and a sidecar whose
/// row count disagrees with the header.
inline std::vector<Fixture> malformed_fixtures() {
  std::vector<Fixture> out;
  const std::vector<float> values{1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f};
  const auto good = ntpe::encode_f32(2, 3, values);
  const auto meta = base_meta(ntpe::Kind::kEmbedding, 2, 3, 0x0123456789abcdefULL, {});

  auto bad_magic = good;
  bad_magic[0] = 'X';
  out.push_back({"bad_magic.ntpe", bad_magic, meta});

  auto truncated = good;
  truncated.pop_back();
  out.push_back({"truncated.ntpe", truncated, meta});

  auto mismatch_meta = meta;
  mismatch_meta.rows = 3;
  out.push_back({"sidecar_mismatch.ntpe", good, mismatch_meta});
  return out;
}

}  // namespace nodetok::golden
