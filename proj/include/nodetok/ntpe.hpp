#pragma once

// NTPE binary matrix container.
//
// Layout (all integers little-endian):
//   offset  size  field
//   0       4     magic "NTPE"
//   4       1     version (1)
//   5       1     kind: 0 = hop distances (u32), 1 = embedding (f32)
//   6       2     reserved, zero
//   8       8     rows (u64)
//   16      8     cols (u64)
//   24      ...   row-major payload, rows * cols * 4 bytes
//
// Every file has a JSON sidecar at "<file>.meta.json" with
// {kind, rows, cols, graph_hash, anchors, c, cr, strategy, seed, created}
// plus optional extra provenance fields.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodetok/error.hpp"

namespace nodetok::ntpe {

inline constexpr char kMagic[4] = {'N', 'T', 'P', 'E'};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 24;

enum class Kind : std::uint8_t { kDistance = 0, kEmbedding = 1 };

enum class ErrorCode {
  kIo = 1,
  kBadMagic,
  kBadVersion,
  kBadKind,
  kBadReserved,
  kTruncated,
  kTrailingBytes,
  kSidecarMissing,
  kSidecarMismatch,
  kKindMismatch,
};

const char* error_code_name(ErrorCode code);

class NtpeError : public Error {
 public:
  NtpeError(ErrorCode code, const std::string& what)
      : Error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Header {
  std::uint8_t version = kVersion;
  Kind kind = Kind::kDistance;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;

  std::uint64_t payload_bytes() const noexcept { return rows * cols * 4; }
};

struct Meta {
  Kind kind = Kind::kDistance;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t graph_hash = 0;
  std::vector<std::uint32_t> anchors;
  std::uint32_t c = 0;
  double cr = 0.0;
  std::string strategy;
  std::uint64_t seed = 0;
  /// ISO-8601 UTC; filled with the current time on write when empty.
  std::string created;
  /// Extra provenance merged into the sidecar object (e.g. train config).
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json meta_to_json(const Meta& m);
Meta meta_from_json(const nlohmann::json& j);

/// A file's decoded contents. Exactly one of u32 / f32 is populated.
struct Contents {
  Header header;
  Meta meta;
  std::vector<std::uint32_t> u32;
  std::vector<float> f32;
};

/// Header + payload bytes.
std::vector<std::uint8_t> encode_u32(std::uint64_t rows, std::uint64_t cols, std::span<const std::uint32_t> values);
std::vector<std::uint8_t> encode_f32(std::uint64_t rows, std::uint64_t cols, std::span<const float> values);

/// Validates magic, version, kind and reserved bytes. Does not look at the payload.
Header decode_header(std::span<const std::uint8_t> bytes);

/// Decodes a complete image (header validated before the payload is read).
Contents decode(std::span<const std::uint8_t> bytes);

std::string sidecar_path(const std::string& path);
std::string sidecar_text(const Meta& meta);

void write_u32(const std::string& path, std::uint64_t rows, std::uint64_t cols, std::span<const std::uint32_t> values,
               Meta meta);
void write_f32(const std::string& path, std::uint64_t rows, std::uint64_t cols, std::span<const float> values,
               Meta meta);

/// Reads file and sidecar; checks the sidecar's kind/rows/cols against the header.
Contents read(const std::string& path);

std::string utc_timestamp();

}  // namespace nodetok::ntpe
