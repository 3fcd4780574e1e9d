#include "nodetok/ntpe.hpp"

#include <bit>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>

#include "nodetok/graph.hpp"

namespace nodetok::ntpe {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kBadKind: return "bad-kind";
    case ErrorCode::kBadReserved: return "bad-reserved";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingBytes: return "trailing-bytes";
    case ErrorCode::kSidecarMissing: return "sidecar-missing";
    case ErrorCode::kSidecarMismatch: return "sidecar-mismatch";
    case ErrorCode::kKindMismatch: return "kind-mismatch";
  }
  return "unknown";
}

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> header_bytes(Kind kind, std::uint64_t rows, std::uint64_t cols) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + rows * cols * 4);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(0);
  out.push_back(0);
  put_le(out, rows, 8);
  put_le(out, cols, 8);
  return out;
}

void check_count(std::uint64_t rows, std::uint64_t cols, std::size_t n) {
  if (rows * cols != n) {
    throw NtpeError(ErrorCode::kSidecarMismatch, "matrix has " + std::to_string(n) + " values but shape is " +
                                                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

const char* kind_name(Kind k) { return k == Kind::kDistance ? "distance" : "embedding"; }

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NtpeError(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw NtpeError(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::vector<std::uint8_t> read_file(const std::string& path, ErrorCode missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NtpeError(missing, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> encode_u32(std::uint64_t rows, std::uint64_t cols, std::span<const std::uint32_t> values) {
  check_count(rows, cols, values.size());
  auto out = header_bytes(Kind::kDistance, rows, cols);
  for (std::uint32_t v : values) put_le(out, v, 4);
  return out;
}

std::vector<std::uint8_t> encode_f32(std::uint64_t rows, std::uint64_t cols, std::span<const float> values) {
  check_count(rows, cols, values.size());
  auto out = header_bytes(Kind::kEmbedding, rows, cols);
  for (float v : values) put_le(out, std::bit_cast<std::uint32_t>(v), 4);
  return out;
}

Header decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    throw NtpeError(ErrorCode::kTruncated, "header needs " + std::to_string(kHeaderSize) + " bytes, file has " +
                                               std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw NtpeError(ErrorCode::kBadMagic, "expected magic 'NTPE', found '" +
                                              std::string(reinterpret_cast<const char*>(bytes.data()), 4) + "'");
  }
  Header h;
  h.version = bytes[4];
  if (h.version != kVersion) {
    throw NtpeError(ErrorCode::kBadVersion, "unsupported version " + std::to_string(h.version));
  }
  if (bytes[5] > 1) throw NtpeError(ErrorCode::kBadKind, "unknown kind " + std::to_string(bytes[5]));
  h.kind = static_cast<Kind>(bytes[5]);
  if (bytes[6] != 0 || bytes[7] != 0) throw NtpeError(ErrorCode::kBadReserved, "reserved bytes must be zero");
  h.rows = get_le(bytes.data() + 8, 8);
  h.cols = get_le(bytes.data() + 16, 8);
  if (h.cols != 0 && h.rows > (std::uint64_t{1} << 60) / h.cols) {
    throw NtpeError(ErrorCode::kTruncated, "shape " + std::to_string(h.rows) + "x" + std::to_string(h.cols) +
                                               " is implausibly large");
  }
  return h;
}

Contents decode(std::span<const std::uint8_t> bytes) {
  Contents c;
  c.header = decode_header(bytes);
  const std::uint64_t expected = c.header.payload_bytes();
  const std::uint64_t actual = bytes.size() - kHeaderSize;
  if (actual < expected) {
    throw NtpeError(ErrorCode::kTruncated, "payload expected " + std::to_string(expected) + " bytes, found " +
                                               std::to_string(actual));
  }
  if (actual > expected) {
    throw NtpeError(ErrorCode::kTrailingBytes, "payload expected " + std::to_string(expected) + " bytes, found " +
                                                   std::to_string(actual));
  }
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  const std::size_t n = static_cast<std::size_t>(c.header.rows * c.header.cols);
  if (c.header.kind == Kind::kDistance) {
    c.u32.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.u32[i] = static_cast<std::uint32_t>(get_le(p + 4 * i, 4));
  } else {
    c.f32.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.f32[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(p + 4 * i, 4)));
  }
  return c;
}

nlohmann::json meta_to_json(const Meta& m) {
  nlohmann::json j = m.extra.is_object() ? m.extra : nlohmann::json::object();
  j["kind"] = static_cast<int>(m.kind);
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["graph_hash"] = to_hex(m.graph_hash);
  j["anchors"] = m.anchors;
  j["c"] = m.c;
  j["cr"] = m.cr;
  j["strategy"] = m.strategy;
  j["seed"] = m.seed;
  j["created"] = m.created;
  return j;
}

Meta meta_from_json(const nlohmann::json& j) {
  try {
    Meta m;
    const int kind = j.at("kind").get<int>();
    if (kind != 0 && kind != 1) throw NtpeError(ErrorCode::kBadKind, "sidecar kind " + std::to_string(kind));
    m.kind = static_cast<Kind>(kind);
    m.rows = j.at("rows").get<std::uint64_t>();
    m.cols = j.at("cols").get<std::uint64_t>();
    m.graph_hash = std::stoull(j.at("graph_hash").get<std::string>(), nullptr, 16);
    m.anchors = j.at("anchors").get<std::vector<std::uint32_t>>();
    m.c = j.at("c").get<std::uint32_t>();
    m.cr = j.at("cr").get<double>();
    m.strategy = j.at("strategy").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.created = j.at("created").get<std::string>();
    m.extra = j;
    for (const char* key : {"kind", "rows", "cols", "graph_hash", "anchors", "c", "cr", "strategy", "seed", "created"}) {
      m.extra.erase(key);
    }
    return m;
  } catch (const NtpeError&) {
    throw;
  } catch (const std::exception& e) {
    throw NtpeError(ErrorCode::kSidecarMismatch, std::string("malformed sidecar: ") + e.what());
  }
}

std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

std::string sidecar_text(const Meta& meta) { return meta_to_json(meta).dump(2) + "\n"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

void write_with_sidecar(const std::string& path, std::span<const std::uint8_t> bytes, Meta meta) {
  if (meta.created.empty()) meta.created = utc_timestamp();
  write_file(path, bytes);
  const std::string text = sidecar_text(meta);
  write_file(sidecar_path(path), {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace

void write_u32(const std::string& path, std::uint64_t rows, std::uint64_t cols, std::span<const std::uint32_t> values,
               Meta meta) {
  if (meta.kind != Kind::kDistance) throw NtpeError(ErrorCode::kKindMismatch, "u32 payload needs kind 0");
  meta.rows = rows;
  meta.cols = cols;
  write_with_sidecar(path, encode_u32(rows, cols, values), std::move(meta));
}

void write_f32(const std::string& path, std::uint64_t rows, std::uint64_t cols, std::span<const float> values,
               Meta meta) {
  if (meta.kind != Kind::kEmbedding) throw NtpeError(ErrorCode::kKindMismatch, "f32 payload needs kind 1");
  meta.rows = rows;
  meta.cols = cols;
  write_with_sidecar(path, encode_f32(rows, cols, values), std::move(meta));
}

Contents read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NtpeError(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes(kHeaderSize);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(kHeaderSize));
  bytes.resize(static_cast<std::size_t>(in.gcount()));
  const Header header = decode_header(bytes);
  // Header is trusted from here on; size the payload read from it.
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(in.tellg());
  if (file_size - kHeaderSize < header.payload_bytes()) {
    throw NtpeError(ErrorCode::kTruncated, "payload expected " + std::to_string(header.payload_bytes()) +
                                               " bytes, found " + std::to_string(file_size - kHeaderSize));
  }
  bytes.resize(static_cast<std::size_t>(file_size));
  in.seekg(static_cast<std::streamoff>(kHeaderSize));
  in.read(reinterpret_cast<char*>(bytes.data() + kHeaderSize), static_cast<std::streamsize>(file_size - kHeaderSize));
  if (!in) throw NtpeError(ErrorCode::kIo, "read from '" + path + "' failed");
  Contents c = decode(bytes);
  const auto side = read_file(sidecar_path(path), ErrorCode::kSidecarMissing);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(side.begin(), side.end());
  } catch (const std::exception&) {
    throw NtpeError(ErrorCode::kSidecarMismatch, "sidecar '" + sidecar_path(path) + "' is not valid JSON");
  }
  c.meta = meta_from_json(j);
  if (c.meta.kind != c.header.kind) {
    throw NtpeError(ErrorCode::kSidecarMismatch, std::string("header kind ") + kind_name(c.header.kind) +
                                                     " but sidecar kind " + kind_name(c.meta.kind));
  }
  if (c.meta.rows != c.header.rows || c.meta.cols != c.header.cols) {
    throw NtpeError(ErrorCode::kSidecarMismatch,
                    "header shape " + std::to_string(c.header.rows) + "x" + std::to_string(c.header.cols) +
                        " but sidecar shape " + std::to_string(c.meta.rows) + "x" + std::to_string(c.meta.cols));
  }
  return c;
}

}  // namespace nodetok::ntpe
