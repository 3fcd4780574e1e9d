#include "nodetok/serialize.hpp"

#include <fstream>
#include <sstream>

namespace nodetok {

nlohmann::json to_json(const AnchorSet& set) {
  nlohmann::json j;
  j["anchors"] = set.anchors;
  j["c"] = set.config.c;
  j["cr_target"] = set.config.cr;
  j["cr_achieved"] = set.achieved_ratio;
  j["strategy"] = strategy_name(set.config.strategy);
  j["seed"] = set.config.seed;
  j["graph_hash"] = to_hex(set.graph_hash);
  j["node_count"] = set.node_count;
  j["covered_count"] = set.covered.size();
  j["no_progress"] = set.no_progress;
  if (set.config.k_override) j["k_override"] = *set.config.k_override;
  return j;
}

AnchorSet anchor_set_from_json(const nlohmann::json& j) {
  try {
    AnchorSet s;
    s.anchors = j.at("anchors").get<std::vector<NodeId>>();
    s.config.c = j.at("c").get<Hops>();
    s.config.cr = j.at("cr_target").get<double>();
    s.achieved_ratio = j.at("cr_achieved").get<double>();
    s.config.strategy = parse_strategy(j.at("strategy").get<std::string>());
    s.config.seed = j.at("seed").get<std::uint64_t>();
    s.graph_hash = std::stoull(j.at("graph_hash").get<std::string>(), nullptr, 16);
    s.node_count = j.value("node_count", std::size_t{0});
    s.no_progress = j.value("no_progress", false);
    if (j.contains("k_override")) s.config.k_override = j.at("k_override").get<std::size_t>();
    return s;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(std::string("malformed anchor set JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

void save_anchor_set(const std::string& path, const AnchorSet& set) {
  write_text_file(path, to_json(set).dump(2) + "\n");
}

AnchorSet load_anchor_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open anchor file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("anchor file '" + path + "' is not valid JSON: " + e.what());
  }
  return anchor_set_from_json(j);
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"dim", cfg.dim},
          {"hidden", cfg.hidden},
          {"lr", cfg.learning_rate},
          {"epochs", cfg.epochs},
          {"quadruples_per_epoch", cfg.quadruples_per_epoch},
          {"batch_size", cfg.batch_size},
          {"seed", cfg.seed},
          {"skip_ties", cfg.skip_ties},
          {"eps_norm", cfg.eps_norm}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.dim = j.value("dim", c.dim);
  c.hidden = j.value("hidden", c.hidden);
  c.learning_rate = j.value("lr", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.quadruples_per_epoch = j.value("quadruples_per_epoch", c.quadruples_per_epoch);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.skip_ties = j.value("skip_ties", c.skip_ties);
  c.eps_norm = j.value("eps_norm", c.eps_norm);
  return c;
}

nlohmann::json to_json(const BoundReport& rep) {
  auto pairs = [](const std::vector<BoundViolation>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"u", v.u}, {"v", v.v}, {"estimate", v.estimate}, {"truth", v.truth}});
    return arr;
  };
  return {{"pairs_checked", rep.pairs_checked},
          {"covered_pairs_checked", rep.covered_pairs_checked},
          {"max_error_covered_pairs", rep.max_error_covered_pairs},
          {"max_error_all_pairs", rep.max_error_all_pairs},
          {"mean_error_covered_pairs", rep.mean_error_covered_pairs},
          {"mean_error_all_pairs", rep.mean_error_all_pairs},
          {"error_histogram", rep.error_histogram},
          {"uncovered_nodes", rep.uncovered_nodes},
          {"both_uncovered_pairs", rep.both_uncovered_pairs},
          {"total_ordered_pairs", rep.total_ordered_pairs},
          {"fraction_both_uncovered", rep.fraction_both_uncovered},
          {"bound_2c", rep.bound_2c},
          {"underestimates", pairs(rep.underestimates)},
          {"violations", pairs(rep.violations)}};
}

void save_encoding(const std::string& path, const AnchorEncoding& enc, const AnchorSet& anchors,
                   const std::string& created) {
  ntpe::Meta m;
  m.kind = ntpe::Kind::kDistance;
  m.graph_hash = enc.graph_hash();
  m.anchors.assign(enc.anchor_ids().begin(), enc.anchor_ids().end());
  m.c = anchors.config.c;
  m.cr = anchors.config.cr;
  m.strategy = std::string(strategy_name(anchors.config.strategy));
  m.seed = anchors.config.seed;
  m.created = created;
  m.extra["cr_achieved"] = anchors.achieved_ratio;
  ntpe::write_u32(path, enc.node_count(), enc.anchor_count(), enc.values(), std::move(m));
}

LoadedEncoding load_encoding(const std::string& path) {
  auto c = ntpe::read(path);
  if (c.header.kind != ntpe::Kind::kDistance) {
    throw ntpe::NtpeError(ntpe::ErrorCode::kKindMismatch, "'" + path + "' holds an embedding, expected distances");
  }
  if (c.meta.anchors.size() != c.header.cols) {
    throw ntpe::NtpeError(ntpe::ErrorCode::kSidecarMismatch,
                          "sidecar lists " + std::to_string(c.meta.anchors.size()) + " anchors for " +
                              std::to_string(c.header.cols) + " columns");
  }
  LoadedEncoding out{AnchorEncoding(c.header.rows, c.meta.anchors, std::move(c.u32), c.meta.graph_hash), c.meta};
  return out;
}

void save_embedding(const std::string& path, const EmbeddingMatrix& emb, const ntpe::Meta& encoding_meta,
                    const std::string& created) {
  ntpe::Meta m = encoding_meta;
  m.kind = ntpe::Kind::kEmbedding;
  m.graph_hash = emb.graph_hash;
  m.created = created;
  m.extra = nlohmann::json::object();
  if (encoding_meta.extra.contains("cr_achieved")) m.extra["cr_achieved"] = encoding_meta.extra["cr_achieved"];
  m.extra["anchor_hash"] = to_hex(emb.anchor_hash);
  m.extra["train"] = to_json(emb.config);
  std::vector<float> values(emb.values.data().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(emb.values.data()[i]);
  ntpe::write_f32(path, emb.node_count(), emb.dim(), values, std::move(m));
}

LoadedEmbedding load_embedding(const std::string& path) {
  auto c = ntpe::read(path);
  if (c.header.kind != ntpe::Kind::kEmbedding) {
    throw ntpe::NtpeError(ntpe::ErrorCode::kKindMismatch, "'" + path + "' holds distances, expected an embedding");
  }
  LoadedEmbedding out;
  std::vector<double> values(c.f32.begin(), c.f32.end());
  out.embedding.values = Matrix(c.header.rows, c.header.cols, std::move(values));
  out.embedding.graph_hash = c.meta.graph_hash;
  if (c.meta.extra.contains("anchor_hash")) {
    out.embedding.anchor_hash = std::stoull(c.meta.extra["anchor_hash"].get<std::string>(), nullptr, 16);
  }
  if (c.meta.extra.contains("train")) out.embedding.config = train_config_from_json(c.meta.extra["train"]);
  out.meta = std::move(c.meta);
  return out;
}

}  // namespace nodetok
