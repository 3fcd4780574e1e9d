#pragma once

#include <string>

#include <json.hpp>

#include "nodetok/anchors.hpp"
#include "nodetok/encoding.hpp"
#include "nodetok/ntpe.hpp"
#include "nodetok/pretrain.hpp"

namespace nodetok {

/// {anchors, c, cr_target, cr_achieved, strategy, seed, graph_hash, ...}
nlohmann::json to_json(const AnchorSet& set);
/// The covered list is not stored; it is empty on return unless a graph is
/// used to recompute it.
AnchorSet anchor_set_from_json(const nlohmann::json& j);

void save_anchor_set(const std::string& path, const AnchorSet& set);
AnchorSet load_anchor_set(const std::string& path);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundReport& rep);

/// Writes the encoding as kind 0 with the anchor set's provenance.
void save_encoding(const std::string& path, const AnchorEncoding& enc, const AnchorSet& anchors,
                   const std::string& created = {});

struct LoadedEncoding {
  AnchorEncoding encoding;
  ntpe::Meta meta;
};
LoadedEncoding load_encoding(const std::string& path);

/// Writes the embedding as kind 1 (values rounded to 32-bit floats).
void save_embedding(const std::string& path, const EmbeddingMatrix& emb, const ntpe::Meta& encoding_meta,
                    const std::string& created = {});

struct LoadedEmbedding {
  EmbeddingMatrix embedding;
  ntpe::Meta meta;
};
LoadedEmbedding load_embedding(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace nodetok
