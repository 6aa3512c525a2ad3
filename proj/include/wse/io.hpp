#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wse/model.hpp"
#include "wse/represent.hpp"
#include "wse/spectral.hpp"

namespace wse::io {

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// Edge list CSV: header `src,dst,weight`, 0-indexed, upper triangle only.
void save_edge_list(const WeightedGraph& g, const std::string& path);

// Labels CSV: header `node,label`.
void save_labels(const std::vector<int>& z, const std::string& path);
std::vector<int> load_labels(const std::string& path);

struct LoadResult {
  WeightedGraph graph;
  std::vector<long long> ids;  // dense index -> original id
  std::vector<std::string> warnings;
};

// Loads an edge list; node ids are mapped densely (mapping returned in
// `ids`), duplicate pairs are summed with a warning and self-loops dropped
// with a warning count. Malformed rows fail with their line number.
LoadResult load_edge_list(const std::string& path, std::optional<std::size_t> n_hint = {});

void save_id_map(const std::vector<long long>& ids, const std::string& path);

// Embedding CSV `node,dim_1..dim_d[,label]` plus a side JSON with the
// selected eigenvalues and signature.
void save_embedding(const Embedding& emb, const std::vector<int>& labels,
                    const std::string& csv_path, const std::string& values_json_path);

nlohmann::json model_to_json(const BlockModel& model);
BlockModel model_from_json(const nlohmann::json& j);

nlohmann::json transform_to_json(const EdgeTransform& t);
EdgeTransform transform_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

// FNV-1a over a canonical dump; used for provenance hashes.
std::string json_hash(const nlohmann::json& j);

}  // namespace wse::io
