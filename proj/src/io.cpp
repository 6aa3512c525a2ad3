#include "wse/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wse/errors.hpp"

namespace wse::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

}  // namespace

void save_edge_list(const WeightedGraph& g, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "src,dst,weight\n";
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out << i << ',' << j << ',' << format_double(g.A(i, j)) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void save_labels(const std::vector<int>& z, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "node,label\n";
  for (std::size_t i = 0; i < z.size(); ++i) out << i << ',' << z[i] << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<int> z;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError(path + ": malformed row at line " + std::to_string(lineno));
    z.push_back(std::stoi(line.substr(comma + 1)));
  }
  return z;
}

LoadResult load_edge_list(const std::string& path, std::optional<std::size_t> n_hint) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");

  struct Row {
    long long src;
    long long dst;
    double w;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  std::size_t self_loops = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Row r;
    const char* begin = line.data();
    const char* end = begin + line.size();
    auto p1 = std::from_chars(begin, end, r.src);
    if (p1.ec != std::errc{} || p1.ptr == end || *p1.ptr != ',')
      throw IoError(path + ": malformed row at line " + std::to_string(lineno));
    auto p2 = std::from_chars(p1.ptr + 1, end, r.dst);
    if (p2.ec != std::errc{} || p2.ptr == end || *p2.ptr != ',')
      throw IoError(path + ": malformed row at line " + std::to_string(lineno));
    auto p3 = std::from_chars(p2.ptr + 1, end, r.w);
    if (p3.ec != std::errc{})
      throw IoError(path + ": malformed row at line " + std::to_string(lineno));
    if (r.src == r.dst) {
      ++self_loops;
      continue;
    }
    if (r.src > r.dst) std::swap(r.src, r.dst);
    rows.push_back(r);
  }

  LoadResult out;
  if (self_loops > 0)
    out.warnings.push_back(std::to_string(self_loops) + " self-loop row(s) dropped");

  std::map<long long, std::size_t> id_map;
  for (const Row& r : rows) {
    id_map.emplace(r.src, 0);
    id_map.emplace(r.dst, 0);
  }
  std::size_t next = 0;
  for (auto& [id, idx] : id_map) idx = next++;
  out.ids.resize(id_map.size());
  for (const auto& [id, idx] : id_map) out.ids[idx] = id;

  std::size_t n = id_map.size();
  if (n_hint.has_value() && *n_hint > n) n = *n_hint;
  out.graph.A = Matrix(n, n);

  std::size_t duplicates = 0;
  Matrix seen(n, n);
  for (const Row& r : rows) {
    const std::size_t i = id_map[r.src];
    const std::size_t j = id_map[r.dst];
    if (seen(i, j) != 0.0) ++duplicates;
    seen(i, j) = 1.0;
    out.graph.A(i, j) += r.w;
    out.graph.A(j, i) = out.graph.A(i, j);
  }
  if (duplicates > 0)
    out.warnings.push_back(std::to_string(duplicates) +
                           " duplicate pair(s) summed into single entries");
  return out;
}

void save_id_map(const std::vector<long long>& ids, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "index,id\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << i << ',' << ids[i] << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void save_embedding(const Embedding& emb, const std::vector<int>& labels,
                    const std::string& csv_path, const std::string& values_json_path) {
  std::ofstream out = open_out(csv_path);
  const std::size_t n = emb.X.rows();
  const std::size_t d = emb.X.cols();
  out << "node";
  for (std::size_t c = 1; c <= d; ++c) out << ",dim_" << c;
  if (!labels.empty()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << i;
    for (std::size_t c = 0; c < d; ++c) out << ',' << format_double(emb.X(i, c));
    if (!labels.empty()) out << ',' << labels[i];
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + csv_path);

  json side;
  side["values"] = emb.values;
  side["p"] = emb.p;
  side["q"] = emb.q;
  if (!emb.warnings.empty()) side["warnings"] = emb.warnings;
  save_json_file(side, values_json_path);
}

namespace {

json distribution_to_json(const WeightDistribution& dist) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Dirac>) {
          return {{"kind", "dirac"}, {"value", d.value}};
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return {{"kind", "bernoulli"}, {"p", d.p}};
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return {{"kind", "poisson"}, {"rate", d.rate}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return {{"kind", "gaussian"}, {"mean", d.mean}, {"variance", d.variance}};
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          return {{"kind", "beta"}, {"shape_a", d.shape_a}, {"shape_b", d.shape_b}};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {{"kind", "exponential"}, {"rate", d.rate}};
        } else {
          static_assert(std::is_same_v<T, ZeroInflated>);
          return {{"kind", "zero_inflated"},
                  {"present_prob", d.present_prob},
                  {"inner", distribution_to_json(*d.inner)}};
        }
      },
      dist.value());
}

WeightDistribution distribution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("distribution spec must be an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "dirac") return WeightDistribution::dirac(j.at("value").get<double>());
    if (kind == "bernoulli") return WeightDistribution::bernoulli(j.at("p").get<double>());
    if (kind == "poisson") return WeightDistribution::poisson(j.at("rate").get<double>());
    if (kind == "gaussian")
      return WeightDistribution::gaussian(j.at("mean").get<double>(),
                                          j.at("variance").get<double>());
    if (kind == "beta")
      return WeightDistribution::beta(j.at("shape_a").get<double>(),
                                      j.at("shape_b").get<double>());
    if (kind == "exponential")
      return WeightDistribution::exponential(j.at("rate").get<double>());
    if (kind == "zero_inflated")
      return WeightDistribution::zero_inflated(j.at("present_prob").get<double>(),
                                               distribution_from_json(j.at("inner")));
  } catch (const json::exception& e) {
    throw ConfigError("distribution spec \"" + kind + "\": " + e.what());
  }
  throw ConfigError("unknown distribution kind: " + kind);
}

}  // namespace

json model_to_json(const BlockModel& model) {
  json h = json::array();
  for (int a = 0; a < model.k(); ++a) {
    json row = json::array();
    for (int b = 0; b < model.k(); ++b) row.push_back(distribution_to_json(model.h(a, b)));
    h.push_back(std::move(row));
  }
  return {{"K", model.k()}, {"pi", model.pi()}, {"H", std::move(h)}};
}

BlockModel model_from_json(const json& j) {
  try {
    const int k = j.at("K").get<int>();
    auto pi = j.at("pi").get<std::vector<double>>();
    const json& h = j.at("H");
    if (static_cast<int>(pi.size()) != k || static_cast<int>(h.size()) != k)
      throw ConfigError("model: K, pi and H disagree on the community count");
    std::vector<WeightDistribution> dists;
    dists.reserve(static_cast<std::size_t>(k) * k);
    for (int a = 0; a < k; ++a) {
      if (static_cast<int>(h.at(a).size()) != k)
        throw ConfigError("model: H must be a K x K array");
      for (int b = 0; b < k; ++b) dists.push_back(distribution_from_json(h.at(a).at(b)));
    }
    return BlockModel::create(std::move(pi), std::move(dists));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

json transform_to_json(const EdgeTransform& t) {
  switch (t.kind) {
    case EdgeTransform::Kind::affine:
      return {{"kind", "affine"}, {"a", t.a}, {"b", t.b}};
    case EdgeTransform::Kind::presence_indicator:
      return {{"kind", "presence"}};
    case EdgeTransform::Kind::log_magnitude:
      return {{"kind", "log_magnitude"}};
    case EdgeTransform::Kind::pvalue_threshold:
      return {{"kind", "pvalue_threshold"}, {"tau", t.tau}};
    case EdgeTransform::Kind::pvalue_log_complement:
      return {{"kind", "pvalue_log_complement"}, {"cap", t.log_cap}};
  }
  throw ConfigError("unreachable transform kind");
}

EdgeTransform transform_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("transform spec must be an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "affine")
      return EdgeTransform::affine(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "presence") return EdgeTransform::presence_indicator();
    if (kind == "log_magnitude") return EdgeTransform::log_magnitude();
    if (kind == "pvalue_threshold")
      return EdgeTransform::pvalue_threshold(j.at("tau").get<double>());
    if (kind == "pvalue_log_complement") {
      if (j.contains("cap"))
        return EdgeTransform::pvalue_log_complement(j.at("cap").get<double>());
      return EdgeTransform::pvalue_log_complement();
    }
  } catch (const json::exception& e) {
    throw ConfigError("transform spec \"" + kind + "\": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("transform spec \"" + kind + "\": " + e.what());
  }
  throw ConfigError("unknown transform kind: " + kind);
}

json load_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::string json_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace wse::io
