#include "wse.h"

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "wse/align.hpp"
#include "wse/cluster.hpp"
#include "wse/errors.hpp"
#include "wse/io.hpp"
#include "wse/model.hpp"
#include "wse/pipeline.hpp"
#include "wse/predict.hpp"
#include "wse/represent.hpp"
#include "wse/theory.hpp"

using nlohmann::json;

struct wse_model {
  wse::BlockModel model;
};

struct wse_graph {
  wse::WeightedGraph graph;
};

struct wse_embedding {
  wse::Embedding embedding;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

wse_status status_of(const std::exception& e) {
  if (dynamic_cast<const wse::ConfigError*>(&e)) return WSE_ERROR_CONFIG;
  if (dynamic_cast<const wse::IoError*>(&e)) return WSE_ERROR_IO;
  if (dynamic_cast<const wse::NumericError*>(&e)) return WSE_ERROR_NUMERIC;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return WSE_ERROR_INVALID_ARGUMENT;
  return WSE_ERROR_NUMERIC;
}

template <typename F>
wse_status guarded(F&& body) {
  try {
    body();
    return WSE_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return status_of(e);
  } catch (...) {
    set_error("unknown error");
    return WSE_ERROR_NUMERIC;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wse_status invalid(const char* msg) {
  set_error(msg);
  return WSE_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* wse_version(void) { return "0.1.0"; }

const char* wse_last_error(void) { return g_last_error.c_str(); }

wse_status wse_model_parse(const char* json_text, wse_model** out) {
  if (json_text == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    const json j = json::parse(json_text, nullptr, true);
    *out = new wse_model{wse::io::model_from_json(j)};
  });
}

void wse_model_free(wse_model* model) { delete model; }

int wse_model_communities(const wse_model* model) {
  return model == nullptr ? 0 : model->model.k();
}

wse_status wse_model_block_moments(const wse_model* model, double* b, double* c) {
  if (model == nullptr || b == nullptr || c == nullptr) return invalid("null argument");
  return guarded([&] {
    const wse::BlockMoments m = wse::block_moments(model->model);
    const int k = model->model.k();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        b[i * k + j] = m.B(i, j);
        c[i * k + j] = m.C(i, j);
      }
  });
}

wse_status wse_graph_sample(const wse_model* model, size_t n, uint64_t seed, wse_graph** out) {
  if (model == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = new wse_graph{wse::sample(model->model, n, seed)}; });
}

wse_status wse_graph_load(const char* edges_csv, wse_graph** out) {
  if (edges_csv == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    wse::io::LoadResult loaded = wse::io::load_edge_list(edges_csv);
    *out = new wse_graph{std::move(loaded.graph)};
  });
}

wse_status wse_graph_save(const wse_graph* graph, const char* edges_csv) {
  if (graph == nullptr || edges_csv == nullptr) return invalid("null argument");
  return guarded([&] { wse::io::save_edge_list(graph->graph, edges_csv); });
}

size_t wse_graph_nodes(const wse_graph* graph) {
  return graph == nullptr ? 0 : graph->graph.n();
}

double wse_graph_weight(const wse_graph* graph, size_t i, size_t j) {
  if (graph == nullptr || i >= graph->graph.n() || j >= graph->graph.n()) return 0.0;
  return graph->graph.A(i, j);
}

wse_status wse_graph_labels(const wse_graph* graph, int* out) {
  if (graph == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    if (!graph->graph.has_labels())
      throw std::invalid_argument("graph carries no community labels");
    for (std::size_t i = 0; i < graph->graph.n(); ++i) out[i] = graph->graph.z[i];
  });
}

wse_status wse_graph_transform(const wse_graph* graph, const char* transform_json,
                               wse_graph** out) {
  if (graph == nullptr || transform_json == nullptr || out == nullptr)
    return invalid("null argument");
  return guarded([&] {
    const json j = json::parse(transform_json, nullptr, true);
    const wse::EdgeTransform t = wse::io::transform_from_json(j);
    *out = new wse_graph{wse::transform_graph(graph->graph, t)};
  });
}

void wse_graph_free(wse_graph* graph) { delete graph; }

wse_status wse_embed(const wse_graph* graph, size_t d, wse_embedding** out) {
  if (graph == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    std::size_t dim = d;
    if (dim == 0) {
      const wse::EigenDecomposition ed = wse::eig_symmetric(graph->graph.A);
      dim = wse::select_dimension(ed.values, wse::DimensionMethod::largest_gap(12));
    }
    *out = new wse_embedding{wse::spectral_embed(graph->graph.A, dim)};
  });
}

int wse_embedding_dim(const wse_embedding* emb) { return emb == nullptr ? 0 : emb->embedding.dim(); }

int wse_embedding_positive(const wse_embedding* emb) {
  return emb == nullptr ? 0 : emb->embedding.p;
}

int wse_embedding_negative(const wse_embedding* emb) {
  return emb == nullptr ? 0 : emb->embedding.q;
}

wse_status wse_embedding_coords(const wse_embedding* emb, double* out) {
  if (emb == nullptr || out == nullptr) return invalid("null argument");
  const wse::Matrix& x = emb->embedding.X;
  std::memcpy(out, x.data(), x.rows() * x.cols() * sizeof(double));
  return WSE_OK;
}

wse_status wse_embedding_values(const wse_embedding* emb, double* out) {
  if (emb == nullptr || out == nullptr) return invalid("null argument");
  for (std::size_t i = 0; i < emb->embedding.values.size(); ++i) out[i] = emb->embedding.values[i];
  return WSE_OK;
}

wse_status wse_embedding_dot(const wse_embedding* emb, size_t i, size_t j, double* out) {
  if (emb == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    *out = wse::dot_predict(emb->embedding, static_cast<int>(i), static_cast<int>(j));
  });
}

void wse_embedding_free(wse_embedding* emb) { delete emb; }

wse_status wse_chernoff_report(const wse_model* model, const char* method, char** report_json) {
  if (model == nullptr || method == nullptr || report_json == nullptr)
    return invalid("null argument");
  return guarded([&] {
    const wse::BlockMoments moments = wse::block_moments(model->model);
    const std::string m = method;
    wse::ChernoffReport report;
    if (m == "auto") {
      report = wse::size_adjusted_chernoff_auto(moments, model->model.pi());
    } else if (m == "embedding_space") {
      report = wse::size_adjusted_chernoff(moments, model->model.pi(),
                                           wse::ChernoffMethod::embedding_space);
    } else if (m == "block_space") {
      report = wse::size_adjusted_chernoff(moments, model->model.pi(),
                                           wse::ChernoffMethod::block_space);
    } else {
      throw std::invalid_argument("method must be auto, embedding_space or block_space");
    }
    json pairs = json::array();
    for (const auto& p : report.pairs)
      pairs.push_back({{"k", p.k}, {"l", p.l}, {"t_star", p.t_star}, {"value", p.value}});
    const json out = {{"C", report.C},
                      {"method", report.method == wse::ChernoffMethod::block_space
                                     ? "block_space"
                                     : "embedding_space"},
                      {"pairs", pairs}};
    *report_json = copy_string(out.dump(2));
  });
}

wse_status wse_spearman(const double* x, const double* y, size_t n, double* out) {
  if (x == nullptr || y == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] {
    *out = wse::spearman(std::span<const double>(x, n), std::span<const double>(y, n));
  });
}

wse_status wse_run_task(const char* task, const char* config_json, const char* out_dir,
                        int has_seed, uint64_t seed, int jobs, char** report_json) {
  if (task == nullptr || config_json == nullptr || report_json == nullptr)
    return invalid("null argument");
  bool failed = false;
  const wse_status status = guarded([&] {
    wse::pipeline::Options options;
    options.config = json::parse(config_json, nullptr, true);
    if (out_dir != nullptr) options.out_dir = out_dir;
    if (has_seed != 0) options.seed = seed;
    options.jobs = jobs;

    const std::string name = task;
    wse::pipeline::RunResult result = name == "run"
                                          ? wse::pipeline::run_pipeline(options)
                                          : wse::pipeline::run_tasks(options, {name});
    json reports = json::array();
    for (const auto& r : result.reports) {
      json entry = {{"task", r.name}, {"ok", r.ok}};
      if (r.ok)
        entry["report"] = r.payload;
      else
        entry["error"] = r.error;
      reports.push_back(std::move(entry));
    }
    *report_json = copy_string(json{{"ok", result.ok()}, {"reports", reports}}.dump(2));
    if (!result.ok()) {
      failed = true;
      for (const auto& r : result.reports)
        if (!r.ok) set_error(r.name + ": " + r.error);
    }
  });
  if (status != WSE_OK) return status;
  return failed ? WSE_ERROR_TASK_FAILED : WSE_OK;
}

void wse_string_free(char* str) { delete[] str; }

}  // extern "C"
