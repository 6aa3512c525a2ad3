#include "wse/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <thread>

#include "wse/align.hpp"
#include "wse/cluster.hpp"
#include "wse/errors.hpp"
#include "wse/io.hpp"
#include "wse/model.hpp"
#include "wse/predict.hpp"
#include "wse/represent.hpp"
#include "wse/theory.hpp"

namespace wse::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json chernoff_report_to_json(const ChernoffReport& report, const BlockMoments& moments) {
  json pairs = json::array();
  for (const auto& p : report.pairs)
    pairs.push_back({{"k", p.k}, {"l", p.l}, {"t_star", p.t_star}, {"value", p.value}});
  json input;
  input["B"] = matrix_to_json(moments.B);
  input["C"] = matrix_to_json(moments.C);
  return {{"C", report.C},
          {"method", report.method == ChernoffMethod::block_space ? "block_space"
                                                                  : "embedding_space"},
          {"pairs", std::move(pairs)},
          {"moments_hash", io::json_hash(input)}};
}

// Lazily-built shared state for one run.
struct Context {
  const Options& opt;
  json config;
  fs::path out_dir;
  std::uint64_t seed = 0;
  int jobs = 2;

  std::optional<BlockModel> model;
  std::vector<EdgeTransform> transforms;
  std::optional<WeightedGraph> base_graph;     // simulated or loaded
  std::optional<WeightedGraph> working_graph;  // after transforms
  std::optional<Embedding> embedding;

  explicit Context(const Options& options) : opt(options), config(options.config) {
    const json empty = json::object();
    seed = options.seed.value_or(config.value("seed", std::uint64_t{1}));
    std::string dir = !options.out_dir.empty() ? options.out_dir : config.value("out", "");
    if (dir.empty()) throw ConfigError("no output directory: set \"out\" or pass --out");
    out_dir = dir;
    fs::create_directories(out_dir);
    jobs = options.jobs > 0 ? options.jobs
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (config.contains("transforms")) {
      for (const auto& t : config.at("transforms"))
        transforms.push_back(io::transform_from_json(t));
    }
  }

  const BlockModel& require_model() {
    if (!model.has_value()) {
      if (!config.contains("model")) throw ConfigError("config has no \"model\" section");
      model = io::model_from_json(config.at("model"));
    }
    return *model;
  }

  std::size_t require_n() const {
    if (!config.contains("n")) throw ConfigError("config has no \"n\"");
    return config.at("n").get<std::size_t>();
  }

  const WeightedGraph& require_graph() {
    if (!base_graph.has_value()) {
      if (config.contains("data")) {
        const json& data = config.at("data");
        io::LoadResult loaded = io::load_edge_list(data.at("edges").get<std::string>(),
                                                   config.value("n", std::size_t{0}) > 0
                                                       ? std::optional(require_n())
                                                       : std::nullopt);
        if (data.contains("labels"))
          loaded.graph.z = io::load_labels(data.at("labels").get<std::string>());
        base_graph = std::move(loaded.graph);
      } else {
        base_graph = sample(require_model(), require_n(), seed);
      }
    }
    return *base_graph;
  }

  const WeightedGraph& require_working_graph() {
    if (!working_graph.has_value()) {
      WeightedGraph g = require_graph();
      for (const auto& t : transforms) g = transform_graph(g, t);
      working_graph = std::move(g);
    }
    return *working_graph;
  }

  std::size_t embed_dimension(const WeightedGraph& g) {
    const json embed = config.value("embed", json::object());
    if (embed.contains("d")) return embed.at("d").get<std::size_t>();
    const std::size_t max_d = embed.value("max_d", std::size_t{12});
    const EigenDecomposition ed = eig_symmetric(g.A);
    return select_dimension(ed.values, DimensionMethod::largest_gap(max_d));
  }

  const Embedding& require_embedding() {
    if (!embedding.has_value()) {
      const WeightedGraph& g = require_working_graph();
      embedding = spectral_embed(g.A, embed_dimension(g));
    }
    return *embedding;
  }

  // Block moments of the working representation. Only affine transforms
  // have a model-agnostic analytic moment map; anything else is rejected
  // for the oracle tasks that need ground truth.
  BlockMoments working_moments() {
    BlockMoments m = block_moments(require_model());
    for (const auto& t : transforms) {
      if (t.kind != EdgeTransform::Kind::affine)
        throw ConfigError(
            "this task needs analytic block moments; only affine transforms are supported in "
            "the transform chain");
      m = affine_block_moments(m, t.a, t.b);
    }
    return m;
  }

  void write_report(const std::string& task, const json& payload) {
    json wrapped = payload;
    wrapped["task"] = task;
    wrapped["seed"] = seed;
    wrapped["version"] = kVersion;
    io::save_json_file(wrapped, (out_dir / (task + ".json")).string());
  }
};

// ---- tasks -----------------------------------------------------------

json task_simulate(Context& ctx) {
  const BlockModel& model = ctx.require_model();
  const std::size_t n = ctx.require_n();
  const WeightedGraph g = sample(model, n, ctx.seed);

  const fs::path edges = ctx.out_dir / "edges.csv";
  const fs::path labels = ctx.out_dir / "labels.csv";
  io::save_edge_list(g, edges.string());
  io::save_labels(g.z, labels.string());

  const json model_json = io::model_to_json(model);
  json provenance = {{"seed", ctx.seed},
                     {"n", n},
                     {"model_hash", io::json_hash(model_json)},
                     {"config_hash", io::json_hash(ctx.config)},
                     {"version", kVersion}};
  io::save_json_file(provenance, (ctx.out_dir / "provenance.json").string());

  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.A(i, j) != 0.0) ++nonzero;

  return {{"n", n},
          {"edges", edges.string()},
          {"labels", labels.string()},
          {"rows", n * (n - 1) / 2},
          {"nonzero_weights", nonzero}};
}

json task_embed(Context& ctx) {
  const Embedding& emb = ctx.require_embedding();
  const fs::path csv = ctx.out_dir / "embedding.csv";
  const fs::path side = ctx.out_dir / "embedding_values.json";
  io::save_embedding(emb, ctx.require_graph().z, csv.string(), side.string());
  json out = {{"d", emb.dim()},      {"p", emb.p},
              {"q", emb.q},          {"values", emb.values},
              {"csv", csv.string()}, {"values_json", side.string()}};
  if (!emb.warnings.empty()) out["warnings"] = emb.warnings;
  return out;
}

struct OracleParts {
  WeightedGraph graph;  // affine-transformed sample with truth
  BlockMoments moments;
  CltParams params;
  Embedding emb_a;
  Embedding emb_p;
  OracleAlignment alignment;
};

OracleParts oracle_parts(Context& ctx) {
  const BlockModel& model = ctx.require_model();
  const BlockMoments moments = ctx.working_moments();

  WeightedGraph g = sample(model, ctx.require_n(), ctx.seed);
  for (const auto& t : ctx.transforms) g = transform_graph(g, t);

  OracleParts parts{std::move(g), moments, clt_params(moments, model.pi()), {}, {}, {}};
  const BlockEmbedding be = block_embedding(moments.B);
  const std::size_t d = be.X_B.cols();

  // Latent truth in the working representation.
  parts.graph.X = Matrix(parts.graph.n(), d);
  for (std::size_t i = 0; i < parts.graph.n(); ++i)
    for (std::size_t c = 0; c < d; ++c)
      parts.graph.X(i, c) = be.X_B(parts.graph.z[i] - 1, c);

  parts.emb_a = spectral_embed(parts.graph.A, d);
  parts.emb_p = exact_p_embedding(parts.graph.z, moments.B);
  if (parts.emb_a.p != parts.emb_p.p || parts.emb_a.q != parts.emb_p.q)
    throw NumericError(
        "sample embedding signature disagrees with the block signature; increase n or check "
        "the model");
  parts.alignment = oracle_align(parts.emb_a, parts.emb_p, parts.graph.X);
  return parts;
}

json task_align(Context& ctx) {
  OracleParts parts = oracle_parts(ctx);
  const double err = two_to_infinity(parts.alignment.aligned, parts.graph.X);

  // ||U_P^T U_A - W||_F, the Procrustes residual.
  Matrix cross = transpose_multiply(parts.emb_p.X, parts.emb_a.X);
  for (int a = 0; a < parts.emb_p.dim(); ++a)
    for (int b = 0; b < parts.emb_a.dim(); ++b)
      cross(a, b) /= std::sqrt(std::fabs(parts.emb_p.values[a]) *
                               std::fabs(parts.emb_a.values[b]));
  const double w_residual = frobenius_norm(subtract(cross, parts.alignment.w.Q));

  return {{"w_residual", w_residual},
          {"n", parts.graph.n()},
          {"d", parts.emb_a.dim()},
          {"p", parts.emb_a.p},
          {"q", parts.emb_a.q},
          {"two_to_infinity", err},
          {"Q_n", matrix_to_json(parts.alignment.q_n.Q)},
          {"W", matrix_to_json(parts.alignment.w.Q)},
          {"Q_X", matrix_to_json(parts.alignment.q_x.Q)}};
}

json task_chernoff(Context& ctx) {
  const BlockModel& model = ctx.require_model();
  const BlockMoments moments = ctx.working_moments();
  const std::string method = ctx.config.value("chernoff", json::object()).value("method", "auto");
  ChernoffReport report;
  if (method == "auto") {
    report = size_adjusted_chernoff_auto(moments, model.pi());
  } else if (method == "embedding_space") {
    report = size_adjusted_chernoff(moments, model.pi(), ChernoffMethod::embedding_space);
  } else if (method == "block_space") {
    report = size_adjusted_chernoff(moments, model.pi(), ChernoffMethod::block_space);
  } else {
    throw ConfigError("chernoff.method must be auto, embedding_space or block_space");
  }
  json out = chernoff_report_to_json(report, moments);
  io::save_json_file(out, (ctx.out_dir / "chernoff_report.json").string());
  return out;
}

json task_cluster(Context& ctx) {
  const Embedding& emb = ctx.require_embedding();
  const json section = ctx.config.value("cluster", json::object());
  const int k = section.value("K", ctx.config.contains("model") ? ctx.require_model().k() : 2);
  GmmFit fit = fit_gmm(emb.X, k, ctx.seed, section.value("tol", 1e-8),
                       section.value("max_iter", 500));
  json out = {{"K", k},
              {"weights", fit.weights},
              {"means", matrix_to_json(fit.means)},
              {"iterations", fit.loglik_trace.size()},
              {"loglik", fit.loglik_trace.empty() ? 0.0 : fit.loglik_trace.back()},
              {"converged", fit.converged},
              {"reinit_count", fit.reinit_count}};
  const WeightedGraph& g = ctx.require_graph();
  if (g.has_labels()) out["ari"] = ari(g.z, fit.hard_assignments());
  if (section.value("dump_responsibilities", false)) {
    const fs::path path = ctx.out_dir / "responsibilities.csv";
    std::ofstream resp(path);
    resp << "node";
    for (int c = 1; c <= k; ++c) resp << ",r_" << c;
    resp << '\n';
    for (std::size_t i = 0; i < fit.responsibilities.rows(); ++i) {
      resp << i;
      for (int c = 0; c < k; ++c) resp << ',' << io::format_double(fit.responsibilities(i, c));
      resp << '\n';
    }
    out["responsibilities"] = path.string();
  }
  return out;
}

json task_clt_check(Context& ctx) {
  OracleParts parts = oracle_parts(ctx);
  const auto reports =
      clt_check(parts.alignment.aligned, parts.graph.X, parts.graph.z, parts.params);
  json communities = json::array();
  for (const auto& r : reports) {
    json entry = {{"community", r.community}, {"count", r.count}, {"skipped", r.skipped}};
    if (!r.skipped) {
      entry["mean"] = r.mean;
      entry["covariance"] = matrix_to_json(r.covariance);
      entry["sigma"] = matrix_to_json(parts.params.Sigma[r.community - 1]);
      entry["rel_frobenius"] = r.rel_frobenius;
      entry["coverage95"] = r.coverage95;
    }
    communities.push_back(std::move(entry));
  }
  return {{"n", parts.graph.n()},
          {"d", parts.emb_a.dim()},
          {"communities", std::move(communities)}};
}

json task_predict(Context& ctx) {
  const json section = ctx.config.value("predict", json::object());
  WeightedGraph day0;
  WeightedGraph day1;
  if (section.contains("day0")) {
    // Shared dense id space across the two files.
    io::LoadResult l0 = io::load_edge_list(section.at("day0").get<std::string>());
    io::LoadResult l1 = io::load_edge_list(section.at("day1").get<std::string>());
    std::vector<long long> ids = l0.ids;
    for (long long id : l1.ids)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    const auto index_of = [&](long long id) {
      return static_cast<std::size_t>(
          std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    const std::size_t n = ids.size();
    day0.A = Matrix(n, n);
    day1.A = Matrix(n, n);
    for (std::size_t a = 0; a < l0.ids.size(); ++a)
      for (std::size_t b = 0; b < l0.ids.size(); ++b)
        day0.A(index_of(l0.ids[a]), index_of(l0.ids[b])) = l0.graph.A(a, b);
    for (std::size_t a = 0; a < l1.ids.size(); ++a)
      for (std::size_t b = 0; b < l1.ids.size(); ++b)
        day1.A(index_of(l1.ids[a]), index_of(l1.ids[b])) = l1.graph.A(a, b);
    io::save_id_map(ids, (ctx.out_dir / "idmap.csv").string());
  } else {
    const std::size_t n = section.value("n", std::size_t{800});
    TwoDayData data = two_day_synthetic(n, ctx.seed);
    day0 = std::move(data.day0);
    day1 = std::move(data.day1);
  }

  const std::size_t d = section.value("d", std::size_t{12});
  const WeightedGraph day0_mag = transform_graph(day0, EdgeTransform::log_magnitude());
  const Embedding emb_count = spectral_embed(day0.A, d);
  const Embedding emb_mag = spectral_embed(day0_mag.A, d);
  const auto pairs = positive_pairs(day1);
  if (pairs.size() < 2) throw NumericError("predict: day-1 network has fewer than two edges");

  const auto correlation = [&](PredictMode mode) {
    const PredictionSet set =
        evaluate_predictions(day0, day1, emb_count, emb_mag, mode, pairs);
    std::vector<double> pred(set.pairs.size()), obs(set.pairs.size());
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      pred[i] = set.pairs[i].predicted;
      obs[i] = set.pairs[i].observed;
    }
    return std::pair<double, PredictionSet>(spearman(pred, obs), set);
  };

  // Baseline: repeat the day-0 counts.
  std::vector<double> base_pred, base_obs;
  base_pred.reserve(pairs.size());
  base_obs.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    base_pred.push_back(day0.A(i, j));
    base_obs.push_back(day1.A(i, j));
  }

  json correlations;
  correlations["baseline_day0"] = spearman(base_pred, base_obs);
  const auto [rc, rc_set] = correlation(PredictMode::raw_count);
  const auto [rm, rm_set] = correlation(PredictMode::magnitude);
  const auto [hc, hc_set] = correlation(PredictMode::hybrid_count);
  const auto [hm, hm_set] = correlation(PredictMode::hybrid_magnitude);
  correlations["raw_count"] = rc;
  correlations["magnitude"] = rm;
  correlations["hybrid_count"] = hc;
  correlations["hybrid_magnitude"] = hm;

  const fs::path csv = ctx.out_dir / "predictions.csv";
  std::ofstream out(csv);
  out << "src,dst,predicted,observed\n";
  for (const auto& p : hm_set.pairs)
    out << p.i << ',' << p.j << ',' << io::format_double(p.predicted) << ','
        << io::format_double(p.observed) << '\n';

  return {{"pairs", pairs.size()},
          {"d", d},
          {"p_count", emb_count.p},
          {"q_count", emb_count.q},
          {"p_magnitude", emb_mag.p},
          {"q_magnitude", emb_mag.q},
          {"spearman", correlations},
          {"predictions_csv", csv.string()}};
}

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 0;

  double at(std::size_t i) const {
    return steps <= 1 ? min : min + (max - min) * static_cast<double>(i) / (steps - 1);
  }
};

GridSpec grid_from_json(const json& j, const char* name) {
  if (!j.is_object() || !j.contains("min") || !j.contains("max") || !j.contains("steps"))
    throw ConfigError(std::string("sweep grid ") + name + " needs {min, max, steps}");
  GridSpec g{j.at("min").get<double>(), j.at("max").get<double>(),
             j.at("steps").get<std::size_t>()};
  if (g.steps == 0) throw ConfigError(std::string("sweep grid ") + name + " is empty");
  return g;
}

// Bounded worker pool over grid cells; results land in their slot so the
// output order is the grid order regardless of scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) return;
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json task_sweep(Context& ctx) {
  if (!ctx.config.contains("sweep")) throw ConfigError("config has no \"sweep\" section");
  const json& section = ctx.config.at("sweep");
  const std::string family = section.value("family", "");
  const fs::path csv_path = ctx.out_dir / "sweep.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open for writing: " + csv_path.string());

  std::size_t rows = 0;
  if (family == "poisson_presence") {
    const GridSpec g1 = grid_from_json(section.at("lambda1"), "lambda1");
    const GridSpec g2 = grid_from_json(section.at("lambda2"), "lambda2");
    const std::vector<double> pi = {0.5, 0.5};
    struct Cell {
      double c_poisson = std::nan("");
      double c_presence = std::nan("");
      double ratio = std::nan("");
      std::string reason;
    };
    std::vector<Cell> cells(g1.steps * g2.steps);
    parallel_for(cells.size(), ctx.jobs, [&](std::size_t idx) {
      const double l1 = g1.at(idx / g2.steps);
      const double l2 = g2.at(idx % g2.steps);
      Cell& cell = cells[idx];
      if (!(l1 > 0.0) || !(l2 > 0.0)) {
        cell.reason = "rates must be positive";
        return;
      }
      const PoissonPairModels models = poisson_pair_models(l1, l2);
      cell.c_poisson = size_adjusted_chernoff_auto(models.poisson, pi).C;
      cell.c_presence = size_adjusted_chernoff_auto(models.presence, pi).C;
      if (cell.c_poisson > 0.0 && cell.c_presence > 0.0)
        cell.ratio = cell.c_poisson / cell.c_presence;
      else
        cell.reason = "zero Chernoff information on the diagonal";
    });
    csv << "lambda1,lambda2,C_poisson,C_presence,ratio,preferred,boundary,reason\n";
    for (std::size_t a = 0; a < g1.steps; ++a) {
      for (std::size_t b = 0; b < g2.steps; ++b) {
        const Cell& cell = cells[a * g2.steps + b];
        const char* preferred = std::isnan(cell.ratio) ? "none"
                                : cell.ratio > 1.0     ? "poisson"
                                                       : "presence";
        bool boundary = false;
        if (!std::isnan(cell.ratio)) {
          const auto crosses = [&](std::size_t other) {
            const double r = cells[other].ratio;
            return !std::isnan(r) && (r > 1.0) != (cell.ratio > 1.0);
          };
          if (a + 1 < g1.steps) boundary = boundary || crosses((a + 1) * g2.steps + b);
          if (b + 1 < g2.steps) boundary = boundary || crosses(a * g2.steps + b + 1);
        }
        csv << io::format_double(g1.at(a)) << ',' << io::format_double(g2.at(b)) << ','
            << io::format_double(cell.c_poisson) << ',' << io::format_double(cell.c_presence)
            << ',' << io::format_double(cell.ratio) << ',' << preferred << ','
            << (boundary ? 1 : 0) << ',' << cell.reason << '\n';
        ++rows;
      }
    }
  } else if (family == "pvalue") {
    const GridSpec ga = grid_from_json(section.at("alpha"), "alpha");
    const GridSpec gr = grid_from_json(section.at("rho"), "rho");
    const GridSpec gt = grid_from_json(section.at("tau"), "tau");
    const double pi1 = section.value("pi1", 0.2);
    struct Cell {
      double c_p = std::nan("");
      double c_l = std::nan("");
      double c_t = std::nan("");
      double tau_star = std::nan("");
      std::string preferred = "none";
      std::string reason;
    };
    std::vector<Cell> cells(ga.steps * gr.steps);
    const std::vector<double> pi = {pi1, 1.0 - pi1};
    parallel_for(cells.size(), ctx.jobs, [&](std::size_t idx) {
      const double alpha = ga.at(idx / gr.steps);
      const double rho = gr.at(idx % gr.steps);
      Cell& cell = cells[idx];
      if (!(alpha > 0.0 && alpha <= 1.0) || !(rho > 0.0 && rho < 1.0)) {
        cell.reason = "alpha in (0,1], rho in (0,1) required";
        return;
      }
      cell.c_t = -1.0;
      for (std::size_t ti = 0; ti < gt.steps; ++ti) {
        const double tau = gt.at(ti);
        if (!(tau > 0.0 && tau < 1.0)) continue;
        const PValueModels models = pvalue_models(rho, alpha, pi1, tau);
        if (ti == 0 || std::isnan(cell.c_p)) {
          cell.c_p = size_adjusted_chernoff_auto(models.p, pi).C;
          cell.c_l = size_adjusted_chernoff_auto(models.l, pi).C;
        }
        const double ct = size_adjusted_chernoff_auto(models.t, pi).C;
        if (ct > cell.c_t) {
          cell.c_t = ct;
          cell.tau_star = tau;
        }
      }
      cell.preferred = cell.c_l >= cell.c_t ? (cell.c_l >= cell.c_p ? "log" : "raw")
                                            : (cell.c_t >= cell.c_p ? "threshold" : "raw");
    });
    csv << "alpha,rho,C_P,C_L,C_T,tau_star,ratio_L_P,ratio_T_P,preferred,boundary,reason\n";
    for (std::size_t a = 0; a < ga.steps; ++a) {
      for (std::size_t r = 0; r < gr.steps; ++r) {
        const Cell& cell = cells[a * gr.steps + r];
        bool boundary = false;
        const auto differs = [&](std::size_t other) {
          return cells[other].preferred != cell.preferred;
        };
        if (a + 1 < ga.steps) boundary = boundary || differs((a + 1) * gr.steps + r);
        if (r + 1 < gr.steps) boundary = boundary || differs(a * gr.steps + r + 1);
        csv << io::format_double(ga.at(a)) << ',' << io::format_double(gr.at(r)) << ','
            << io::format_double(cell.c_p) << ',' << io::format_double(cell.c_l) << ','
            << io::format_double(cell.c_t) << ',' << io::format_double(cell.tau_star) << ','
            << io::format_double(cell.c_l / cell.c_p) << ','
            << io::format_double(cell.c_t / cell.c_p) << ',' << cell.preferred << ','
            << (boundary ? 1 : 0) << ',' << cell.reason << '\n';
        ++rows;
      }
    }
  } else {
    throw ConfigError("sweep.family must be poisson_presence or pvalue");
  }
  if (!csv) throw IoError("write failed: " + csv_path.string());
  return {{"family", family}, {"rows", rows}, {"csv", csv_path.string()}};
}

}  // namespace

RunResult run_tasks(const Options& options, const std::vector<std::string>& tasks) {
  RunResult result;
  Context ctx(options);

  json provenance = {{"version", kVersion},
                     {"seed", ctx.seed},
                     {"jobs", ctx.jobs},
                     {"config_hash", io::json_hash(ctx.config)},
                     {"tasks", tasks}};
  io::save_json_file(provenance, (ctx.out_dir / "run_provenance.json").string());

  for (const std::string& task : tasks) {
    TaskReport report;
    report.name = task;
    try {
      if (task == "simulate") {
        report.payload = task_simulate(ctx);
      } else if (task == "embed") {
        report.payload = task_embed(ctx);
      } else if (task == "align") {
        report.payload = task_align(ctx);
      } else if (task == "chernoff") {
        report.payload = task_chernoff(ctx);
      } else if (task == "cluster") {
        report.payload = task_cluster(ctx);
      } else if (task == "clt-check" || task == "clt_check") {
        report.payload = task_clt_check(ctx);
      } else if (task == "predict") {
        report.payload = task_predict(ctx);
      } else if (task == "sweep") {
        report.payload = task_sweep(ctx);
      } else {
        throw ConfigError("unknown task: " + task);
      }
      report.ok = true;
      ctx.write_report(report.name, report.payload);
    } catch (const ConfigError&) {
      throw;  // config problems abort the whole run
    } catch (const std::exception& e) {
      report.ok = false;
      report.error = e.what();
    }
    result.reports.push_back(std::move(report));
  }
  return result;
}

RunResult run_pipeline(const Options& options) {
  std::vector<std::string> tasks;
  if (options.config.contains("tasks"))
    tasks = options.config.at("tasks").get<std::vector<std::string>>();
  return run_tasks(options, tasks);
}

}  // namespace wse::pipeline
