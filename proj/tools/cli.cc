#include "cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "toca/errors.h"
#include "toca/evaluate.h"
#include "toca/optimize.h"
#include "toca/repetita.h"

namespace toca::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kWeightAssumption =
    "IGP weights for ECMP are taken from the weight column of the graph file";

struct Options {
  std::string topology;
  std::vector<std::string> traffic;
  std::string rho = "1/2";
  int connections = 5;
  std::string algo = "rnd,dwn,up,exact";
  std::string router;
  double time_limit = 3600;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string variant = "auto";
  std::string dump_lp;
  std::string activation;
  bool worst_case = false;
  bool unscaled = false;
  bool aggregate = false;
  std::int64_t limit = 2'000'000;
  bool cross_check = false;
  std::string dataset;
  int min_nodes = 60;
  int max_nodes = 0;
  int jobs = 1;
  int samples = 0;
};

struct NamedMatrix {
  std::string name;
  TrafficMatrix matrix;
};

struct MluRecord {
  std::string matrix;
  MluResult result;
};

struct RunRecord {
  AlgorithmRun run;
  std::string trained_on;  // empty for the oblivious variant
  std::optional<Rational> ratio;
  std::vector<MluRecord> mlu;
  std::string activation_file;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<Algorithm> parse_algorithms(const std::string& list) {
  std::vector<Algorithm> algos;
  for (const auto& name : split_list(list)) {
    Algorithm a = parse_algorithm(name);
    if (std::find(algos.begin(), algos.end(), a) == algos.end()) algos.push_back(a);
  }
  if (algos.empty()) throw UsageError("--algo needs at least one algorithm");
  return algos;
}

std::vector<Router> parse_routers(const std::string& list) {
  std::vector<Router> routers;
  auto add = [&](Router r) {
    if (std::find(routers.begin(), routers.end(), r) == routers.end()) routers.push_back(r);
  };
  for (const auto& name : split_list(list)) {
    if (name == "none") continue;
    if (name == "mcf") {
      add(Router::kMcf);
    } else if (name == "2sr") {
      add(Router::kTwoSr);
    } else if (name == "spr") {
      add(Router::kSpr);
    } else if (name == "both") {
      add(Router::kMcf);
      add(Router::kTwoSr);
    } else if (name == "all") {
      add(Router::kMcf);
      add(Router::kTwoSr);
      add(Router::kSpr);
    } else {
      throw UsageError("unknown router '" + name + "'");
    }
  }
  return routers;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json activation_json(const Topology& topo, const ActivationSolution& act) {
  json rows = json::array();
  std::vector<const BidirectedEdge*> edges;
  for (const auto& e : topo.edges()) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](auto* a, auto* b) {
    return std::pair(a->u, a->v) < std::pair(b->u, b->v);
  });
  for (const auto* e : edges) rows.push_back({e->u, e->v, act[e->id]});
  return rows;
}

json mlu_json(const MluRecord& r) {
  return {{"matrix", r.matrix},
          {"router", to_string(r.result.router)},
          {"mlu", number_or_null(r.result.mlu)},
          {"feasible", r.result.feasible},
          {"runtime_ms", r.result.runtime_ms}};
}

json run_json(const Topology& topo, const RunRecord& rec) {
  const AlgorithmRun& run = rec.run;
  json j = {{"algorithm", to_string(run.algorithm)},
            {"variant", to_string(run.variant)},
            {"trained_on", rec.trained_on.empty() ? json(nullptr) : json(rec.trained_on)},
            {"z", run.z},
            {"runtime_ms", run.runtime_ms},
            {"iterations", run.iterations},
            {"infeasible_rollbacks", run.infeasible_rollbacks},
            {"status", to_string(run.status)},
            {"proven_optimal", run.proven_optimal}};
  if (run.lp_objective) {
    j["lp_objective"] = to_string(*run.lp_objective);
    j["lp_objective_value"] = run.lp_objective_value;
  } else {
    j["lp_objective"] = nullptr;
    j["lp_objective_value"] = nullptr;
  }
  j["ratio_to_exact"] = rec.ratio ? json(to_double(*rec.ratio)) : json(nullptr);
  if (run.algorithm == Algorithm::kExact) {
    j["best_bound"] = number_or_null(run.best_bound);
    j["mip_gap"] = number_or_null(run.mip_gap);
  }
  if (run.lemma1) {
    j["lemma1"] = {{"holds", run.lemma1->holds}, {"h", run.lemma1->h}, {"l", run.lemma1->l}};
  }
  j["activation"] = activation_json(topo, run.activation);
  if (!rec.activation_file.empty()) j["activation_file"] = rec.activation_file;
  json evals = json::array();
  for (const auto& m : rec.mlu) evals.push_back(mlu_json(m));
  j["mlu"] = evals;
  return j;
}

const char* kRunsHeader =
    "instance,nodes,edges,variant,trained_on,algorithm,z,lp_objective,ratio_to_exact,"
    "runtime_ms,iterations,infeasible_rollbacks,status,proven_optimal\n";
const char* kMluHeader =
    "instance,variant,trained_on,algorithm,matrix,router,mlu,feasible,runtime_ms\n";

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

void write_runs_csv(std::ostream& out, const Topology& topo, const std::vector<RunRecord>& recs) {
  for (const auto& rec : recs) {
    const AlgorithmRun& r = rec.run;
    out << topo.name() << ',' << topo.node_count() << ',' << topo.edge_count() << ','
        << to_string(r.variant) << ',' << rec.trained_on << ',' << to_string(r.algorithm)
        << ',' << r.z << ',' << (r.lp_objective ? csv_number(r.lp_objective_value) : "")
        << ',' << (rec.ratio ? csv_number(to_double(*rec.ratio)) : "") << ','
        << csv_number(r.runtime_ms) << ',' << r.iterations << ',' << r.infeasible_rollbacks
        << ',' << to_string(r.status) << ',' << (r.proven_optimal ? 1 : 0) << '\n';
  }
}

void write_mlu_csv(std::ostream& out, const Topology& topo, const std::vector<RunRecord>& recs) {
  for (const auto& rec : recs) {
    for (const auto& m : rec.mlu) {
      out << topo.name() << ',' << to_string(rec.run.variant) << ',' << rec.trained_on << ','
          << to_string(rec.run.algorithm) << ',' << m.matrix << ','
          << to_string(m.result.router) << ',' << csv_number(m.result.mlu) << ','
          << (m.result.feasible ? 1 : 0) << ',' << csv_number(m.result.runtime_ms) << '\n';
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::vector<NamedMatrix> load_matrices(const std::vector<std::string>& paths, int n) {
  std::vector<NamedMatrix> mats;
  for (const auto& p : paths) mats.push_back({fs::path(p).filename().string(), load_demands(p, n)});
  return mats;
}

std::vector<MluRecord> evaluate_on(const Topology& topo, const ActivationSolution& act,
                                   const std::vector<NamedMatrix>& mats,
                                   const std::optional<RetentionRatio>& rho,
                                   const std::vector<Router>& routers,
                                   const SolverBackend& backend) {
  std::vector<MluRecord> out;
  if (routers.empty() || mats.empty()) return out;
  Topology reduced = reduce(topo, act);
  for (const auto& m : mats) {
    TrafficMatrix t = rho ? scale(m.matrix, *rho) : m.matrix;
    for (Router r : routers) {
      MluResult res;
      switch (r) {
        case Router::kMcf: res = mcf_mlu(reduced, t, backend); break;
        case Router::kTwoSr: res = two_sr_mlu(reduced, t, backend); break;
        case Router::kSpr: res = spr_mlu(reduced, t); break;
      }
      out.push_back({m.name, res});
    }
  }
  return out;
}

struct SweepConfig {
  std::vector<Algorithm> algorithms;
  std::vector<Router> routers;
  bool oblivious = true;
  bool aware = false;
  SolveLimits limits;
  TrafficAwareOptions options;
};

void assign_ratios(std::vector<RunRecord>& recs, std::size_t begin) {
  const RunRecord* ex = nullptr;
  for (std::size_t i = begin; i < recs.size(); ++i) {
    if (recs[i].run.algorithm == Algorithm::kExact && recs[i].run.proven_optimal) ex = &recs[i];
  }
  if (!ex) return;
  for (std::size_t i = begin; i < recs.size(); ++i) {
    if (ex->run.z > 0) {
      recs[i].ratio = Rational(recs[i].run.z, ex->run.z);
    } else if (recs[i].run.z == 0) {
      recs[i].ratio = Rational(1);
    }
  }
}

// All runs for one instance; evaluation matrices are rho-scaled.
std::vector<RunRecord> sweep_instance(std::shared_ptr<const Topology> topo,
                                      const RetentionRatio& rho,
                                      const std::vector<NamedMatrix>& mats,
                                      const SweepConfig& cfg, const SolverBackend& backend) {
  std::vector<RunRecord> recs;
  auto run_context = [&](const std::optional<NamedMatrix>& trained) {
    Instance inst{topo, rho, std::nullopt, cfg.options};
    if (trained) inst.traffic = trained->matrix;
    std::size_t begin = recs.size();
    for (Algorithm a : cfg.algorithms) {
      if (a == Algorithm::kUniform && trained) continue;
      RunRecord rec;
      rec.run = run_algorithm(a, inst, backend, cfg.limits);
      if (trained) rec.trained_on = trained->name;
      recs.push_back(std::move(rec));
    }
    assign_ratios(recs, begin);
    for (std::size_t i = begin; i < recs.size(); ++i) {
      recs[i].mlu = evaluate_on(*topo, recs[i].run.activation, mats, rho, cfg.routers, backend);
    }
  };
  if (cfg.oblivious) run_context(std::nullopt);
  if (cfg.aware) {
    for (const auto& m : mats) run_context(m);
  }
  return recs;
}

SweepConfig sweep_config(const Options& o, bool have_traffic, const char* default_router) {
  SweepConfig cfg;
  cfg.algorithms = parse_algorithms(o.algo);
  cfg.routers = parse_routers(o.router.empty() ? default_router : o.router);
  cfg.limits.time_limit_s = o.time_limit;
  cfg.options.aggregate_by_source = o.aggregate;
  std::string v = lower(o.variant);
  if (v == "auto") {
    cfg.oblivious = !have_traffic;
    cfg.aware = have_traffic;
  } else if (v == "oblivious") {
    cfg.oblivious = true;
    cfg.aware = false;
  } else if (v == "traffic-aware" || v == "aware") {
    cfg.oblivious = false;
    cfg.aware = true;
  } else if (v == "both") {
    cfg.oblivious = true;
    cfg.aware = true;
  } else {
    throw UsageError("unknown variant '" + o.variant + "'");
  }
  if (cfg.aware && !have_traffic) throw UsageError("the traffic-aware variant needs --traffic");
  if (o.time_limit <= 0) throw UsageError("--time-limit must be positive");
  return cfg;
}

json config_json(const Options& o, const RetentionRatio& rho, const SweepConfig& cfg) {
  json algos = json::array();
  for (Algorithm a : cfg.algorithms) algos.push_back(to_string(a));
  json routers = json::array();
  for (Router r : cfg.routers) routers.push_back(to_string(r));
  return {{"rho", to_string(rho.value())},
          {"connections", o.connections},
          {"algorithms", algos},
          {"routers", routers},
          {"time_limit_s", o.time_limit},
          {"seed", o.seed},
          {"oblivious", cfg.oblivious},
          {"traffic_aware", cfg.aware},
          {"aggregate_by_source", o.aggregate}};
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
}

fs::path sibling(const std::string& out_path, const std::string& suffix) {
  fs::path p(out_path);
  return p.parent_path() / (p.stem().string() + suffix);
}

int cmd_optimize(const Options& o, std::ostream& out) {
  RetentionRatio rho = RetentionRatio::parse(o.rho);
  auto topo = std::make_shared<const Topology>(load_topology(o.topology, o.connections));
  auto mats = load_matrices(o.traffic, topo->node_count());
  SweepConfig cfg = sweep_config(o, !mats.empty(), "none");
  const SolverBackend& backend = default_backend();

  if (!o.dump_lp.empty()) {
    TocaModel model = cfg.oblivious
                          ? build_oblivious(topo, rho, ModelMode::kIlp)
                          : build_traffic_aware(topo, mats.front().matrix, rho,
                                                ModelMode::kIlp, cfg.options);
    TocaSolver(model, backend).write_model(o.dump_lp);
  }

  std::vector<RunRecord> recs = sweep_instance(topo, rho, mats, cfg, backend);
  if (!o.out.empty()) {
    for (auto& rec : recs) {
      std::string suffix = "." + lower(to_string(rec.run.algorithm));
      if (!rec.trained_on.empty()) suffix += "." + fs::path(rec.trained_on).stem().string();
      fs::path p = sibling(o.out, suffix + ".act");
      write_text(p, format_activation(*topo, rec.run.activation));
      rec.activation_file = p.string();
    }
  }

  if (o.format == "csv") {
    std::ostringstream s;
    s << kRunsHeader;
    write_runs_csv(s, *topo, recs);
    emit(s.str(), o.out, out);
    bool any_mlu = std::any_of(recs.begin(), recs.end(), [](auto& r) { return !r.mlu.empty(); });
    if (any_mlu) {
      std::ostringstream m;
      m << kMluHeader;
      write_mlu_csv(m, *topo, recs);
      if (o.out.empty()) {
        out << '\n' << m.str();
      } else {
        write_text(sibling(o.out, ".mlu.csv"), m.str());
      }
    }
    return kExitOk;
  }
  json report = {{"schema", 1},
                 {"command", "optimize"},
                 {"instance", topo->name()},
                 {"nodes", topo->node_count()},
                 {"edges", topo->edge_count()},
                 {"config", config_json(o, rho, cfg)},
                 {"assumptions", {kWeightAssumption}}};
  json runs = json::array();
  for (const auto& rec : recs) runs.push_back(run_json(*topo, rec));
  report["runs"] = runs;
  emit(report.dump(2) + "\n", o.out, out);
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  RetentionRatio rho = RetentionRatio::parse(o.rho);
  Topology topo = load_topology(o.topology, o.connections);
  ActivationSolution act = o.activation.empty()
                               ? ActivationSolution::full(topo)
                               : parse_activation(read_file(o.activation), topo);
  auto mats = load_matrices(o.traffic, topo.node_count());
  if (o.worst_case) mats.push_back({"worst-case", worst_case_matrix(topo)});
  for (int k = 0; k < o.samples; ++k) {
    std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
    mats.push_back({"sample-" + std::to_string(seed), sample_routable_matrix(topo, seed)});
  }
  if (mats.empty()) throw UsageError("evaluate needs --traffic, --worst-case or --samples");
  auto routers = parse_routers(o.router.empty() ? "both" : o.router);
  if (routers.empty()) throw UsageError("evaluate needs at least one router");
  std::optional<RetentionRatio> factor;
  if (!o.unscaled) factor = rho;
  auto evals = evaluate_on(topo, act, mats, factor, routers, default_backend());

  if (o.format == "csv") {
    std::ostringstream s;
    s << "instance,matrix,router,mlu,feasible,runtime_ms\n";
    for (const auto& e : evals) {
      s << topo.name() << ',' << e.matrix << ',' << to_string(e.result.router) << ','
        << csv_number(e.result.mlu) << ',' << (e.result.feasible ? 1 : 0) << ','
        << csv_number(e.result.runtime_ms) << '\n';
    }
    emit(s.str(), o.out, out);
    return kExitOk;
  }
  double max_mlu = 0;
  json rows = json::array();
  for (const auto& e : evals) {
    rows.push_back(mlu_json(e));
    max_mlu = std::max(max_mlu, e.result.mlu);
  }
  json report = {{"schema", 1},
                 {"command", "evaluate"},
                 {"instance", topo.name()},
                 {"rho", to_string(rho.value())},
                 {"scaled_by_rho", !o.unscaled},
                 {"activation_file", o.activation.empty() ? json(nullptr) : json(o.activation)},
                 {"z", act.total()},
                 {"assumptions", {kWeightAssumption}},
                 {"evaluations", rows},
                 {"max_mlu", number_or_null(max_mlu)},
                 {"all_feasible", std::all_of(evals.begin(), evals.end(),
                                              [](auto& e) { return e.result.feasible; })}};
  emit(report.dump(2) + "\n", o.out, out);
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  RetentionRatio rho = RetentionRatio::parse(o.rho);
  auto topo = std::make_shared<const Topology>(load_topology(o.topology, o.connections));
  BruteForceOptions bf;
  bf.max_candidates = o.limit;
  BruteForceResult res = brute_force_optimum(*topo, rho, bf);
  json report = {{"schema", 1},
                 {"command", "oracle"},
                 {"instance", topo->name()},
                 {"rho", to_string(rho.value())},
                 {"connections", o.connections},
                 {"value", res.value},
                 {"candidates_checked", res.candidates_checked},
                 {"activation", activation_json(*topo, res.activation)}};
  int code = kExitOk;
  if (o.cross_check) {
    SolveLimits limits;
    limits.time_limit_s = o.time_limit;
    AlgorithmRun ex = exact(Instance{topo, rho}, default_backend(), limits);
    bool match = ex.proven_optimal && ex.z == res.value;
    report["exact"] = {{"z", ex.z}, {"proven_optimal", ex.proven_optimal}, {"match", match}};
    if (!match) {
      err << "oracle mismatch: brute force " << res.value << ", exact " << ex.z << "\n";
      code = kExitSolver;
    }
  }
  emit(report.dump(2) + "\n", o.out, out);
  return code;
}

struct InstanceFiles {
  fs::path graph;
  std::vector<fs::path> demands;
};

std::vector<InstanceFiles> discover(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("dataset '" + dir.string() + "' is not a directory");
  std::vector<InstanceFiles> found;
  std::vector<fs::path> all;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) all.push_back(entry.path());
  }
  std::sort(all.begin(), all.end());
  for (const auto& p : all) {
    if (p.extension() != ".graph") continue;
    InstanceFiles inst{p, {}};
    std::string prefix = p.stem().string() + ".";
    for (const auto& q : all) {
      std::string name = q.filename().string();
      if (q.extension() == ".demands" && name.rfind(prefix, 0) == 0) inst.demands.push_back(q);
    }
    found.push_back(std::move(inst));
  }
  return found;
}

struct BenchResult {
  std::shared_ptr<const Topology> topo;
  std::vector<RunRecord> runs;
  std::string name;
  std::string error;
  bool skipped = false;
};

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  RetentionRatio rho = RetentionRatio::parse(o.rho);
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  auto files = discover(o.dataset);
  SweepConfig cfg = sweep_config(o, true, "both");
  if (lower(o.variant) == "auto") cfg.aware = false, cfg.oblivious = true;

  std::vector<BenchResult> results(files.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    auto backend = make_highs_backend(1);
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BenchResult& res = results[i];
      res.name = files[i].graph.stem().string();
      try {
        auto topo = std::make_shared<const Topology>(load_topology(files[i].graph, o.connections));
        if (topo->node_count() < o.min_nodes ||
            (o.max_nodes > 0 && topo->node_count() > o.max_nodes)) {
          res.skipped = true;
          continue;
        }
        std::vector<NamedMatrix> mats;
        for (const auto& d : files[i].demands) {
          mats.push_back({d.filename().string(), load_demands(d, topo->node_count())});
        }
        SweepConfig local = cfg;
        if (mats.empty()) local.aware = false;
        res.topo = topo;
        res.runs = sweep_instance(topo, rho, mats, local, *backend);
      } catch (const std::exception& e) {
        res.error = e.what();
        std::lock_guard lock(log_mutex);
        err << "bench: " << res.name << ": " << e.what() << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min<int>(o.jobs, static_cast<int>(files.size())); ++j) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream runs_csv, mlu_csv;
  runs_csv << kRunsHeader;
  mlu_csv << kMluHeader;
  json instances = json::array();
  struct Agg {
    int runs = 0;
    int ratios = 0;
    double ratio_sum = 0, ratio_max = 0, runtime_sum = 0;
    double mlu_max_mcf = 0, mlu_max_2sr = 0;
  };
  std::map<std::pair<std::string, std::string>, Agg> agg;
  for (const auto& res : results) {
    if (res.skipped) continue;
    if (!res.error.empty()) {
      instances.push_back({{"instance", res.name}, {"error", res.error}});
      continue;
    }
    write_runs_csv(runs_csv, *res.topo, res.runs);
    write_mlu_csv(mlu_csv, *res.topo, res.runs);
    json runs = json::array();
    for (const auto& rec : res.runs) {
      runs.push_back(run_json(*res.topo, rec));
      Agg& a = agg[{to_string(rec.run.variant), to_string(rec.run.algorithm)}];
      ++a.runs;
      a.runtime_sum += rec.run.runtime_ms;
      if (rec.ratio) {
        double r = to_double(*rec.ratio);
        ++a.ratios;
        a.ratio_sum += r;
        a.ratio_max = std::max(a.ratio_max, r);
      }
      for (const auto& m : rec.mlu) {
        double& slot = m.result.router == Router::kTwoSr ? a.mlu_max_2sr : a.mlu_max_mcf;
        if (m.result.router != Router::kSpr) slot = std::max(slot, m.result.mlu);
      }
    }
    instances.push_back({{"instance", res.name},
                         {"nodes", res.topo->node_count()},
                         {"edges", res.topo->edge_count()},
                         {"runs", runs}});
  }
  json summary = json::array();
  for (const auto& [key, a] : agg) {
    summary.push_back({{"variant", key.first},
                       {"algorithm", key.second},
                       {"runs", a.runs},
                       {"mean_ratio_to_exact", a.ratios ? json(a.ratio_sum / a.ratios) : json(nullptr)},
                       {"max_ratio_to_exact", a.ratios ? json(a.ratio_max) : json(nullptr)},
                       {"mean_runtime_ms", a.runtime_sum / a.runs},
                       {"max_mlu_mcf", number_or_null(a.mlu_max_mcf)},
                       {"max_mlu_2sr", number_or_null(a.mlu_max_2sr)}});
  }
  json report = {{"schema", 1},
                 {"command", "bench"},
                 {"dataset", o.dataset},
                 {"min_nodes", o.min_nodes},
                 {"config", config_json(o, rho, cfg)},
                 {"assumptions", {kWeightAssumption}},
                 {"instances", instances},
                 {"summary", summary}};
  if (o.out.empty()) {
    out << (o.format == "csv" ? runs_csv.str() : report.dump(2) + "\n");
  } else {
    write_text(sibling(o.out, ".json"), report.dump(2) + "\n");
    write_text(sibling(o.out, ".runs.csv"), runs_csv.str());
    write_text(sibling(o.out, ".mlu.csv"), mlu_csv.str());
  }
  return kExitOk;
}

void add_shared(CLI::App* sub, Options& o) {
  sub->add_option("--rho", o.rho, "retention ratio, p/q or decimal in (0,1)");
  sub->add_option("--connections", o.connections, "connections per edge")
      ->check(CLI::PositiveNumber);
  sub->add_option("--time-limit", o.time_limit, "ILP time limit in seconds");
  sub->add_option("--seed", o.seed, "first seed for sampled matrices");
  sub->add_option("--out", o.out, "report path; stdout when absent");
  sub->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Minimum connection activation for traffic-oblivious networks", "toca"};
  app.require_subcommand(1);

  auto* opt = app.add_subcommand("optimize", "run activation algorithms on one topology");
  opt->add_option("--topology", o.topology, "Repetita graph file")->required();
  opt->add_option("--traffic", o.traffic, "Repetita demands file (repeatable)");
  opt->add_option("--algo", o.algo, "comma list of rnd,dwn,up,exact,uniform");
  opt->add_option("--router", o.router, "evaluate outputs on --traffic: none|mcf|2sr|spr|both|all");
  opt->add_option("--variant", o.variant, "auto|oblivious|traffic-aware|both");
  opt->add_flag("--aggregate-sources", o.aggregate, "one commodity per source (traffic-aware)");
  opt->add_option("--dump-lp", o.dump_lp, "write the ILP model (.lp or .mps)");
  add_shared(opt, o);

  auto* ev = app.add_subcommand("evaluate", "MLU of an activation on demand matrices");
  ev->add_option("--topology", o.topology, "Repetita graph file")->required();
  ev->add_option("--activation", o.activation, "activation file; full network when absent");
  ev->add_option("--traffic", o.traffic, "Repetita demands file (repeatable)");
  ev->add_flag("--worst-case", o.worst_case, "also evaluate the worst-case matrix");
  ev->add_option("--samples", o.samples, "also evaluate this many sampled routable matrices");
  ev->add_flag("--unscaled", o.unscaled, "do not scale matrices by rho");
  ev->add_option("--router", o.router, "mcf|2sr|spr|both|all");
  add_shared(ev, o);

  auto* orc = app.add_subcommand("oracle", "exhaustive optimum for small instances");
  orc->add_option("--topology", o.topology, "Repetita graph file")->required();
  orc->add_option("--limit", o.limit, "maximum number of candidate activations");
  orc->add_flag("--cross-check", o.cross_check, "compare against the exact ILP");
  add_shared(orc, o);

  auto* bench = app.add_subcommand("bench", "sweep a directory of instances");
  bench->add_option("--dataset", o.dataset, "directory with <name>.graph and <name>.*.demands")
      ->required();
  bench->add_option("--min-nodes", o.min_nodes, "skip topologies with fewer nodes");
  bench->add_option("--max-nodes", o.max_nodes, "skip topologies with more nodes (0: no cap)");
  bench->add_option("--algo", o.algo, "comma list of rnd,dwn,up,exact,uniform");
  bench->add_option("--router", o.router, "none|mcf|2sr|spr|both|all");
  bench->add_option("--variant", o.variant, "oblivious|traffic-aware|both");
  bench->add_flag("--aggregate-sources", o.aggregate, "one commodity per source (traffic-aware)");
  bench->add_option("--jobs", o.jobs, "parallel instances");
  add_shared(bench, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (opt->parsed()) return cmd_optimize(o, out);
    if (ev->parsed()) return cmd_evaluate(o, out);
    if (orc->parsed()) return cmd_oracle(o, out, err);
    return cmd_bench(o, out, err);
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace toca::cli
