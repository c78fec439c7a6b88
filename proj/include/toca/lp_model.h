#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toca/rational.h"
#include "toca/solver.h"
#include "toca/topology.h"
#include "toca/traffic.h"

namespace toca {

enum class ModelMode { kLpRelaxation, kIlp };
enum class Variant { kOblivious, kTrafficAware };

// How the reversed-path symmetry of oblivious flows is expressed.
//  kIndexReduced: only commodities (s,t) with s < t get variables; flows of
//                 (t,s) are read off reversed arcs.
//  kExplicitRows: every arc is a commodity, plus f_st(uv) = f_ts(vu) rows.
//  kNone:         every arc is a commodity, no symmetry rows.
enum class FlowSymmetry { kIndexReduced, kExplicitRows, kNone };

const char* to_string(ModelMode m);
const char* to_string(Variant v);

// One source with one or more sinks. Demands are already scaled by rho.
struct Commodity {
  NodeId source = 0;
  struct Sink {
    NodeId node;
    Rational demand;
  };
  std::vector<Sink> sinks;

  Rational total() const;
};

struct EdgeBound {
  EdgeId edge;
  int lower;
  int upper;
};

struct TrafficAwareOptions {
  // One commodity per source node instead of one per (s,t) pair. Same
  // x-feasible region, far fewer columns on dense matrices.
  bool aggregate_by_source = false;
};

// Connection-activation model: one x-column per edge, one flow column per
// (commodity, arc), conservation rows per (commodity, node), capacity rows.
class TocaModel {
 public:
  ModelMode mode() const { return mode_; }
  Variant variant() const { return variant_; }
  FlowSymmetry symmetry() const { return symmetry_; }
  const Topology& topology() const { return *topo_; }
  const RetentionRatio& rho() const { return rho_; }

  const std::vector<Commodity>& commodities() const { return commodities_; }
  int commodity_count() const { return static_cast<int>(commodities_.size()); }

  int x_col(EdgeId e) const { return e; }
  int flow_col(int commodity, ArcId a) const {
    return topo_->edge_count() + commodity * topo_->arc_count() + a;
  }
  int capacity_row_count() const { return capacity_rows_; }
  int conservation_row_count() const { return conservation_rows_; }
  int symmetry_row_count() const { return symmetry_rows_; }

  // Flows are solved in units of demand / flow_scale() for conditioning.
  double flow_scale() const { return flow_scale_; }

  const LinearProgram& program() const { return lp_; }

  // Tightens the x-bounds of an edge; recorded in bounds().
  void set_edge_bounds(EdgeId e, int lower, int upper);
  void fix_edge(EdgeId e, int value) { set_edge_bounds(e, value, value); }
  const std::vector<EdgeBound>& bounds() const { return bounds_; }
  std::pair<int, int> edge_bounds(EdgeId e) const;

  friend TocaModel build_oblivious(std::shared_ptr<const Topology>, const RetentionRatio&,
                                   ModelMode, FlowSymmetry);
  friend TocaModel build_traffic_aware(std::shared_ptr<const Topology>,
                                       const TrafficMatrix&, const RetentionRatio&,
                                       ModelMode, TrafficAwareOptions);

 private:
  TocaModel(std::shared_ptr<const Topology> topo, const RetentionRatio& rho)
      : topo_(std::move(topo)), rho_(rho) {}
  void build(bool add_arc_capacity_rows, bool add_edge_capacity_rows);

  ModelMode mode_ = ModelMode::kLpRelaxation;
  Variant variant_ = Variant::kOblivious;
  FlowSymmetry symmetry_ = FlowSymmetry::kIndexReduced;
  std::shared_ptr<const Topology> topo_;
  RetentionRatio rho_;
  std::vector<Commodity> commodities_;
  double flow_scale_ = 1;
  LinearProgram lp_;
  std::vector<EdgeBound> bounds_;
  int capacity_rows_ = 0;
  int conservation_rows_ = 0;
  int symmetry_rows_ = 0;
};

// Demands rho * T_A; x_e in [0, c_e].
TocaModel build_oblivious(std::shared_ptr<const Topology> topo, const RetentionRatio& rho,
                          ModelMode mode,
                          FlowSymmetry symmetry = FlowSymmetry::kIndexReduced);

// Demands rho * T over the support of T; no symmetry rows.
TocaModel build_traffic_aware(std::shared_ptr<const Topology> topo,
                              const TrafficMatrix& t, const RetentionRatio& rho,
                              ModelMode mode, TrafficAwareOptions options = {});

struct FractionalSolution {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> xstar;
  // xstar re-read as exact fractions (denominators up to 1e6).
  std::vector<Rational> xstar_exact;
  double objective = kInfinity;
  Rational objective_exact;
  double best_bound = -kInfinity;
  double mip_gap = kInfinity;
  bool is_basic = false;
  bool has_solution = false;
  double runtime_ms = 0;
  // Per-arc total flow in demand units; for the index-reduced model this
  // includes the (t,s) commodities read off reversed arcs.
  std::vector<double> arc_load;
  // Flow of commodity k on arc a, demand units, at [k * arcs + a].
  std::vector<double> flows;

  double flow(int commodity, ArcId a, int arc_count) const {
    return flows.at(static_cast<std::size_t>(commodity) * arc_count + a);
  }
};

// Persistent solver session over a model; bound changes re-solve warm.
class TocaSolver {
 public:
  TocaSolver(TocaModel& model, const SolverBackend& backend);

  FractionalSolution solve(const SolveLimits& limits);
  void set_edge_bounds(EdgeId e, int lower, int upper);
  void fix_edge(EdgeId e, int value) { set_edge_bounds(e, value, value); }
  const TocaModel& model() const { return model_; }
  void write_model(const std::string& path) { session_->write_model(path); }

 private:
  TocaModel& model_;
  std::unique_ptr<SolverSession> session_;
};

// One-shot solve. LP mode returns a vertex optimum.
FractionalSolution solve(TocaModel& model, const SolverBackend& backend,
                         const SolveLimits& limits = {});

// Throws SolverError when an optimal solution breaks bounds, conservation or
// capacity beyond `tol` (relative to the scaled row magnitude).
void verify_solution(const TocaModel& model, const FractionalSolution& sol,
                     double tol = 1e-6);

inline constexpr double kIntegralityTol = 1e-6;
bool is_integral(double v, double tol = kIntegralityTol);

}  // namespace toca
