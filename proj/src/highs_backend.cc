#include <algorithm>
#include <chrono>
#include <numeric>

#include "Highs.h"
#include "toca/errors.h"
#include "toca/solver.h"

namespace toca {

int LinearProgram::add_col(double cost, double lower, double upper, bool integer,
                           std::string name) {
  col_cost.push_back(cost);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  col_integer.push_back(integer ? 1 : 0);
  col_names.push_back(std::move(name));
  return col_count() - 1;
}

int LinearProgram::add_row(double lower, double upper, std::string name) {
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_names.push_back(std::move(name));
  return row_count() - 1;
}

bool LinearProgram::has_integers() const {
  return std::any_of(col_integer.begin(), col_integer.end(), [](char c) { return c; });
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kTimeLimit: return "TIME_LIMIT";
    case SolveStatus::kError: return "ERROR";
  }
  return "ERROR";
}

namespace {

HighsLp to_highs(const LinearProgram& lp) {
  HighsLp h;
  h.num_col_ = lp.col_count();
  h.num_row_ = lp.row_count();
  h.sense_ = ObjSense::kMinimize;
  h.col_cost_ = lp.col_cost;
  h.col_lower_ = lp.col_lower;
  h.col_upper_ = lp.col_upper;
  h.row_lower_ = lp.row_lower;
  h.row_upper_ = lp.row_upper;

  // Column-wise CSC; duplicate (row,col) entries are summed.
  std::vector<LinearProgram::Entry> entries = lp.entries;
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  auto& m = h.a_matrix_;
  m.format_ = MatrixFormat::kColwise;
  m.num_col_ = h.num_col_;
  m.num_row_ = h.num_row_;
  m.start_.assign(h.num_col_ + 1, 0);
  m.index_.clear();
  m.value_.clear();
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double sum = 0;
    while (j < entries.size() && entries[j].col == entries[i].col &&
           entries[j].row == entries[i].row) {
      sum += entries[j].value;
      ++j;
    }
    if (sum != 0) {
      m.index_.push_back(entries[i].row);
      m.value_.push_back(sum);
      m.start_[entries[i].col + 1]++;
    }
    i = j;
  }
  std::partial_sum(m.start_.begin(), m.start_.end(), m.start_.begin());

  if (lp.has_integers()) {
    h.integrality_.resize(h.num_col_);
    for (int c = 0; c < h.num_col_; ++c) {
      h.integrality_[c] = lp.col_integer[c] ? HighsVarType::kInteger
                                            : HighsVarType::kContinuous;
    }
  }
  bool named = std::any_of(lp.col_names.begin(), lp.col_names.end(),
                           [](const std::string& s) { return !s.empty(); });
  if (named) {
    h.col_names_ = lp.col_names;
    h.row_names_ = lp.row_names;
    for (int c = 0; c < h.num_col_; ++c) {
      if (h.col_names_[c].empty()) h.col_names_[c] = "c" + std::to_string(c);
    }
    for (int r = 0; r < h.num_row_; ++r) {
      if (h.row_names_[r].empty()) h.row_names_[r] = "r" + std::to_string(r);
    }
  }
  return h;
}

class HighsSession : public SolverSession {
 public:
  explicit HighsSession(int threads) {
    highs_.setOptionValue("output_flag", false);
    highs_.setOptionValue("threads", threads);
    highs_.setOptionValue("random_seed", 0);
  }

  void load(const LinearProgram& lp) override {
    has_integers_ = lp.has_integers();
    if (highs_.passModel(to_highs(lp)) == HighsStatus::kError) {
      throw SolverError("HiGHS rejected the model");
    }
  }

  void set_col_bounds(int col, double lower, double upper) override {
    if (highs_.changeColBounds(col, lower, upper) == HighsStatus::kError) {
      throw SolverError("HiGHS rejected bound change on column " + std::to_string(col));
    }
  }

  SolveResult solve(const SolveLimits& limits) override {
    const bool mip = has_integers_ && !limits.relax_integrality;
    highs_.setOptionValue("time_limit", limits.time_limit_s);
    highs_.setOptionValue("solve_relaxation", has_integers_ && limits.relax_integrality);
    highs_.setOptionValue("mip_rel_gap", limits.mip_rel_gap);
    highs_.setOptionValue("solver", mip ? "choose" : limits.interior_point ? "ipm" : "simplex");
    highs_.setOptionValue("run_crossover", "on");
    highs_.setOptionValue("presolve", "choose");

    auto start = std::chrono::steady_clock::now();
    HighsStatus run = highs_.run();
    HighsModelStatus status = highs_.getModelStatus();
    if (status == HighsModelStatus::kUnboundedOrInfeasible) {
      // Presolve could not tell which; rerun without it.
      highs_.setOptionValue("presolve", "off");
      run = highs_.run();
      status = highs_.getModelStatus();
      highs_.setOptionValue("presolve", "choose");
    }
    SolveResult r;
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    const HighsInfo& info = highs_.getInfo();
    r.simplex_iterations = info.simplex_iteration_count;
    r.has_solution = info.primal_solution_status == kSolutionStatusFeasible;
    switch (status) {
      case HighsModelStatus::kOptimal:
        r.status = SolveStatus::kOptimal;
        break;
      case HighsModelStatus::kInfeasible:
        r.status = SolveStatus::kInfeasible;
        r.has_solution = false;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        r.status = SolveStatus::kTimeLimit;
        break;
      default:
        r.status = SolveStatus::kError;
        r.has_solution = false;
        r.message = highs_.modelStatusToString(status);
        break;
    }
    if (run == HighsStatus::kError && r.status == SolveStatus::kOptimal) {
      r.status = SolveStatus::kError;
      r.message = "HiGHS run returned an error";
    }
    if (r.has_solution) {
      r.col_values = highs_.getSolution().col_value;
      r.objective = info.objective_function_value;
    }
    if (mip) {
      r.best_bound = info.mip_dual_bound;
      r.mip_gap = info.mip_gap;
      r.is_basic = false;
    } else {
      r.best_bound = r.objective;
      r.mip_gap = r.status == SolveStatus::kOptimal ? 0 : kInfinity;
      r.is_basic = r.status == SolveStatus::kOptimal && highs_.getBasis().valid;
    }
    return r;
  }

  void write_model(const std::string& path) override {
    if (highs_.writeModel(path) == HighsStatus::kError) {
      throw SolverError("could not write model to " + path);
    }
  }

 private:
  Highs highs_;
  bool has_integers_ = false;
};

class HighsBackend : public SolverBackend {
 public:
  explicit HighsBackend(int threads) : threads_(threads) {}
  std::string name() const override { return "highs"; }
  SolverCapabilities capabilities() const override { return {true, true, true}; }
  std::unique_ptr<SolverSession> open() const override {
    return std::make_unique<HighsSession>(threads_);
  }

 private:
  int threads_;
};

}  // namespace

std::unique_ptr<SolverBackend> make_highs_backend(int threads) {
  return std::make_unique<HighsBackend>(threads);
}

const SolverBackend& default_backend() {
  static const auto backend = make_highs_backend(1);
  return *backend;
}

}  // namespace toca
