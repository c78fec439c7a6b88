#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace toca {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Minimisation problem in row/column form with sparse triplet coefficients.
struct LinearProgram {
  struct Entry {
    int row;
    int col;
    double value;
  };

  std::vector<double> col_cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<char> col_integer;
  std::vector<std::string> col_names;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;
  std::vector<Entry> entries;

  int add_col(double cost, double lower, double upper, bool integer = false,
              std::string name = {});
  int add_row(double lower, double upper, std::string name = {});
  void add_entry(int row, int col, double value) { entries.push_back({row, col, value}); }

  int col_count() const { return static_cast<int>(col_cost.size()); }
  int row_count() const { return static_cast<int>(row_lower.size()); }
  bool has_integers() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimit, kError };

const char* to_string(SolveStatus s);

struct SolveLimits {
  double time_limit_s = 3600;
  double mip_rel_gap = 1e-9;
  // Solve integer columns as continuous.
  bool relax_integrality = false;
  // LPs only: interior point followed by crossover instead of dual simplex.
  bool interior_point = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> col_values;
  double objective = kInfinity;
  // MIP dual bound (equals objective for LPs solved to optimality).
  double best_bound = -kInfinity;
  double mip_gap = kInfinity;
  bool has_solution = false;
  // The backend reports a valid simplex basis for the returned point.
  bool is_basic = false;
  double runtime_s = 0;
  int simplex_iterations = 0;
  std::string message;
};

struct SolverCapabilities {
  bool solves_lp = false;
  bool solves_mip = false;
  bool returns_basic_solutions = false;
};

// One loaded problem; bound changes and re-solves reuse solver state.
class SolverSession {
 public:
  virtual ~SolverSession() = default;
  virtual void load(const LinearProgram& lp) = 0;
  virtual void set_col_bounds(int col, double lower, double upper) = 0;
  virtual SolveResult solve(const SolveLimits& limits) = 0;
  virtual void write_model(const std::string& path) = 0;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual SolverCapabilities capabilities() const = 0;
  virtual std::unique_ptr<SolverSession> open() const = 0;
};

// HiGHS: dual simplex for LPs (vertex solutions), branch-and-cut for MIPs.
std::unique_ptr<SolverBackend> make_highs_backend(int threads = 1);

// Process-wide default backend (HiGHS, single thread).
const SolverBackend& default_backend();

}  // namespace toca
