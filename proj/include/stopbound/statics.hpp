#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stopbound/boundary.hpp"
#include "stopbound/model.hpp"
#include "stopbound/value.hpp"

namespace stopbound {

enum class SweepParameter { kSigma1, kSigma2, kAlpha1, kAlpha2, kR };

const char* sweep_parameter_name(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& name);

/// Returns base with one parameter replaced (revalidated, so invalid
/// combinations are rejected up front).
ModelParams with_parameter(const ModelParams& base, SweepParameter which, double value);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kSigma2;
  std::vector<double> values;  ///< strictly increasing
  ModelParams base;
  SolveOptions solver;
  SamplerConfig mc;
  /// Probe point for the value estimates; <= 0 means the default
  /// (0.4 x*, 0.4 y*) of the base parameters. The same seed is shared across
  /// entries, so probes are compared under common random numbers.
  double probe_x = -1.0;
  double probe_y = -1.0;
};

struct SweepEntry {
  double value = 0.0;
  bool solved = false;
  std::string error;  ///< populated when solved is false
  std::optional<Boundary> boundary;
  SolveReport report;
  ValueEstimate probe;
  double x_star = 0.0;
  double y_star = 0.0;
};

/// Pointwise ordering of two boundaries on the overlap of their domains, at
/// a noise tolerance of 3x the combined per-node residual standard errors
/// (interpolated between nodes).
struct OrderingVerdict {
  double lo_value = 0.0;  ///< swept parameter value of the first entry
  double hi_value = 0.0;  ///< swept parameter value of the second entry
  bool nondecreasing = false;  ///< hi boundary >= lo boundary - tol on the overlap
  bool nonincreasing = false;  ///< hi boundary <= lo boundary + tol on the overlap
  double max_drop = 0.0;  ///< max of lo - hi over the overlap (violation of nondecreasing)
  double max_rise = 0.0;  ///< max of hi - lo over the overlap (violation of nonincreasing)
  double max_tolerance = 0.0;
};

struct SweepReport {
  SweepParameter parameter = SweepParameter::kSigma2;
  std::vector<SweepEntry> entries;
  std::vector<OrderingVerdict> boundary_order;  ///< consecutive entry pairs
  double probe_x = 0.0;
  double probe_y = 0.0;
};

/// Solves the boundary for every parameter value with a shared master seed,
/// probes the value estimate at a fixed point with common random numbers,
/// and records pairwise boundary orderings. A failed solve marks its entry
/// and the sweep continues.
SweepReport run_sweep(const SweepSpec& spec);

struct MonotonicityVerdict {
  double x = 0.0;
  double y = 0.0;
  ValueEstimate lo;
  ValueEstimate hi;
  bool passed = false;  ///< hi >= lo - 3 * combined standard error
};

/// Checks that the estimated value is monotone in one parameter: solves the
/// boundary at the lo and hi parameter values and compares the value
/// estimates at each probe point under common random numbers.
std::vector<MonotonicityVerdict> value_monotonicity_check(
    const ModelParams& base, SweepParameter which, double lo, double hi,
    std::span<const std::pair<double, double>> probes, const SolveOptions& solver,
    const SamplerConfig& mc);

}  // namespace stopbound
