#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fullbody/config.hpp"
#include "fullbody/diagnostics.hpp"

namespace fullbody {

/// Whole-run conservation and effort figures. Maxima are tracked at every
/// step regardless of the CSV sampling stride.
struct RunSummary {
  std::string integrator;
  double h = 0.0;
  double t_final = 0.0;
  long long steps = 0;
  double E0 = 0.0;
  double max_energy_dev = 0.0;
  double max_orth_err = 0.0;
  double max_gamma_dev = 0.0;
  double max_pi_dev = 0.0;
  double pi0_norm = 0.0;
  std::array<double, 10> decile_energy_dev{};
  long long newton_iterations = 0;
  int newton_max_single = 0;
  double wall_seconds = 0.0;
};

struct RunResult {
  RunSummary summary;
  InertialStateH final_inertial;
  DiagnosticsRecord initial;
  DiagnosticsRecord final;
};

/// Integrates cfg.initial from t = 0 to t_final with the configured
/// integrator. When `csv` is given, writes the sampled trajectory in the
/// documented column schema with 17 significant digits. All error paths
/// annotate the failing step index.
RunResult run(const SimConfig& cfg, std::ostream* csv = nullptr);

struct CompareReport {
  RunSummary lgvi;
  RunSummary rk4;
};

/// Runs the configured variational integrator and the matching raw
/// Runge-Kutta integrator on the identical configuration, side by side.
/// Member runs may execute concurrently (capped by FULLBODY_THREADS).
CompareReport compare(const SimConfig& cfg, std::ostream* lgvi_csv = nullptr,
                      std::ostream* rk4_csv = nullptr);

struct ConvergencePoint {
  double h = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::string integrator;
  double t_final = 0.0;
  double reference_h = 0.0;
  std::vector<ConvergencePoint> points;
  double slope = 0.0;
};

/// Global configuration error at t_final against a same-integrator reference
/// trajectory at h_min/8, for each step size in `h_list` (at least three,
/// strictly decreasing, each dividing t_final). Reports the least-squares
/// log-log slope.
ConvergenceReport converge(const SimConfig& cfg, std::vector<double> h_list);

/// Inertial-frame configuration distance between two states: the root sum of
/// squared position and attitude-entry differences over all bodies.
double configuration_distance(const InertialStateH& a, const InertialStateH& b);

void write_summary(std::ostream& out, const RunSummary& summary,
                   bool include_timing);
void write_compare_report(std::ostream& out, const CompareReport& report);
void write_convergence_report(std::ostream& out, const ConvergenceReport& report);

/// Concurrency cap for member runs: FULLBODY_THREADS when set (minimum 1),
/// otherwise the hardware concurrency.
unsigned thread_cap();

}  // namespace fullbody
