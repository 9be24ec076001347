#include "fullbody/simulation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fullbody/continuous.hpp"

namespace fullbody {

namespace {

void append_number(std::string& row, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  row += buf;
}

void append_fields(std::string& row, std::initializer_list<double> values) {
  for (double v : values) {
    row += ',';
    append_number(row, v);
  }
}

void append_vec(std::string& row, const Vec3& v) {
  append_fields(row, {v.x(), v.y(), v.z()});
}

void append_mat(std::string& row, const Mat3& m) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      row += ',';
      append_number(row, m(r, c));
    }
  }
}

void append_diag(std::string& row, const DiagnosticsRecord& d) {
  append_fields(row, {d.E, d.T_trans, d.T_rot, d.U});
  append_vec(row, d.gamma_T);
  append_vec(row, d.pi_T);
  row += ',';
  append_number(row, d.orth_err_max);
}

std::string units_comment(const UnitScales& u) {
  std::string line = "# units: mass = ";
  append_number(line, u.mass);
  line += ", length = ";
  append_number(line, u.length);
  line += ", time = ";
  append_number(line, u.time);
  line += '\n';
  return line;
}

constexpr const char* kDiagColumns =
    "E,Ttrans,Trot,U,gT1,gT2,gT3,piT1,piT2,piT3,orth_err";

// One-step trajectory driver; hides which state representation an integrator
// advances.
class Driver {
public:
  virtual ~Driver() = default;
  virtual void advance() = 0;
  virtual DiagnosticsRecord diagnostics(double t) const = 0;
  virtual std::string csv_header() const = 0;
  virtual std::string csv_row(double t, const DiagnosticsRecord& d) const = 0;
  virtual InertialStateH inertial() const = 0;
};

std::string relative_csv_header() {
  return std::string(
             "t,X1,X2,X3,R11,R12,R13,R21,R22,R23,R31,R32,R33,"
             "G1,G2,G3,P1,P2,P3,P21,P22,P23,x21,x22,x23,g21,g22,g23,"
             "R211,R212,R213,R221,R222,R223,R231,R232,R233,") +
         kDiagColumns;
}

std::string relative_csv_row(double t, const RelativeStateH& s,
                             const DiagnosticsRecord& d) {
  std::string row;
  append_number(row, t);
  append_vec(row, s.X);
  append_mat(row, s.R);
  append_vec(row, s.Gamma);
  append_vec(row, s.Pi);
  append_vec(row, s.Pi2);
  append_vec(row, s.x2);
  append_vec(row, s.gamma2);
  append_mat(row, s.R2);
  append_diag(row, d);
  return row;
}

std::string inertial_csv_header(std::size_t n) {
  std::string header = "t";
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string b = std::to_string(i);
    for (const char* c : {"_1", "_2", "_3"}) {
      header += ",x" + b + c;
    }
    for (const char* rc : {"_11", "_12", "_13", "_21", "_22", "_23", "_31", "_32",
                           "_33"}) {
      header += ",R" + b + rc;
    }
    for (const char* c : {"_1", "_2", "_3"}) {
      header += ",g" + b + c;
    }
    for (const char* c : {"_1", "_2", "_3"}) {
      header += ",P" + b + c;
    }
  }
  header += ',';
  header += kDiagColumns;
  return header;
}

std::string inertial_csv_row(double t, const InertialStateH& s,
                             const DiagnosticsRecord& d) {
  std::string row;
  append_number(row, t);
  for (const BodyStateH& b : s.bodies) {
    append_vec(row, b.x);
    append_mat(row, b.R);
    append_vec(row, b.gamma);
    append_vec(row, b.Pi);
  }
  append_diag(row, d);
  return row;
}

class RelativeDriver final : public Driver {
public:
  using StepFn = std::function<RelativeStateH(const RelativeStateH&)>;

  RelativeDriver(const SimConfig& cfg, StepFn step)
      : pair_(cfg.pair), state_(cfg.initial), step_(std::move(step)) {}

  void advance() override { state_ = step_(state_); }

  DiagnosticsRecord diagnostics(double t) const override {
    return diagnostics_relative(pair_, state_, t);
  }

  std::string csv_header() const override { return relative_csv_header(); }

  std::string csv_row(double t, const DiagnosticsRecord& d) const override {
    return relative_csv_row(t, state_, d);
  }

  InertialStateH inertial() const override { return reconstruct(pair_, state_); }

private:
  BodyPair pair_;
  RelativeStateH state_;
  StepFn step_;
};

class InertialDriver final : public Driver {
public:
  using StepFn = std::function<InertialStateH(const InertialStateH&)>;

  InertialDriver(const SimConfig& cfg, StepFn step)
      : sys_(to_system(cfg.pair)),
        state_(reconstruct(cfg.pair, cfg.initial)),
        step_(std::move(step)) {}

  void advance() override { state_ = step_(state_); }

  DiagnosticsRecord diagnostics(double t) const override {
    return diagnostics_inertial(sys_, state_, t);
  }

  std::string csv_header() const override {
    return inertial_csv_header(state_.bodies.size());
  }

  std::string csv_row(double t, const DiagnosticsRecord& d) const override {
    return inertial_csv_row(t, state_, d);
  }

  InertialStateH inertial() const override { return state_; }

private:
  NBodySystem sys_;
  InertialStateH state_;
  StepFn step_;
};

// Two-point configuration recursion in relative coordinates. The first step
// is the momentum-form map, which is exactly the discrete fiber-derivative
// initialization of the (q_{k-1}, q_k) pair; every later step runs the pure
// configuration recursion, converting back to momenta only for observables.
class RelativeLagrangianDriver final : public Driver {
public:
  RelativeLagrangianDriver(const SimConfig& cfg, StepStats* stats)
      : pair_(cfg.pair),
        h_(cfg.h),
        solver_(cfg.solver),
        stats_(stats),
        state_(cfg.initial),
        cur_(config_of(cfg.initial)) {}

  void advance() override {
    if (!prev_) {
      state_ = step_relative_hamiltonian(pair_, state_, h_, solver_, stats_);
      prev_ = cur_;
      cur_ = config_of(state_);
      return;
    }
    const RelativeConfig next =
        step_relative_lagrangian(pair_, *prev_, cur_, h_, solver_, stats_);
    state_ = assemble_state(
        next, legendre_to_momenta_relative_next(pair_, cur_, next, h_));
    prev_ = cur_;
    cur_ = next;
  }

  DiagnosticsRecord diagnostics(double t) const override {
    return diagnostics_relative(pair_, state_, t);
  }

  std::string csv_header() const override { return relative_csv_header(); }

  std::string csv_row(double t, const DiagnosticsRecord& d) const override {
    return relative_csv_row(t, state_, d);
  }

  InertialStateH inertial() const override { return reconstruct(pair_, state_); }

private:
  BodyPair pair_;
  double h_;
  SolverConfig solver_;
  StepStats* stats_;
  RelativeStateH state_;
  std::optional<RelativeConfig> prev_;
  RelativeConfig cur_;
};

class InertialLagrangianDriver final : public Driver {
public:
  InertialLagrangianDriver(const SimConfig& cfg, StepStats* stats)
      : sys_(to_system(cfg.pair)),
        h_(cfg.h),
        solver_(cfg.solver),
        stats_(stats),
        state_(reconstruct(cfg.pair, cfg.initial)),
        cur_(config_of(state_)) {}

  void advance() override {
    if (!prev_) {
      state_ = step_inertial_hamiltonian(sys_, state_, h_, solver_, stats_);
      prev_ = cur_;
      cur_ = config_of(state_);
      return;
    }
    const InertialConfig next =
        step_inertial_lagrangian(sys_, *prev_, cur_, h_, solver_, stats_);
    state_ = assemble_state(next, legendre_to_momenta_next(sys_, cur_, next, h_));
    prev_ = cur_;
    cur_ = next;
  }

  DiagnosticsRecord diagnostics(double t) const override {
    return diagnostics_inertial(sys_, state_, t);
  }

  std::string csv_header() const override {
    return inertial_csv_header(state_.bodies.size());
  }

  std::string csv_row(double t, const DiagnosticsRecord& d) const override {
    return inertial_csv_row(t, state_, d);
  }

  InertialStateH inertial() const override { return state_; }

private:
  NBodySystem sys_;
  double h_;
  SolverConfig solver_;
  StepStats* stats_;
  InertialStateH state_;
  std::optional<InertialConfig> prev_;
  InertialConfig cur_;
};

std::unique_ptr<Driver> make_driver(const SimConfig& cfg, StepStats* stats) {
  const double h = cfg.h;
  const SolverConfig solver = cfg.solver;
  switch (cfg.integrator) {
    case Integrator::LgviRelativeH: {
      const BodyPair pair = cfg.pair;
      return std::make_unique<RelativeDriver>(cfg, [=](const RelativeStateH& s) {
        return step_relative_hamiltonian(pair, s, h, solver, stats);
      });
    }
    case Integrator::LgviYoshida4: {
      const BodyPair pair = cfg.pair;
      const CompositionScheme scheme = CompositionScheme::yoshida4();
      return std::make_unique<RelativeDriver>(cfg, [=](const RelativeStateH& s) {
        return composed_step(
            [&](const RelativeStateH& sub, double dt) {
              return step_relative_hamiltonian(pair, sub, dt, solver, stats);
            },
            s, h, scheme);
      });
    }
    case Integrator::Rk4Relative: {
      const BodyPair pair = cfg.pair;
      return std::make_unique<RelativeDriver>(cfg, [=](const RelativeStateH& s) {
        return rk4_step(
            [&](const RelativeStateH& y) { return deriv_relative_hamiltonian(pair, y); },
            s, h);
      });
    }
    case Integrator::LgviInertialH: {
      const NBodySystem sys = to_system(cfg.pair);
      return std::make_unique<InertialDriver>(cfg, [=](const InertialStateH& s) {
        return step_inertial_hamiltonian(sys, s, h, solver, stats);
      });
    }
    case Integrator::Rk4Inertial: {
      const NBodySystem sys = to_system(cfg.pair);
      return std::make_unique<InertialDriver>(cfg, [=](const InertialStateH& s) {
        return rk4_step(
            [&](const InertialStateH& y) { return deriv_inertial_hamiltonian(sys, y); },
            s, h);
      });
    }
    case Integrator::LgviRelativeL:
      return std::make_unique<RelativeLagrangianDriver>(cfg, stats);
    case Integrator::LgviInertialL:
      return std::make_unique<InertialLagrangianDriver>(cfg, stats);
  }
  throw Error("unreachable integrator dispatch");
}

struct Tracker {
  double e0 = 0.0;
  Vec3 gamma0 = Vec3::Zero();
  Vec3 pi0 = Vec3::Zero();
  long long steps = 0;
  RunSummary* summary = nullptr;

  void init(const DiagnosticsRecord& d0, long long n, RunSummary* s) {
    e0 = d0.E;
    gamma0 = d0.gamma_T;
    pi0 = d0.pi_T;
    steps = n;
    summary = s;
    summary->E0 = e0;
    summary->pi0_norm = pi0.norm();
    summary->max_orth_err = d0.orth_err_max;
  }

  void update(const DiagnosticsRecord& d, long long k) {
    const double e_dev = std::abs(d.E - e0);
    summary->max_energy_dev = std::max(summary->max_energy_dev, e_dev);
    summary->max_orth_err = std::max(summary->max_orth_err, d.orth_err_max);
    summary->max_gamma_dev =
        std::max(summary->max_gamma_dev, (d.gamma_T - gamma0).norm());
    summary->max_pi_dev = std::max(summary->max_pi_dev, (d.pi_T - pi0).norm());
    const auto decile =
        static_cast<std::size_t>(std::min<long long>(9, (k - 1) * 10 / steps));
    summary->decile_energy_dev[decile] =
        std::max(summary->decile_energy_dev[decile], e_dev);
  }
};

}  // namespace

double configuration_distance(const InertialStateH& a, const InertialStateH& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.bodies.size(); ++i) {
    sq += (a.bodies[i].x - b.bodies[i].x).squaredNorm();
    sq += (a.bodies[i].R - b.bodies[i].R).squaredNorm();
  }
  return std::sqrt(sq);
}

RunResult run(const SimConfig& cfg, std::ostream* csv) {
  if (!(cfg.h > 0.0)) {
    throw ConfigError("run: h must be positive");
  }
  if (cfg.t_final < 0.0) {
    throw ConfigError("run: t_final must be non-negative");
  }
  if (cfg.sample_every < 1) {
    throw ConfigError("run: sample_every must be at least 1");
  }

  long long n = std::llround(cfg.t_final / cfg.h);
  if (cfg.t_final > 0.0 && n < 1) {
    n = 1;
  }

  StepStats stats;
  std::unique_ptr<Driver> driver = make_driver(cfg, &stats);

  RunResult result;
  result.summary.integrator = std::string(integrator_name(cfg.integrator));
  result.summary.h = cfg.h;
  result.summary.t_final = cfg.t_final;
  result.summary.steps = n;

  Tracker tracker;
  const DiagnosticsRecord d0 = driver->diagnostics(0.0);
  tracker.init(d0, n, &result.summary);
  result.initial = d0;
  result.final = d0;

  if (csv != nullptr) {
    *csv << units_comment(cfg.units) << driver->csv_header() << '\n';
    if (n >= 1) {
      *csv << driver->csv_row(0.0, d0) << '\n';
    }
  }

  const auto start = std::chrono::steady_clock::now();
  for (long long k = 1; k <= n; ++k) {
    try {
      driver->advance();
    } catch (const NoConvergence& e) {
      throw NoConvergence(std::string(e.what()) + " (step " + std::to_string(k) + ")",
                          e.iterations, e.residual);
    } catch (const BodiesOverlap& e) {
      throw BodiesOverlap(std::string(e.what()) + " (step " + std::to_string(k) + ")",
                          e.separation);
    }
    const DiagnosticsRecord d = driver->diagnostics(static_cast<double>(k) * cfg.h);
    tracker.update(d, k);
    result.final = d;
    if (csv != nullptr && (k % cfg.sample_every == 0 || k == n)) {
      *csv << driver->csv_row(static_cast<double>(k) * cfg.h, d) << '\n';
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  result.summary.wall_seconds = std::chrono::duration<double>(stop - start).count();
  result.summary.newton_iterations = stats.newton_iterations;
  result.summary.newton_max_single = stats.max_iterations_single;
  result.final_inertial = driver->inertial();
  return result;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("FULLBODY_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) {
      return static_cast<unsigned>(v);
    }
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

namespace {

void run_jobs(std::vector<std::function<void()>> jobs) {
  const unsigned cap =
      std::min<unsigned>(thread_cap(), static_cast<unsigned>(jobs.size()));
  if (cap <= 1) {
    for (auto& job : jobs) {
      job();
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) {
        break;
      }
      try {
        jobs[i]();
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(cap);
  for (unsigned i = 0; i < cap; ++i) {
    threads.emplace_back(worker);
  }
  for (std::thread& t : threads) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace

CompareReport compare(const SimConfig& cfg, std::ostream* lgvi_csv,
                      std::ostream* rk4_csv) {
  SimConfig lgvi_cfg = cfg;
  if (!integrator_is_lgvi(cfg.integrator)) {
    lgvi_cfg.integrator = Integrator::LgviRelativeH;
  }
  SimConfig rk_cfg = cfg;
  rk_cfg.integrator = integrator_is_relative(lgvi_cfg.integrator)
                          ? Integrator::Rk4Relative
                          : Integrator::Rk4Inertial;

  CompareReport report;
  std::ostringstream lgvi_buf;
  std::ostringstream rk_buf;
  run_jobs({[&] { report.lgvi = run(lgvi_cfg, lgvi_csv ? &lgvi_buf : nullptr).summary; },
            [&] { report.rk4 = run(rk_cfg, rk4_csv ? &rk_buf : nullptr).summary; }});
  if (lgvi_csv != nullptr) {
    *lgvi_csv << lgvi_buf.str();
  }
  if (rk4_csv != nullptr) {
    *rk4_csv << rk_buf.str();
  }
  return report;
}

ConvergenceReport converge(const SimConfig& cfg, std::vector<double> h_list) {
  if (h_list.size() < 3) {
    throw ConfigError("converge: need at least three step sizes");
  }
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) {
      throw ConfigError("converge: step sizes must be strictly decreasing");
    }
  }
  if (!(cfg.t_final > 0.0)) {
    throw ConfigError("converge: t_final must be positive");
  }
  for (double h : h_list) {
    const double steps = cfg.t_final / h;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      throw ConfigError("converge: h = " + std::to_string(h) +
                        " does not divide t_final");
    }
  }

  ConvergenceReport report;
  report.integrator = std::string(integrator_name(cfg.integrator));
  report.t_final = cfg.t_final;
  report.reference_h = h_list.back() / 8.0;

  std::vector<InertialStateH> finals(h_list.size());
  InertialStateH reference;
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    jobs.emplace_back([&, i] {
      SimConfig member = cfg;
      member.h = h_list[i];
      finals[i] = run(member).final_inertial;
    });
  }
  jobs.emplace_back([&] {
    SimConfig member = cfg;
    member.h = report.reference_h;
    reference = run(member).final_inertial;
  });
  run_jobs(std::move(jobs));

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    const double error =
        std::max(configuration_distance(finals[i], reference), 1e-300);
    report.points.push_back({h_list[i], error});
    const double lx = std::log(h_list[i]);
    const double ly = std::log(error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double count = static_cast<double>(h_list.size());
  report.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return report;
}

namespace {

void put_line(std::ostream& out, const char* key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out << key << " = " << buf << '\n';
}

}  // namespace

void write_summary(std::ostream& out, const RunSummary& s, bool include_timing) {
  out << "integrator = " << s.integrator << '\n';
  put_line(out, "h", s.h);
  put_line(out, "t_final", s.t_final);
  out << "steps = " << s.steps << '\n';
  put_line(out, "E0", s.E0);
  put_line(out, "max_energy_dev", s.max_energy_dev);
  put_line(out, "max_orth_err", s.max_orth_err);
  put_line(out, "max_gamma_dev", s.max_gamma_dev);
  put_line(out, "max_pi_dev", s.max_pi_dev);
  put_line(out, "pi0_norm", s.pi0_norm);
  out << "decile_energy_dev =";
  for (double d : s.decile_energy_dev) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    out << ' ' << buf;
  }
  out << '\n';
  out << "newton_iterations = " << s.newton_iterations << '\n';
  out << "newton_max_single = " << s.newton_max_single << '\n';
  if (include_timing) {
    put_line(out, "wall_seconds", s.wall_seconds);
  }
}

void write_compare_report(std::ostream& out, const CompareReport& r) {
  out << "# side-by-side conservation comparison\n";
  out << "[" << r.lgvi.integrator << "]\n";
  write_summary(out, r.lgvi, false);
  out << "\n[" << r.rk4.integrator << "]\n";
  write_summary(out, r.rk4, false);
  out << "\n[contrast]\n";
  put_line(out, "energy_dev_ratio_rk4_over_lgvi",
           r.rk4.max_energy_dev / std::max(r.lgvi.max_energy_dev, 1e-300));
  put_line(out, "orth_err_ratio_rk4_over_lgvi",
           r.rk4.max_orth_err / std::max(r.lgvi.max_orth_err, 1e-300));
}

void write_convergence_report(std::ostream& out, const ConvergenceReport& r) {
  out << "integrator = " << r.integrator << '\n';
  put_line(out, "t_final", r.t_final);
  put_line(out, "reference_h", r.reference_h);
  out << "h,error\n";
  for (const ConvergencePoint& p : r.points) {
    char hb[40];
    char eb[40];
    std::snprintf(hb, sizeof hb, "%.17g", p.h);
    std::snprintf(eb, sizeof eb, "%.17g", p.error);
    out << hb << ',' << eb << '\n';
  }
  put_line(out, "slope", r.slope);
}

}  // namespace fullbody
