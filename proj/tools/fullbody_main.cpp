// Batch front end: simulate / compare / converge over plain-text run configs.
//
// Exit codes: 0 success, 2 config error, 3 solver non-convergence,
// 4 body overlap, 1 anything else.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fullbody/simulation.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fullbody;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitOverlap = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  int sample_every = 0;       // 0: keep config value
  std::string integrator;     // empty: keep config value
};

SimConfig load(const CommonOptions& opt) {
  SimConfig cfg = load_config(opt.config_path);
  if (!opt.out_dir.empty()) {
    cfg.out_dir = opt.out_dir;
  }
  if (opt.sample_every > 0) {
    cfg.sample_every = opt.sample_every;
  }
  if (!opt.integrator.empty()) {
    cfg.integrator = integrator_from_name(opt.integrator);
  }
  return cfg;
}

fs::path prepare_out_dir(const SimConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << contents;
}

int run_simulate(const CommonOptions& opt) {
  const SimConfig cfg = load(opt);
  const fs::path dir = prepare_out_dir(cfg);

  std::ostringstream csv;
  const RunResult result = run(cfg, &csv);
  write_file(dir / "trajectory.csv", csv.str());

  std::ostringstream summary;
  write_summary(summary, result.summary, true);
  write_file(dir / "summary.txt", summary.str());

  std::cout << summary.str();
  std::cout << "wrote " << (dir / "trajectory.csv").string() << '\n';
  return kExitOk;
}

int run_compare(const CommonOptions& opt) {
  const SimConfig cfg = load(opt);
  const fs::path dir = prepare_out_dir(cfg);

  std::ostringstream lgvi_csv;
  std::ostringstream rk4_csv;
  const CompareReport report = compare(cfg, &lgvi_csv, &rk4_csv);
  write_file(dir / "lgvi.csv", lgvi_csv.str());
  write_file(dir / "rk4.csv", rk4_csv.str());

  std::ostringstream text;
  write_compare_report(text, report);
  write_file(dir / "compare_report.txt", text.str());

  std::cout << text.str();
  std::cout << "lgvi wall_seconds = " << report.lgvi.wall_seconds << '\n'
            << "rk4 wall_seconds = " << report.rk4.wall_seconds << '\n'
            << "wrote " << (dir / "compare_report.txt").string() << '\n';
  return kExitOk;
}

int run_converge(const CommonOptions& opt, const std::vector<double>& steps) {
  const SimConfig cfg = load(opt);
  const fs::path dir = prepare_out_dir(cfg);

  const ConvergenceReport report = converge(cfg, steps);

  std::ostringstream text;
  write_convergence_report(text, report);
  write_file(dir / "order_report.txt", text.str());

  std::cout << text.str();
  std::cout << "wrote " << (dir / "order_report.txt").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigid two-body gravity simulator with group-preserving integrators"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<double> steps;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config_path, "run configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
    sub->add_option("--sample-every", opt.sample_every,
                    "CSV sampling stride (overrides config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--integrator", opt.integrator,
                    "integrator name (overrides config)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  add_common(simulate);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "variational vs Runge-Kutta on one config");
  add_common(compare_cmd);
  CLI::App* converge_cmd =
      app.add_subcommand("converge", "measured order of accuracy across step sizes");
  add_common(converge_cmd);
  converge_cmd
      ->add_option("--steps", steps, "comma-separated step sizes, decreasing")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(opt);
    }
    if (compare_cmd->parsed()) {
      return run_compare(opt);
    }
    return run_converge(opt, steps);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidPhysicalUnits& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoConvergence& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const BodiesOverlap& e) {
    std::cerr << "overlap error: " << e.what() << '\n';
    return kExitOverlap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
