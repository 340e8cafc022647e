#include "mosquito/cli.h"

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "mosquito/dynamics.h"
#include "mosquito/errors.h"
#include "mosquito/io.h"
#include "mosquito/model.h"
#include "mosquito/stability.h"

namespace mosquito::cli {
namespace {

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ParamValues params;
  double x0 = 0;
  double y0 = 0;
  std::size_t budget = kDefaultBudget;
  std::size_t window = kDefaultWindow;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::optional<double> span;
  GridAxis x_axis;
  GridAxis y_axis;
  unsigned workers = 0;
};

constexpr double kSumIdentityTolerance = 1e-12;
constexpr std::size_t kAdultBoundHorizon = 100;

void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure("cannot open output file: " + path);
  emit(file);
  file.flush();
  if (!file) throw IoFailure("failed writing output file: " + path);
}

void require_positive_count(std::size_t v, const char* flag) {
  if (v < 1) throw ConfigurationError(std::string(flag) + " must be >= 1");
}

Params analysis_params(const RunConfig& cfg) {
  Params p(cfg.params);
  require_analysis_valid(p);
  return p;
}

std::string state_text(State s) {
  return "(" + io::format_double(s.x) + ", " + io::format_double(s.y) + ")";
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Params params = analysis_params(cfg);
  const State s0{cfg.x0, cfg.y0};
  require_quadrant(s0);
  require_positive_count(cfg.budget, "--budget");
  require_positive_count(cfg.window, "--window");

  if (!cfg.out_path.empty()) {
    const Trajectory traj = iterate(params, s0, cfg.budget, cfg.window);
    write_output(cfg.out_path, out, [&](std::ostream& os) {
      if (cfg.format == "json") {
        io::write_trajectory_json(os, traj);
      } else {
        io::write_trajectory_csv(os, traj);
      }
    });
  }

  const TrajectoryOutcome fate = classify_fate(params, s0, cfg.budget);
  out << "verdict=" << to_string(fate.verdict)
      << " iterations=" << fate.iterations
      << " final_x=" << io::format_double(fate.final_state.x)
      << " final_y=" << io::format_double(fate.final_state.y);
  if (fate.basis) out << " basis=" << to_string(*fate.basis);
  if (fate.y_limit_estimate) {
    out << " y_limit=" << io::format_double(*fate.y_limit_estimate);
  }
  out << '\n';
  return kSuccess;
}

int cmd_fixed_points(const RunConfig& cfg, std::ostream& out) {
  const Params params = analysis_params(cfg);
  const FixedPointReport report = find_fixed_points(params);
  write_output(cfg.out_path, out, [&](std::ostream& os) {
    os << io::to_json(report).dump(2) << '\n';
  });
  return kSuccess;
}

int cmd_basin(const RunConfig& cfg, std::ostream& out) {
  const Params params = analysis_params(cfg);
  require_positive_count(cfg.budget, "--budget");
  const BasinGrid grid =
      basin_scan(params, cfg.x_axis, cfg.y_axis, cfg.budget, cfg.workers);
  write_output(cfg.out_path, out,
               [&](std::ostream& os) { io::write_basin_csv(os, grid); });
  return kSuccess;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params params = analysis_params(cfg);
  require_positive_count(cfg.samples, "--samples");
  if (!has_interior_fixed_point(params)) {
    throw ConfigurationError(
        "check: invariance needs beta > mu (1 + gamma mu / alpha)");
  }
  if (cfg.span && !(*cfg.span > 0)) {
    throw ConfigurationError("check: --span must be > 0");
  }

  bool all_passed = true;
  const auto verdict = [&](bool ok) {
    all_passed = all_passed && ok;
    return ok ? "pass" : "FAIL";
  };

  std::uint64_t seed = cfg.seed;
  for (Region region : {Region::LowerBox, Region::UpperQuadrant}) {
    const InvarianceReport r =
        check_invariance(params, region, cfg.samples, seed++, cfg.span);
    out << "invariance " << to_string(region) << ": " << verdict(r.passed())
        << " samples=" << r.samples << " escapes=" << r.escapes;
    if (r.counterexample) {
      out << " counterexample=" << state_text(*r.counterexample) << " -> "
          << state_text(*r.counterexample_image);
    }
    out << '\n';
  }

  const SumIdentityReport sums =
      check_sum_identity(params, cfg.samples, seed++);
  const bool sums_ok = sums.max_scaled_residual <= kSumIdentityTolerance;
  out << "sum-identity: " << verdict(sums_ok) << " samples=" << sums.samples
      << " max_residual=" << io::format_double(sums.max_abs_residual)
      << " max_scaled_residual=" << io::format_double(sums.max_scaled_residual);
  if (!sums_ok) out << " counterexample=" << state_text(sums.worst);
  out << '\n';

  const AdultBoundReport bound =
      check_adult_bound(params, cfg.samples, kAdultBoundHorizon, seed++);
  out << "adult-bound: " << verdict(bound.passed())
      << " starts=" << bound.starts << " horizon=" << kAdultBoundHorizon
      << " violations=" << bound.violations;
  if (bound.counterexample) {
    out << " counterexample=" << state_text(*bound.counterexample);
  }
  out << '\n';

  if (!all_passed) {
    err << "error: property falsified\n";
    return kFalsified;
  }
  return kSuccess;
}

void add_param_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--alpha", cfg.params.alpha, "maximum emergence rate")
      ->required();
  sub->add_option("--beta", cfg.params.beta, "adult birth rate")->required();
  sub->add_option("--gamma", cfg.params.gamma, "Allee constant")->required();
  sub->add_option("--mu", cfg.params.mu, "adult death rate")->required();
  sub->add_option("--d0", cfg.params.d0, "larval death rate (must be 0)");
  sub->add_option("--d1", cfg.params.d1, "larval crowding death (must be 0)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Discrete-time wild mosquito population with Allee effects",
               "mosquito"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* simulate =
      app.add_subcommand("simulate", "iterate one orbit and classify its fate");
  add_param_options(simulate, cfg);
  simulate->add_option("--x0", cfg.x0, "initial larvae")->required();
  simulate->add_option("--y0", cfg.y0, "initial adults")->required();
  simulate->add_option("--budget", cfg.budget, "maximum iterations");
  simulate->add_option("--window", cfg.window,
                       "points kept at each end of long trajectories");
  simulate->add_option("--out", cfg.out_path, "trajectory output file");
  simulate->add_option("--format", cfg.format, "trajectory format")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* fixed =
      app.add_subcommand("fixed-points", "fixed points and their types (JSON)");
  add_param_options(fixed, cfg);
  fixed->add_option("--out", cfg.out_path, "output file (default stdout)");

  CLI::App* basin =
      app.add_subcommand("basin", "classify a grid of initial conditions");
  add_param_options(basin, cfg);
  basin->add_option("--x-min", cfg.x_axis.lo)->required();
  basin->add_option("--x-max", cfg.x_axis.hi)->required();
  basin->add_option("--nx", cfg.x_axis.count)->required();
  basin->add_option("--y-min", cfg.y_axis.lo)->required();
  basin->add_option("--y-max", cfg.y_axis.hi)->required();
  basin->add_option("--ny", cfg.y_axis.count)->required();
  basin->add_option("--budget", cfg.budget, "maximum iterations per cell");
  basin->add_option("--workers", cfg.workers, "threads (0 = all cores)");
  basin->add_option("--out", cfg.out_path, "output file (default stdout)");

  CLI::App* check =
      app.add_subcommand("check", "sampled invariance and identity checks");
  add_param_options(check, cfg);
  check->add_option("--seed", cfg.seed, "random seed");
  check->add_option("--samples", cfg.samples, "samples per property");
  check->add_option("--span", cfg.span,
                    "upper-quadrant sampling window (default 10 max(x*, y*))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(cfg, out);
    if (*fixed) return cmd_fixed_points(cfg, out);
    if (*basin) return cmd_basin(cfg, out);
    if (*check) return cmd_check(cfg, out, err);
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const InternalConsistencyError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kConfigError;
}

}  // namespace mosquito::cli
