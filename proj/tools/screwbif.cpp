// Command-line front end: critical values, mode spectra, branch sweeps,
// time evolution and the invariant suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "screwbif/acceptance.hpp"
#include "screwbif/branch.hpp"
#include "screwbif/config.hpp"
#include "screwbif/error.hpp"
#include "screwbif/evolution.hpp"
#include "screwbif/linear.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace screwbif;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON summaries carry 12 significant digits; CSV keeps 17.
json round12(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.as_map()) j[k] = v;
  return j;
}

std::vector<std::string> provenance(const RunConfig& cfg, const std::string& command) {
  std::vector<std::string> lines{"screwbif " + command};
  for (const auto& l : cfg.lines()) lines.push_back(l);
  return lines;
}

void write_header(std::ostream& os, const RunConfig& cfg, const std::string& command) {
  for (const auto& l : provenance(cfg, command)) os << "# " << l << '\n';
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  std::ofstream os(fs::path(cfg.output_dir) / name);
  if (!os) throw UsageError("cannot write " + (fs::path(cfg.output_dir) / name).string());
  os << std::setprecision(17);
  return os;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  std::ofstream os = open_output(cfg, name);
  os << j.dump(2) << '\n';
}

double auto_dt(const RunConfig& cfg, const Grid& grid) {
  EvolutionOptions eo;
  const double dt_max = max_time_step(grid, eo);
  if (cfg.dt > 0.0) return cfg.dt;
  return cfg.output_interval / std::ceil(cfg.output_interval / dt_max - 1e-9);
}

BranchOptions branch_options(const RunConfig& cfg) {
  BranchOptions o;
  o.grid_points = cfg.N;
  o.tol_outer = cfg.tol_outer;
  o.inner.tol = cfg.tol_inner;
  o.sign = cfg.sign;
  return o;
}

// --- subcommands -------------------------------------------------------------

int cmd_critical(const RunConfig& cfg, int k_min, int k_max, int l_max) {
  if (k_min < 2 || k_max < k_min) throw UsageError("k range must be non-empty and start at >= 2");
  if (l_max < 1) throw UsageError("lmax must be >= 1");
  std::ostringstream table;
  table << std::setprecision(17);
  write_header(table, cfg, "critical");
  table << "k,Omega_k,l,det_Ml\n";
  for (int k = k_min; k <= k_max; ++k) {
    const double Om = critical_omega(k, cfg.R);
    for (int l = 1; l <= l_max; ++l)
      table << k << ',' << Om << ',' << l << ',' << mode_determinant(l, Om, cfg.R) << '\n';
  }
  std::cout << table.str();
  open_output(cfg, "critical.csv") << table.str();
  return 0;
}

int cmd_spectrum(const RunConfig& cfg, std::optional<double> omega, int l_max) {
  const double Om = omega ? *omega : cfg.sign * critical_omega(cfg.k, cfg.R);
  const int lm = l_max > 0 ? l_max : Grid(cfg.R, cfg.N).dealias_cutoff();
  std::ostringstream table;
  table << std::setprecision(17);
  write_header(table, cfg, "spectrum");
  table << "# Omega = " << Om << '\n' << "l,det_Ml,eig1,eig2\n";
  for (int l = 1; l <= lm; ++l) {
    const ModeMatrix M = ModeMatrix::make(l, Om, cfg.R);
    const auto ev = M.eigenvalues();
    table << l << ',' << M.determinant() << ',' << ev[0] << ',' << ev[1] << '\n';
  }
  std::cout << table.str();
  open_output(cfg, "spectrum.csv") << table.str();
  return 0;
}

int cmd_branch(const RunConfig& cfg) {
  const BranchSweep sweep = sweep_branch(cfg.k, cfg.R, cfg.lambda_max, cfg.n_points, branch_options(cfg));

  std::ofstream csv = open_output(cfg, "branch.csv");
  write_header(csv, cfg, "branch");
  csv << "lambda,Omega,deltaV,c,V,residual_sup,dist_to_sigma\n";
  for (size_t i = 0; i < sweep.points.size(); ++i) {
    const BranchPoint& p = sweep.points[i];
    csv << p.lambda << ',' << p.Omega() << ',' << p.deltaV() << ',' << p.c << ',' << p.V << ','
        << p.residual_sup << ',' << p.dist_to_sigma << '\n';
    std::ofstream prof = open_output(cfg, "profile_" + std::to_string(i) + ".csv");
    std::vector<std::string> comments = provenance(cfg, "branch");
    std::ostringstream tag;
    tag << std::setprecision(17) << "lambda = " << p.lambda << ", Omega = " << p.Omega()
        << ", c = " << p.c << ", V = " << p.V;
    comments.push_back(tag.str());
    write_curve_csv(prof, p.profile(), comments);
  }

  const double target = delta_v_coefficient(cfg.k, cfg.R);
  json summary;
  summary["config"] = config_json(cfg);
  summary["k"] = cfg.k;
  summary["R"] = round12(cfg.R);
  summary["points_converged"] = sweep.points.size();
  summary["reachable_lambda"] = round12(sweep.reachable_lambda());
  summary["dVcoeff_estimate"] = round12(sweep.dVcoeff_estimate);
  summary["dVcoeff_target"] = round12(target);
  summary["relative_error"] = round12(std::abs(sweep.dVcoeff_estimate - target) / std::abs(target));
  summary["truncated"] = sweep.truncated;
  summary["warning"] = sweep.warning.empty() ? json(nullptr) : json(sweep.warning);
  write_json(cfg, "summary.json", summary);

  std::cout << "converged " << sweep.points.size() - 1 << " of " << sweep.lambdas.size() - 1
            << " nonzero points; dVcoeff " << std::setprecision(10) << sweep.dVcoeff_estimate
            << " (target " << target << ")\n";
  if (sweep.truncated) std::cerr << "warning: " << sweep.warning << '\n';
  if (sweep.points.size() < 2) {
    std::cerr << "error: no nonzero branch point converged; last good lambda = 0\n";
    return kExitNumeric;
  }
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const BranchOptions bo = branch_options(cfg);
  const BranchPoint p = solve_branch_point(cfg.k, cfg.R, cfg.lambda, bo);
  EvolutionOptions eo;
  eo.output_interval = cfg.output_interval;
  eo.defect_max = cfg.defect_max;
  const double dt = auto_dt(cfg, p.grid());
  const std::vector<EvolutionState> states = integrate(p.profile(), cfg.t_end, dt, eo);
  const DriftReport rep = drift_report(p, states);

  std::ofstream ts = open_output(cfg, "timeseries.csv");
  write_header(ts, cfg, "evolve");
  ts << "# dt = " << dt << '\n';
  ts << "t,dist_sigma,z_center,pointwise_gap,length,arclength_defect\n";
  for (size_t i = 0; i < rep.times.size(); ++i)
    ts << rep.times[i] << ',' << rep.dist_sigma[i] << ',' << rep.z_center[i] << ','
       << rep.pointwise_gap[i] << ',' << rep.length[i] << ',' << rep.arclength_defect[i] << '\n';

  for (size_t i = 0; i < states.size(); i += static_cast<size_t>(cfg.snapshot_every)) {
    std::ofstream snap = open_output(cfg, "snapshot_" + std::to_string(i) + ".csv");
    std::vector<std::string> comments = provenance(cfg, "evolve");
    std::ostringstream tag;
    tag << std::setprecision(17) << "t = " << states[i].t;
    comments.push_back(tag.str());
    write_curve_csv(snap, states[i].curve, comments);
  }

  const double lam = std::abs(cfg.lambda);
  const bool dist_bounded = rep.dist_spread <= 1e-6;
  const bool drift_linear = rep.gamma > 0.0 && rep.fitted_V < 1.0 / cfg.R;
  json verdict;
  verdict["config"] = config_json(cfg);
  verdict["dt"] = round12(dt);
  verdict["dist_bounded"] = {
      {"value", dist_bounded},
      {"sup_dist_over_lambda", lam > 0.0 ? round12(rep.dist_max / lam) : json(0.0)},
      {"dist_spread", round12(rep.dist_spread)}};
  verdict["drift_linear"] = {{"value", drift_linear},
                             {"gamma", round12(rep.gamma)},
                             {"t0", round12(rep.t0)},
                             {"fitted_V", round12(rep.fitted_V)},
                             {"branch_V", round12(p.V)},
                             {"reference_V", round12(1.0 / cfg.R)}};
  write_json(cfg, "verdict.json", verdict);
  std::cout << "dist_bounded " << (dist_bounded ? "true" : "false") << ", drift_linear "
            << (drift_linear ? "true" : "false") << ", fitted_V " << std::setprecision(10)
            << rep.fitted_V << " (branch V " << p.V << ")\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  AcceptanceOptions ao;
  ao.grid_points = cfg.N;
  bool all = true;
  for (int id = 1; id <= 9; ++id) {
    const CriterionResult r = run_criterion(id, ao);
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : kExitNumeric;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Resolution:
    case ErrorCode::Grid:
    case ErrorCode::Mode:
    case ErrorCode::Order:
    case ErrorCode::Parity:
    case ErrorCode::Mean:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Screw-motion bifurcation from the vortex ring: branches and LIE evolution"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  RunConfig defaults;
  std::map<std::string, std::string> flag_values;
  app.add_option("-c,--config", config_path, "flat key = value config file");
  app.add_option("-s,--set", overrides, "override key=value (repeatable)");
  for (const auto& [key, value] : defaults.as_map())
    app.add_option("--" + key, flag_values[key], "config key (default " + value + ")");

  int k_min = 2, k_max = 8, l_max = 20;
  auto* critical = app.add_subcommand("critical", "Omega_k and det M_l(Omega_k) for a k range");
  critical->add_option("--kmin", k_min, "smallest k");
  critical->add_option("--kmax", k_max, "largest k");
  critical->add_option("--lmax", l_max, "largest mode l");

  std::optional<double> omega;
  int spectrum_lmax = 0;
  auto* spectrum = app.add_subcommand("spectrum", "det and eigenvalues of the mode blocks M_l(Omega)");
  spectrum->add_option("--Omega", omega, "angular velocity (default Omega_k)");
  spectrum->add_option("--lmax", spectrum_lmax, "largest mode (default N/3)");

  auto* branch = app.add_subcommand("branch", "continue the k-branch and fit the deltaV law");
  auto* evolve = app.add_subcommand("evolve", "integrate the LIE from a branch profile");
  auto* verify = app.add_subcommand("verify", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [key, value] : flag_values)
      if (!value.empty()) cfg.set(key, value);
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + ov + "'");
      cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
    }
    cfg.validate();

    if (*critical) return cmd_critical(cfg, k_min, k_max, l_max);
    if (*spectrum) return cmd_spectrum(cfg, omega, spectrum_lmax);
    if (*branch) return cmd_branch(cfg);
    if (*evolve) return cmd_evolve(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
