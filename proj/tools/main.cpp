// kerrqfi: quantum Fisher information for displacement and squeezing
// estimation with Gaussian and Kerr-evolved Gaussian probes.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "kerrqfi/nong.hpp"
#include "kerrqfi/sweep.hpp"

namespace {

using namespace kerrqfi;

std::string resolve_output(const std::string& path) {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  const char* base = std::getenv("KERRQFI_OUT_DIR");
  if (!base || !*base) return path;
  std::filesystem::create_directories(base);
  return (std::filesystem::path(base) / path).string();
}

struct QfiArgs {
  std::string task = "displacement";
  std::string probe = "coherent";
  double nalpha = 0, nsq = 0, phi = 0, gamma = 0;
  int dim = 0;
  std::string optimize;
  bool verify = false;
};

int run_qfi(const QfiArgs& args) {
  const Task task = parse_task(args.task);
  if (args.nalpha < 0 || args.nsq < 0 || args.gamma < 0)
    throw std::domain_error("photon numbers and gamma must be >= 0");

  ProbeSpec spec;
  spec.alpha_mag = std::sqrt(std::max(0.0, args.nalpha));
  spec.phi = wrap_angle(args.phi);
  spec.r = std::asinh(std::sqrt(std::max(0.0, args.nsq)));
  spec.gamma = args.gamma;
  spec.dim = args.dim;
  if (args.probe == "coherent") {
    spec.r = 0;
    spec.gamma = 0;
  } else if (args.probe == "squeezed") {
    spec.alpha_mag = 0;
    spec.gamma = 0;
  } else if (args.probe == "displaced-squeezed") {
    spec.gamma = 0;
  } else if (args.probe == "kerr-coherent") {
    spec.r = 0;
  } else if (args.probe != "kerr-squeezed") {
    throw std::invalid_argument(
        "unknown probe '" + args.probe +
        "' (coherent|squeezed|displaced-squeezed|kerr-coherent|kerr-squeezed)");
  }

  QfiOptions opts;
  opts.verify_truncation = args.verify;

  const bool opt_phi = args.optimize.find("phi") != std::string::npos;
  const bool opt_beta = args.optimize.find("beta") != std::string::npos;

  QfiResult result;
  if (opt_beta) {
    result = optimize_phase_and_fraction(spec.mean_photons(), spec.gamma, task, opts);
  } else if (opt_phi) {
    result = optimize_phase(spec, task, opts);
  } else {
    spec.dim = spec.resolved_dim();
    result.value = qfi_pure(build_probe(spec), task, opts);
    result.probe = spec;
    result.dim_used = spec.dim;
  }

  const FockState state = build_probe(result.probe);
  std::cout << "task = " << to_string(task) << "\n"
            << "probe = " << args.probe << "\n"
            << "qfi = " << format_g12(result.value) << "\n";
  if (result.optimal_phi) std::cout << "optimal_phi = " << format_g12(*result.optimal_phi) << "\n";
  if (result.optimal_beta)
    std::cout << "optimal_beta = " << format_g12(*result.optimal_beta) << "\n";
  std::cout << "nong = " << format_g12(nong_entropic(state)) << "\n";
  if (result.probe.n_alpha() > 0)
    std::cout << "nong_normalized = "
              << format_g12(nong_normalized(state, result.probe.n_alpha())) << "\n";
  std::cout << "leakage = " << format_g12(leakage(state)) << "\n"
            << "dim = " << state.dim() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information for displacement and squeezing estimation\n"
               "with Gaussian and Kerr-evolved Gaussian probes"};
  app.require_subcommand(1);

  // qfi: single-point evaluation
  QfiArgs qfi_args;
  auto* qfi_cmd = app.add_subcommand("qfi", "Evaluate the QFI for a single probe");
  qfi_cmd->add_option("--task", qfi_args.task, "displacement|squeezing");
  qfi_cmd->add_option("--probe", qfi_args.probe,
                      "coherent|squeezed|displaced-squeezed|kerr-coherent|kerr-squeezed");
  qfi_cmd->add_option("--nalpha", qfi_args.nalpha, "amplitude photons |alpha|^2");
  qfi_cmd->add_option("--nsq", qfi_args.nsq, "squeezing photons sinh^2 r");
  qfi_cmd->add_option("--phi", qfi_args.phi, "coherent phase (radians)");
  qfi_cmd->add_option("--gamma", qfi_args.gamma, "Kerr coupling");
  qfi_cmd->add_option("--dim", qfi_args.dim, "truncation dimension (0 = auto)");
  qfi_cmd->add_option("--optimize", qfi_args.optimize, "phi, beta or phi,beta");
  qfi_cmd->add_flag("--verify-truncation", qfi_args.verify,
                    "recompute at 1.25x dimension and compare");

  // sweep
  std::string cfg_path, sweep_spec, out_csv, out_svg, sweep_task, sweep_probe, sweep_opt;
  std::optional<double> f_gamma, f_nalpha, f_nsq, f_phi, f_n;
  int sweep_workers = -1, sweep_dim = -1;
  bool sweep_verify = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep to CSV/SVG");
  sweep_cmd->add_option("--config", cfg_path, "config file (key = value with sections)");
  sweep_cmd->add_option("--task", sweep_task, "displacement|squeezing");
  sweep_cmd->add_option("--probe", sweep_probe, "gaussian|kerr-coherent|kerr-squeezed");
  sweep_cmd->add_option("--gamma", f_gamma, "fixed Kerr coupling");
  sweep_cmd->add_option("--nalpha", f_nalpha, "fixed amplitude photons");
  sweep_cmd->add_option("--nsq", f_nsq, "fixed squeezing photons");
  sweep_cmd->add_option("--phi", f_phi, "fixed coherent phase");
  sweep_cmd->add_option("--n", f_n, "fixed total photons (for beta sweeps)");
  sweep_cmd->add_option("--optimize", sweep_opt, "phi, beta or phi,beta");
  sweep_cmd->add_option("--sweep", sweep_spec, "param:start:stop:count[:log]");
  sweep_cmd->add_option("--dim", sweep_dim, "fixed truncation dimension (0 = auto)");
  sweep_cmd->add_option("--out-csv", out_csv, "CSV output path");
  sweep_cmd->add_option("--out-svg", out_svg, "SVG output path");
  sweep_cmd->add_option("--workers", sweep_workers, "worker threads (0 = hardware)");
  sweep_cmd->add_flag("--verify-truncation", sweep_verify, "per-point truncation check");

  // figures
  std::string preset = "all", fig_dir;
  int fig_workers = 0, fig_dim_cap = 1024;
  auto* fig_cmd = app.add_subcommand("figures", "Regenerate bundled figure presets");
  fig_cmd->add_option("preset", preset, "preset name or 'all'");
  fig_cmd->add_option("--out-dir", fig_dir, "output directory (default $KERRQFI_OUT_DIR or .)");
  fig_cmd->add_option("--workers", fig_workers, "worker threads (0 = hardware)");
  fig_cmd->add_option("--dim", fig_dim_cap, "cap on per-point auto dimensions");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the oracle-equivalence suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (qfi_cmd->parsed()) return run_qfi(qfi_args);

    if (sweep_cmd->parsed()) {
      SweepConfig config;
      if (!cfg_path.empty()) config = load_config_file(cfg_path);
      if (!sweep_task.empty()) config.task = parse_task(sweep_task);
      if (!sweep_probe.empty()) config.family = parse_probe_family(sweep_probe);
      if (f_gamma) config.fixed["gamma"] = *f_gamma;
      if (f_nalpha) config.fixed["nalpha"] = *f_nalpha;
      if (f_nsq) config.fixed["nsq"] = *f_nsq;
      if (f_phi) config.fixed["phi"] = *f_phi;
      if (f_n) config.fixed["n"] = *f_n;
      if (!sweep_opt.empty()) {
        config.optimize_phi = sweep_opt.find("phi") != std::string::npos;
        config.optimize_beta = sweep_opt.find("beta") != std::string::npos;
      }
      if (!sweep_spec.empty()) {
        SweepAxis axis;
        std::stringstream ss(sweep_spec);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() < 4 || parts.size() > 5)
          throw std::invalid_argument("--sweep expects param:start:stop:count[:log]");
        axis.param = parts[0];
        axis.start = std::stod(parts[1]);
        axis.stop = std::stod(parts[2]);
        axis.count = std::stoi(parts[3]);
        axis.log = parts.size() == 5 && parts[4] == "log";
        config.axis = axis;
      }
      if (sweep_workers >= 0) config.workers = sweep_workers;
      if (sweep_dim >= 0) config.dim_override = sweep_dim;
      if (sweep_verify) config.verify_truncation = true;
      if (!out_csv.empty()) config.out_csv = out_csv;
      if (!out_svg.empty()) config.out_svg = out_svg;

      const SweepResult result = run_sweep(config);
      std::cout << "# " << to_string(result.config.task) << " / "
                << to_string(result.config.family) << ", " << result.rows.size()
                << " points, engine " << result.version << ", " << result.timestamp << "\n";
      if (!config.out_csv.empty()) {
        const std::string path = resolve_output(config.out_csv);
        emit_csv(result, path);
        std::cout << "wrote " << path << "\n";
      } else {
        std::cout << "axis qfi" << "\n";
        for (const auto& r : result.rows)
          std::cout << format_g12(r.axis_value) << " " << format_g12(r.qfi) << "\n";
      }
      if (!config.out_svg.empty()) {
        const std::string path = resolve_output(config.out_svg);
        emit_svg(result, config.reference_nsq, path);
        std::cout << "wrote " << path << "\n";
      }
      return 0;
    }

    if (fig_cmd->parsed()) {
      std::string dir = fig_dir;
      if (dir.empty()) {
        const char* env = std::getenv("KERRQFI_OUT_DIR");
        dir = env && *env ? env : ".";
      }
      std::vector<std::string> names =
          preset == "all" ? figure_preset_names() : std::vector<std::string>{preset};
      for (const auto& name : names) {
        const FigureFiles files = run_figure_preset(name, dir, fig_workers, fig_dim_cap);
        std::cout << "wrote " << files.csv << "\n" << "wrote " << files.svg << "\n";
      }
      return 0;
    }

    if (selftest_cmd->parsed()) {
      const int failures = selftest(std::cout);
      std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
