#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kerrqfi/qfi.hpp"

namespace kerrqfi {

inline constexpr const char* engine_version = "0.1.0";

enum class ProbeFamily { gaussian, kerr_coherent, kerr_squeezed };

const char* to_string(ProbeFamily family);
ProbeFamily parse_probe_family(const std::string& name);

struct SweepAxis {
  std::string param;  // nalpha | gamma | nsq | beta | n
  double start = 0.0, stop = 0.0;
  int count = 0;
  bool log = false;
};

struct SweepConfig {
  Task task = Task::displacement;
  ProbeFamily family = ProbeFamily::kerr_coherent;
  std::map<std::string, double> fixed;  // gamma, nalpha, nsq, n, phi
  SweepAxis axis;
  bool optimize_phi = false;
  bool optimize_beta = false;
  std::vector<double> reference_nsq;  // dashed Gaussian baselines
  std::string out_csv, out_svg;
  int workers = 0;       // 0 = hardware concurrency
  int dim_cap = 1024;
  int dim_override = 0;  // 0 = auto per point
  bool verify_truncation = false;

  void validate() const;  // std::invalid_argument on malformed configs
};

struct SweepRow {
  double axis_value = 0, qfi = 0, phi = 0, beta = 0;
  double nong = 0, nong_norm = 0, leakage = 0;
  int dim_used = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepConfig config;
  std::string version;    // engine version
  std::string timestamp;  // wall-clock; never written into the CSV
};

// One row per grid point, computed independently (worker pool), ordered by
// grid index. A truncation failure at any point aborts the whole sweep.
SweepResult run_sweep(const SweepConfig& config);

// CSV with the fixed column set
//   axis,qfi,optimal_phi,optimal_beta,nong,nong_normalized,leakage,dim_used
// printed at 12 significant digits; atomic (temp file + rename).
void emit_csv(const SweepResult& result, const std::string& path);

// Rows back from an emitted CSV; emit(parse(file)) is byte-identical.
std::vector<SweepRow> parse_csv(const std::string& path);

// Solid polyline of the sweep plus dashed Gaussian baselines at the given
// squeezing photon numbers.
void emit_svg(const SweepResult& result, const std::vector<double>& reference_nsq,
              const std::string& path);

// 12-significant-digit formatting used for every CSV number.
std::string format_g12(double v);

// INI-style config file (top-level keys plus [fixed]/[sweep]/[output]/[reference]).
SweepConfig load_config_file(const std::string& path);

// Bundled figure presets (fig1-top ... fig3-bottom).
struct FigureFiles {
  std::string csv, svg;
};
std::vector<std::string> figure_preset_names();
FigureFiles run_figure_preset(const std::string& name, const std::string& out_dir,
                              int workers = 0, int dim_cap = 1024);

// The sweep configurations a preset runs, in CSV block order.
std::vector<SweepConfig> figure_preset_curves(const std::string& name);

// Oracle-equivalence checks (closed forms vs the Fock engine); returns the
// number of failed checks, printing one line per check.
int selftest(std::ostream& out);

}  // namespace kerrqfi
