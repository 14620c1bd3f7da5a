#include "kerrqfi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kerrqfi/nong.hpp"
#include "kerrqfi/svg.hpp"

namespace kerrqfi {

namespace {

constexpr const char* csv_header =
    "axis,qfi,optimal_phi,optimal_beta,nong,nong_normalized,leakage,dim_used";

const std::set<std::string> sweepable_params = {"nalpha", "gamma", "nsq", "beta", "n", "phi"};

std::vector<double> grid_values(const SweepAxis& axis) {
  std::vector<double> xs(axis.count);
  if (axis.log) {
    const double llo = std::log(axis.start), lhi = std::log(axis.stop);
    for (int i = 0; i < axis.count; ++i)
      xs[i] = std::exp(llo + (lhi - llo) * i / (axis.count - 1));
    xs.back() = axis.stop;
  } else {
    for (int i = 0; i < axis.count; ++i)
      xs[i] = axis.start + (axis.stop - axis.start) * i / (axis.count - 1);
  }
  return xs;
}

double fixed_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

SweepRow eval_point(const SweepConfig& config, double x) {
  std::map<std::string, double> params = config.fixed;
  params[config.axis.param] = x;

  const double gamma = config.family == ProbeFamily::gaussian ? 0.0 : fixed_or(params, "gamma", 0.0);

  QfiOptions opts;
  opts.dim_cap = config.dim_cap;
  opts.verify_truncation = config.verify_truncation;

  SweepRow row;
  row.axis_value = x;

  ProbeSpec spec;
  if (config.optimize_beta) {
    const double n = fixed_or(params, "n", -1.0);
    if (n < 0) throw std::invalid_argument("sweep: optimize=beta requires a total photon number 'n'");
    QfiResult res = optimize_phase_and_fraction(n, gamma, config.task, opts);
    row.qfi = res.value;
    row.phi = res.optimal_phi.value_or(0.0);
    row.beta = res.optimal_beta.value_or(0.0);
    spec = res.probe;
  } else {
    double n_alpha = fixed_or(params, "nalpha", 0.0);
    double n_sq = config.family == ProbeFamily::kerr_coherent ? 0.0 : fixed_or(params, "nsq", 0.0);
    if (params.count("beta")) {
      const double n = fixed_or(params, "n", -1.0);
      if (n < 0) throw std::invalid_argument("sweep: parameter 'beta' requires 'n'");
      const double beta = params.at("beta");
      n_sq = beta * n;
      n_alpha = (1.0 - beta) * n;
    }
    spec.alpha_mag = std::sqrt(std::max(0.0, n_alpha));
    spec.r = std::asinh(std::sqrt(std::max(0.0, n_sq)));
    spec.gamma = gamma;
    spec.dim = config.dim_override;
    if (config.optimize_phi) {
      QfiResult res = optimize_phase(spec, config.task, opts);
      row.qfi = res.value;
      row.phi = res.optimal_phi.value_or(0.0);
      spec = res.probe;
    } else {
      spec.phi = wrap_angle(fixed_or(params, "phi", 0.0));
      spec.dim = spec.resolved_dim(config.dim_cap);
      row.qfi = qfi_pure(build_probe(spec), config.task, opts);
      row.phi = spec.phi;
    }
    row.beta = spec.squeezing_fraction();
  }

  const FockState probe = build_probe(spec);
  row.nong = nong_entropic(probe);
  // Raw ratio: the [0, 1] bound of nong_normalized is a theorem only when the
  // probe's whole energy sits in the amplitude (the Kerr-coherent family);
  // squeezed families can exceed delta_m(N_alpha).
  row.nong_norm = spec.n_alpha() > 0 ? row.nong / max_nong(spec.n_alpha()) : 0.0;
  row.leakage = leakage(probe);
  row.dim_used = probe.dim();
  if (!std::isfinite(row.qfi) || row.qfi < 0)
    throw inconsistency_error("sweep: non-finite or negative QFI");
  return row;
}

std::vector<SweepRow> run_rows(const SweepConfig& config, const std::vector<double>& grid) {
  std::vector<SweepRow> rows(grid.size());
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = config.workers > 0
                          ? config.workers
                          : std::max(1, static_cast<int>(std::min<unsigned>(hw ? hw : 1, 16)));

  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::vector<std::pair<size_t, std::string>> errors;

  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        rows[i] = eval_point(config, grid[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.emplace_back(i, e.what());
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (!errors.empty()) {
    auto worst = *std::min_element(errors.begin(), errors.end());
    std::ostringstream os;
    os << "sweep aborted at grid point " << worst.first << " (" << config.axis.param << " = "
       << grid[worst.first] << "): " << worst.second;
    throw sweep_error(os.str());
  }
  return rows;
}

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_rows_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (path.empty()) throw std::invalid_argument("emit_csv: empty output path");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + tmp + "'");
    out << csv_header << "\n";
    for (const auto& r : rows) {
      out << format_g12(r.axis_value) << ',' << format_g12(r.qfi) << ',' << format_g12(r.phi)
          << ',' << format_g12(r.beta) << ',' << format_g12(r.nong) << ','
          << format_g12(r.nong_norm) << ',' << format_g12(r.leakage) << ',' << r.dim_used
          << "\n";
    }
    if (!out.good()) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("emit_csv: write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("emit_csv: rename to '" + path + "' failed: " + ec.message());
  }
}

}  // namespace

const char* to_string(ProbeFamily family) {
  switch (family) {
    case ProbeFamily::gaussian: return "gaussian";
    case ProbeFamily::kerr_coherent: return "kerr-coherent";
    case ProbeFamily::kerr_squeezed: return "kerr-squeezed";
  }
  return "?";
}

ProbeFamily parse_probe_family(const std::string& name) {
  if (name == "gaussian") return ProbeFamily::gaussian;
  if (name == "kerr-coherent") return ProbeFamily::kerr_coherent;
  if (name == "kerr-squeezed") return ProbeFamily::kerr_squeezed;
  throw std::invalid_argument("unknown probe family '" + name +
                              "' (gaussian|kerr-coherent|kerr-squeezed)");
}

void SweepConfig::validate() const {
  if (axis.count < 2) throw std::invalid_argument("sweep: count must be >= 2");
  if (!(axis.start < axis.stop)) throw std::invalid_argument("sweep: start must be < stop");
  if (axis.log && axis.start <= 0)
    throw std::invalid_argument("sweep: log spacing requires start > 0");
  if (!sweepable_params.count(axis.param))
    throw std::invalid_argument("sweep: unknown parameter '" + axis.param + "'");
  for (const auto& [key, value] : fixed) {
    if (!sweepable_params.count(key))
      throw std::invalid_argument("sweep: unknown fixed parameter '" + key + "'");
    if (key != "phi" && value < 0)
      throw std::invalid_argument("sweep: fixed parameter '" + key + "' must be >= 0");
    if (key == "beta" && value > 1) throw std::invalid_argument("sweep: beta must be <= 1");
  }
  if (axis.param == "beta" && (axis.start < 0 || axis.stop > 1))
    throw std::invalid_argument("sweep: beta range must lie in [0, 1]");
  if (family == ProbeFamily::gaussian && fixed_or(fixed, "gamma", 0.0) != 0.0)
    throw std::invalid_argument("sweep: probe family 'gaussian' has gamma = 0");
  if (family == ProbeFamily::kerr_coherent && fixed_or(fixed, "nsq", 0.0) != 0.0)
    throw std::invalid_argument("sweep: probe family 'kerr-coherent' has nsq = 0");
  if (optimize_beta && axis.param != "n" && !fixed.count("n"))
    throw std::invalid_argument("sweep: optimize=beta requires the total photon number 'n'");
  if (workers < 0 || dim_cap < 0 || dim_override < 0)
    throw std::invalid_argument("sweep: workers/dim values must be >= 0");
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  result.version = engine_version;
  result.timestamp = now_iso8601();
  result.rows = run_rows(config, grid_values(config.axis));
  return result;
}

std::string format_g12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  write_rows_csv(result.rows, path);
}

std::vector<SweepRow> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != csv_header)
    throw std::runtime_error("parse_csv: '" + path + "' has an unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string, 8> cells;
    size_t pos = 0;
    for (int c = 0; c < 8; ++c) {
      const size_t comma = line.find(',', pos);
      if (comma == std::string::npos && c < 7)
        throw std::runtime_error("parse_csv: malformed row in '" + path + "'");
      cells[c] = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      pos = comma + 1;
    }
    SweepRow r;
    r.axis_value = std::stod(cells[0]);
    r.qfi = std::stod(cells[1]);
    r.phi = std::stod(cells[2]);
    r.beta = std::stod(cells[3]);
    r.nong = std::stod(cells[4]);
    r.nong_norm = std::stod(cells[5]);
    r.leakage = std::stod(cells[6]);
    r.dim_used = std::stoi(cells[7]);
    rows.push_back(r);
  }
  return rows;
}

void emit_svg(const SweepResult& result, const std::vector<double>& reference_nsq,
              const std::string& path) {
  if (result.rows.size() < 2)
    throw std::invalid_argument("emit_svg: need at least 2 rows (degenerate plot)");

  SvgPlot plot;
  plot.xlabel = result.config.axis.param;
  plot.ylabel = result.config.task == Task::displacement ? "QFI H(d)" : "QFI H(s)";
  plot.xlog = result.config.axis.log;

  SvgSeries solid;
  {
    std::ostringstream label;
    label << to_string(result.config.family);
    const double gamma = fixed_or(result.config.fixed, "gamma", 0.0);
    if (result.config.family != ProbeFamily::gaussian && result.config.axis.param != "gamma")
      label << ", gamma=" << gamma;
    solid.label = label.str();
  }
  for (const auto& r : result.rows) solid.points.push_back({r.axis_value, r.qfi});
  plot.series.push_back(std::move(solid));

  const char* ref_colors[] = {"#404040", "#707070", "#a0a0a0"};
  int ci = 0;
  for (double nsq : reference_nsq) {
    SvgSeries ref;
    ref.dashed = true;
    ref.color = ref_colors[ci++ % 3];
    std::ostringstream label;
    label << "Gaussian N_sq=" << nsq;
    ref.label = label.str();
    if (result.config.task == Task::displacement) {
      const double h = gaussian_qfi_displacement(nsq, 1.0);
      ref.points.push_back({result.rows.front().axis_value, h});
      ref.points.push_back({result.rows.back().axis_value, h});
    } else if (result.config.axis.param == "nalpha") {
      for (const auto& r : result.rows)
        ref.points.push_back({r.axis_value, gaussian_qfi_squeezing_opt(r.axis_value, nsq)});
    } else {
      const double na = fixed_or(result.config.fixed, "nalpha", 0.0);
      const double h = gaussian_qfi_squeezing_opt(na, nsq);
      ref.points.push_back({result.rows.front().axis_value, h});
      ref.points.push_back({result.rows.back().axis_value, h});
    }
    plot.series.push_back(std::move(ref));
  }
  write_svg(plot, path);
}

// ---------------------------------------------------------------------------
// config files

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

[[noreturn]] void config_fail(const std::string& path, int lineno, const std::string& msg) {
  std::ostringstream os;
  os << path << ":" << lineno << ": " << msg;
  throw std::invalid_argument(os.str());
}

}  // namespace

SweepConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file '" + path + "' cannot be opened");
  SweepConfig config;
  config.reference_nsq.clear();
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "fixed" && section != "sweep" && section != "output" &&
          section != "reference")
        config_fail(path, lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_fail(path, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (section.empty()) {
        if (key == "task") config.task = parse_task(value);
        else if (key == "probe") config.family = parse_probe_family(value);
        else if (key == "optimize") {
          config.optimize_phi = value.find("phi") != std::string::npos;
          config.optimize_beta = value.find("beta") != std::string::npos;
        } else if (key == "workers") config.workers = std::stoi(value);
        else if (key == "dim") config.dim_override = std::stoi(value);
        else if (key == "dim-cap") config.dim_cap = std::stoi(value);
        else if (key == "verify-truncation") config.verify_truncation = value == "true" || value == "1";
        else config_fail(path, lineno, "unknown key '" + key + "'");
      } else if (section == "fixed") {
        config.fixed[key] = std::stod(value);
      } else if (section == "sweep") {
        if (key == "param") config.axis.param = value;
        else if (key == "start") config.axis.start = std::stod(value);
        else if (key == "stop") config.axis.stop = std::stod(value);
        else if (key == "count") config.axis.count = std::stoi(value);
        else if (key == "scale") config.axis.log = value == "log";
        else config_fail(path, lineno, "unknown sweep key '" + key + "'");
      } else if (section == "output") {
        if (key == "csv") config.out_csv = value;
        else if (key == "svg") config.out_svg = value;
        else config_fail(path, lineno, "unknown output key '" + key + "'");
      } else if (section == "reference") {
        if (key == "nsq") config.reference_nsq = parse_double_list(value);
        else config_fail(path, lineno, "unknown reference key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      config_fail(path, lineno, std::string("bad value: ") + e.what());
    }
  }
  return config;
}

// ---------------------------------------------------------------------------
// figure presets

namespace {

struct CurveDef {
  SweepConfig config;
  std::vector<double> grid;  // explicit grid (overrides axis generation)
  std::string label;
  bool dashed = false;
  std::string color;
};

struct PresetDef {
  std::vector<CurveDef> curves;
  std::vector<double> reference_nsq;  // analytic dashed baselines (fig1/fig2)
  bool x_is_nong = false;             // fig3: plot QFI vs normalized nonG
  std::string xlabel, ylabel;
  bool xlog = false;
};

// 60 log-spaced points on [0.1, 100] plus the integers 1, 2, 3.
std::vector<double> amplitude_grid() {
  std::vector<double> xs;
  const double llo = std::log(0.1), lhi = std::log(100.0);
  for (int i = 0; i < 60; ++i) xs.push_back(std::exp(llo + (lhi - llo) * i / 59));
  xs.back() = 100.0;
  xs.push_back(1.0);
  xs.push_back(2.0);
  xs.push_back(3.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<double> open_interval_grid(double lo, double hi, int count) {
  std::vector<double> xs(count);
  for (int k = 1; k <= count; ++k) xs[k - 1] = lo + (hi - lo) * k / (count + 1);
  return xs;
}

SweepConfig base_config(Task task, ProbeFamily family, int workers, int dim_cap) {
  SweepConfig c;
  c.task = task;
  c.family = family;
  c.optimize_phi = true;
  c.workers = workers;
  c.dim_cap = dim_cap;
  return c;
}

PresetDef make_preset(const std::string& name, int workers, int dim_cap);

PresetDef make_preset_impl(const std::string& name, int workers, int dim_cap) {
  const char* grays[] = {"#202020", "#7a7a7a", "#b8b8b8"};
  PresetDef preset;

  auto amplitude_axis = [](SweepConfig& c, const std::vector<double>& grid) {
    c.axis = {"nalpha", grid.front(), grid.back(), static_cast<int>(grid.size()), true};
  };

  if (name == "fig1-top" || name == "fig2-top") {
    const Task task = name == "fig1-top" ? Task::displacement : Task::squeezing;
    const std::vector<double> gammas = {1e-2, 1e-4, 1e-6};
    const auto grid = amplitude_grid();
    for (size_t i = 0; i < gammas.size(); ++i) {
      CurveDef curve;
      curve.config = base_config(task, ProbeFamily::kerr_coherent, workers, dim_cap);
      curve.config.fixed["gamma"] = gammas[i];
      amplitude_axis(curve.config, grid);
      curve.grid = grid;
      std::ostringstream label;
      label << "kerr-coherent gamma=" << gammas[i];
      curve.label = label.str();
      curve.color = grays[i];
      preset.curves.push_back(std::move(curve));
    }
    preset.reference_nsq = {1, 2, 3};
    preset.xlabel = "N_alpha";
    preset.ylabel = task == Task::displacement ? "QFI H(d)" : "QFI H(s)";
    preset.xlog = true;
  } else if (name == "fig1-bottom" || name == "fig2-bottom") {
    const Task task = name == "fig1-bottom" ? Task::displacement : Task::squeezing;
    const std::vector<double> gammas = name == "fig1-bottom"
                                           ? std::vector<double>{0.01, 0.008, 0.005}
                                           : std::vector<double>{0.01, 0.005, 0.001};
    const auto grid = amplitude_grid();
    for (size_t i = 0; i < gammas.size(); ++i) {
      CurveDef curve;
      curve.config = base_config(task, ProbeFamily::kerr_squeezed, workers, dim_cap);
      curve.config.fixed["gamma"] = gammas[i];
      curve.config.fixed["nsq"] = 2.0;
      amplitude_axis(curve.config, grid);
      curve.grid = grid;
      std::ostringstream label;
      label << "kerr-squeezed N_sq=2 gamma=" << gammas[i];
      curve.label = label.str();
      curve.color = grays[i];
      preset.curves.push_back(std::move(curve));
    }
    preset.reference_nsq = {1, 2, 3};
    preset.xlabel = "N_alpha";
    preset.ylabel = task == Task::displacement ? "QFI H(d)" : "QFI H(s)";
    preset.xlog = true;
  } else if (name == "fig3-top" || name == "fig3-bottom") {
    const Task task = name == "fig3-top" ? Task::displacement : Task::squeezing;
    for (size_t i = 0; i < 3; ++i) {
      const double gammas[] = {0.04, 0.06, 0.10};
      CurveDef curve;
      curve.config = base_config(task, ProbeFamily::kerr_coherent, workers, dim_cap);
      curve.config.fixed["gamma"] = gammas[i];
      curve.grid = open_interval_grid(0.0, 3.0, 30);
      curve.config.axis = {"nalpha", curve.grid.front(), curve.grid.back(), 30, false};
      std::ostringstream label;
      label << "gamma=" << gammas[i] << " (N_alpha sweep)";
      curve.label = label.str();
      curve.color = grays[i];
      preset.curves.push_back(std::move(curve));
    }
    for (size_t i = 0; i < 3; ++i) {
      const double nalphas[] = {3, 2, 1};
      CurveDef curve;
      curve.config = base_config(task, ProbeFamily::kerr_coherent, workers, dim_cap);
      curve.config.fixed["nalpha"] = nalphas[i];
      curve.grid = open_interval_grid(0.0, 0.1, 30);
      curve.config.axis = {"gamma", curve.grid.front(), curve.grid.back(), 30, false};
      std::ostringstream label;
      label << "N_alpha=" << nalphas[i] << " (gamma sweep)";
      curve.label = label.str();
      curve.dashed = true;
      curve.color = grays[i];
      preset.curves.push_back(std::move(curve));
    }
    preset.x_is_nong = true;
    preset.xlabel = "delta_R";
    preset.ylabel = task == Task::displacement ? "QFI H(d)" : "QFI H(s)";
  } else {
    throw std::invalid_argument("unknown figure preset '" + name + "'");
  }
  return preset;
}

PresetDef make_preset(const std::string& name, int workers, int dim_cap) {
  PresetDef preset = make_preset_impl(name, workers, dim_cap);
  for (auto& curve : preset.curves) curve.config.reference_nsq = preset.reference_nsq;
  return preset;
}

}  // namespace

std::vector<std::string> figure_preset_names() {
  return {"fig1-top", "fig1-bottom", "fig2-top", "fig2-bottom", "fig3-top", "fig3-bottom"};
}

std::vector<SweepConfig> figure_preset_curves(const std::string& name) {
  std::vector<SweepConfig> configs;
  for (const auto& curve : make_preset(name, 0, 1024).curves) configs.push_back(curve.config);
  return configs;
}

FigureFiles run_figure_preset(const std::string& name, const std::string& out_dir, int workers,
                              int dim_cap) {
  const PresetDef preset = make_preset(name, workers, dim_cap);

  std::vector<SweepRow> all_rows;
  SvgPlot plot;
  plot.title = name;
  plot.xlabel = preset.xlabel;
  plot.ylabel = preset.ylabel;
  plot.xlog = preset.xlog;

  double x_lo = 0, x_hi = 0;
  bool first_curve = true;
  for (const auto& curve : preset.curves) {
    curve.config.validate();
    SweepResult result;
    result.config = curve.config;
    result.rows = run_rows(curve.config, curve.grid);
    all_rows.insert(all_rows.end(), result.rows.begin(), result.rows.end());

    SvgSeries series;
    series.label = curve.label;
    series.dashed = curve.dashed;
    series.color = curve.color;
    for (const auto& r : result.rows)
      series.points.push_back({preset.x_is_nong ? r.nong_norm : r.axis_value, r.qfi});
    plot.series.push_back(std::move(series));
    if (first_curve) {
      x_lo = curve.grid.front();
      x_hi = curve.grid.back();
      first_curve = false;
    }
  }

  const char* ref_colors[] = {"#404040", "#707070", "#a0a0a0"};
  int ci = 0;
  for (double nsq : preset.reference_nsq) {
    SvgSeries ref;
    ref.dashed = true;
    ref.color = ref_colors[ci++ % 3];
    std::ostringstream label;
    label << "Gaussian N_sq=" << nsq;
    ref.label = label.str();
    if (preset.ylabel == "QFI H(d)") {
      const double h = gaussian_qfi_displacement(nsq, 1.0);
      ref.points.push_back({x_lo, h});
      ref.points.push_back({x_hi, h});
    } else {
      for (const auto& x : preset.curves.front().grid)
        ref.points.push_back({x, gaussian_qfi_squeezing_opt(x, nsq)});
    }
    plot.series.push_back(std::move(ref));
  }

  std::filesystem::create_directories(out_dir);
  FigureFiles files;
  files.csv = (std::filesystem::path(out_dir) / (name + ".csv")).string();
  files.svg = (std::filesystem::path(out_dir) / (name + ".svg")).string();
  write_rows_csv(all_rows, files.csv);
  write_svg(plot, files.svg);
  return files;
}

// ---------------------------------------------------------------------------
// selftest

namespace {

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

Check grid_check(const std::string& name, Task task,
                 double (*closed_form)(double, double, double), double tol) {
  double worst = 0;
  std::string at;
  for (double n : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
    for (double gamma : {1e-6, 1e-4, 1e-2})
      for (double phi : {0.0, std::numbers::pi / 5, std::numbers::pi / 2}) {
        ProbeSpec spec;
        spec.alpha_mag = std::sqrt(n);
        spec.phi = phi;
        spec.gamma = gamma;
        const double numeric = qfi_pure(build_probe(spec), task);
        const double analytic = closed_form(n, phi, gamma);
        const double rel = std::abs(numeric - analytic) / std::abs(numeric);
        if (rel > worst) {
          worst = rel;
          std::ostringstream os;
          os << "N=" << n << " gamma=" << gamma << " phi=" << phi;
          at = os.str();
        }
      }
  std::ostringstream detail;
  detail << "worst rel " << worst << " at " << at;
  return {name, worst <= tol, detail.str()};
}

}  // namespace

int selftest(std::ostream& out) {
  std::vector<Check> checks;

  {
    double worst = 0;
    for (double mag : {0.0, 0.7, 3.0}) {
      ProbeSpec spec;
      spec.alpha_mag = mag;
      worst = std::max(worst, std::abs(qfi_pure(build_probe(spec), Task::displacement) - 4.0));
    }
    std::ostringstream os;
    os << "worst |H - 4| = " << worst;
    checks.push_back({"coherent displacement QFI constant", worst <= 1e-8, os.str()});
  }
  {
    double worst = 0;
    for (double n : {0.5, 1.0, 2.0, 3.0}) {
      ProbeSpec spec;
      spec.r = std::asinh(std::sqrt(n));
      const double h = qfi_pure(build_probe(spec), Task::displacement);
      const double closed = gaussian_qfi_displacement(n, 1.0);
      worst = std::max(worst, std::abs(h - closed) / closed);
    }
    std::ostringstream os;
    os << "worst rel " << worst;
    checks.push_back({"squeezed-vacuum displacement closed form", worst <= 1e-6, os.str()});
  }
  {
    double worst = 0;
    for (double n : {0.0, 1.0, 2.0, 5.0}) {
      ProbeSpec spec;
      spec.r = std::asinh(std::sqrt(n));
      const double h = qfi_pure(build_probe(spec), Task::squeezing);
      const double closed = gaussian_qfi_squeezing_max(n);
      worst = std::max(worst, std::abs(h - closed) / closed);
    }
    std::ostringstream os;
    os << "worst rel " << worst;
    checks.push_back({"squeezed-vacuum squeezing closed form", worst <= 1e-6, os.str()});
  }
  checks.push_back(grid_check("kerr-coherent displacement formula vs Fock grid",
                              Task::displacement, kerr_coherent_qfi_displacement, 1e-6));
  checks.push_back(grid_check("kerr-coherent squeezing formula vs Fock grid", Task::squeezing,
                              kerr_coherent_qfi_squeezing, 1e-6));
  {
    double worst = 0;
    for (double n : {0.5, 2.0, 10.0})
      for (double phi : {0.0, 1.0}) {
        worst = std::max(worst, std::abs(kerr_coherent_qfi_displacement(n, phi, 0.0) - 4.0));
        worst = std::max(worst,
                         std::abs(kerr_coherent_qfi_squeezing(n, phi, 0.0) - (2.0 + 4.0 * n)));
      }
    std::ostringstream os;
    os << "worst abs " << worst;
    checks.push_back({"gamma=0 reduction to Gaussian forms", worst <= 1e-8, os.str()});
  }
  {
    ProbeSpec spec;
    spec.alpha_mag = std::sqrt(2.0);
    spec.gamma = 0.01;
    const double fd = qfi_finite_difference_check(spec, Task::squeezing, 1e-3);
    const double direct = qfi_pure(build_probe(spec), Task::squeezing);
    const double rel = std::abs(fd - direct) / direct;
    std::ostringstream os;
    os << "rel " << rel;
    checks.push_back({"finite-difference fidelity check", rel <= 1e-3, os.str()});
  }
  {
    ProbeSpec spec;
    spec.alpha_mag = 1.0;
    spec.gamma = 0.02;
    const double a = qfi_finite_difference_check(spec, Task::displacement, 1e-3, 0.0);
    const double b = qfi_finite_difference_check(spec, Task::displacement, 1e-3, 0.3);
    const double rel = std::abs(a - b) / std::abs(a);
    std::ostringstream os;
    os << "rel " << rel;
    checks.push_back({"base-point independence of the curvature check", rel <= 1e-4, os.str()});
  }

  int failures = 0;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " (" << c.detail << ")\n";
    if (!c.pass) ++failures;
  }
  return failures;
}

}  // namespace kerrqfi
