#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kerrqfi/sweep.hpp"

using namespace kerrqfi;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "kerrqfi_test_sweep";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

SweepConfig beta_sweep_config() {
  SweepConfig config;
  config.task = Task::displacement;
  config.family = ProbeFamily::gaussian;
  config.fixed["n"] = 2.0;
  config.axis = {"beta", 0.0, 1.0, 11, false};
  return config;
}

}  // namespace

TEST_CASE("config validation") {
  SweepConfig config = beta_sweep_config();
  CHECK_NOTHROW(config.validate());

  config.axis.count = 1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = beta_sweep_config();
  config.axis.start = 2.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = beta_sweep_config();
  config.axis = {"nalpha", 0.0, 100.0, 10, true};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // log needs start > 0

  config = beta_sweep_config();
  config.axis.param = "frequency";
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = beta_sweep_config();
  config.family = ProbeFamily::gaussian;
  config.fixed["gamma"] = 0.1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("beta sweep at fixed energy peaks at squeezed vacuum") {
  const SweepResult result = run_sweep(beta_sweep_config());
  REQUIRE(result.rows.size() == 11);
  const SweepRow& last = result.rows.back();
  CHECK(last.axis_value == doctest::Approx(1.0));
  CHECK(last.qfi == doctest::Approx(39.59591794226542).epsilon(1e-6));
  for (const auto& row : result.rows) {
    CHECK(row.qfi <= last.qfi + 1e-9);
    CHECK(row.qfi >= 0.0);
    CHECK(row.leakage <= default_leak_tol);
  }
  CHECK(result.version == engine_version);
}

TEST_CASE("csv emission, parsing and determinism") {
  SweepConfig config = beta_sweep_config();
  const SweepResult result = run_sweep(config);

  const auto csv_path = (temp_dir() / "beta.csv").string();
  emit_csv(result, csv_path);

  const std::string bytes = read_file(csv_path);
  CHECK(std::count(bytes.begin(), bytes.end(), '\n') == 12);  // header + 11 rows
  CHECK(bytes.rfind("axis,qfi,optimal_phi,optimal_beta,nong,nong_normalized,leakage,dim_used",
                    0) == 0);

  // re-parse and re-emit: byte identical
  const std::vector<SweepRow> parsed = parse_csv(csv_path);
  REQUIRE(parsed.size() == result.rows.size());
  SweepResult reparsed = result;
  reparsed.rows = parsed;
  const auto csv_path2 = (temp_dir() / "beta2.csv").string();
  emit_csv(reparsed, csv_path2);
  CHECK(read_file(csv_path2) == bytes);

  // identical bytes across worker counts
  config.workers = 3;
  const auto csv_path3 = (temp_dir() / "beta3.csv").string();
  emit_csv(run_sweep(config), csv_path3);
  CHECK(read_file(csv_path3) == bytes);

  // values round-trip exactly at 12 significant digits
  for (size_t i = 0; i < parsed.size(); ++i)
    CHECK(format_g12(parsed[i].qfi) == format_g12(result.rows[i].qfi));
}

TEST_CASE("csv failure modes leave nothing behind") {
  const SweepResult result = run_sweep(beta_sweep_config());
  CHECK_THROWS_AS(emit_csv(result, ""), std::invalid_argument);

  const auto missing_dir = (temp_dir() / "nope" / "out.csv").string();
  CHECK_THROWS(emit_csv(result, missing_dir));
  CHECK(!fs::exists(missing_dir));
  CHECK(!fs::exists(missing_dir + ".tmp"));
}

TEST_CASE("svg emission") {
  const SweepResult result = run_sweep(beta_sweep_config());
  const auto svg_path = (temp_dir() / "beta.svg").string();
  emit_svg(result, {1.0, 2.0, 3.0}, svg_path);
  const std::string svg = read_file(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  // one solid sweep + three dashed references
  size_t polylines = 0;
  for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  CHECK(polylines == 4);

  SweepResult degenerate = result;
  degenerate.rows.resize(1);
  CHECK_THROWS_AS(emit_svg(degenerate, {}, (temp_dir() / "bad.svg").string()),
                  std::invalid_argument);
}

TEST_CASE("kerr-coherent sweep rows match the analytic formula") {
  SweepConfig config;
  config.task = Task::displacement;
  config.family = ProbeFamily::kerr_coherent;
  config.fixed["gamma"] = 1e-2;
  config.optimize_phi = true;
  config.axis = {"nalpha", 1.0, 9.0, 5, false};
  const SweepResult result = run_sweep(config);
  for (const auto& row : result.rows) {
    double analytic_max = 0;
    for (int k = 0; k < 4000; ++k)
      analytic_max = std::max(analytic_max, kerr_coherent_qfi_displacement(
                                                row.axis_value, 6.283185307 * k / 4000, 1e-2));
    CHECK(row.qfi == doctest::Approx(analytic_max).epsilon(1e-6));
    CHECK(row.nong > 0.0);
    CHECK(row.nong_norm > 0.0);
    CHECK(row.nong_norm < 1.0);
  }
}

TEST_CASE("sweep aborts identify the offending grid point") {
  SweepConfig config;
  config.task = Task::displacement;
  config.family = ProbeFamily::kerr_coherent;
  config.dim_override = 24;  // far too small once nalpha grows
  config.axis = {"nalpha", 0.5, 50.0, 6, false};
  try {
    run_sweep(config);
    FAIL("expected sweep_error");
  } catch (const sweep_error& e) {
    CHECK(std::string(e.what()).find("nalpha") != std::string::npos);
    CHECK(std::string(e.what()).find("grid point") != std::string::npos);
  }
}

TEST_CASE("config file round trip") {
  const auto cfg_path = (temp_dir() / "sweep.cfg").string();
  {
    std::ofstream out(cfg_path);
    out << "# displacement sweep\n"
        << "task = squeezing\n"
        << "probe = kerr-coherent\n"
        << "optimize = phi\n"
        << "workers = 2\n"
        << "[fixed]\n"
        << "gamma = 0.01\n"
        << "[sweep]\n"
        << "param = nalpha\n"
        << "start = 0.5\n"
        << "stop = 10\n"
        << "count = 7\n"
        << "scale = log\n"
        << "[output]\n"
        << "csv = out.csv\n"
        << "[reference]\n"
        << "nsq = 1, 2, 3\n";
  }
  const SweepConfig config = load_config_file(cfg_path);
  CHECK(config.task == Task::squeezing);
  CHECK(config.family == ProbeFamily::kerr_coherent);
  CHECK(config.optimize_phi);
  CHECK(!config.optimize_beta);
  CHECK(config.workers == 2);
  CHECK(config.fixed.at("gamma") == doctest::Approx(0.01));
  CHECK(config.axis.param == "nalpha");
  CHECK(config.axis.count == 7);
  CHECK(config.axis.log);
  CHECK(config.out_csv == "out.csv");
  REQUIRE(config.reference_nsq.size() == 3);
  CHECK(config.reference_nsq[1] == doctest::Approx(2.0));
  CHECK_NOTHROW(config.validate());

  CHECK_THROWS_AS(load_config_file((temp_dir() / "missing.cfg").string()),
                  std::invalid_argument);

  const auto bad_path = (temp_dir() / "bad.cfg").string();
  {
    std::ofstream out(bad_path);
    out << "banana = 3\n";
  }
  try {
    load_config_file(bad_path);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
}

TEST_CASE("figure presets match their captions") {
  // fig1/fig2 top: kerr-coherent, gamma {1e-2, 1e-4, 1e-6}, N_alpha up to 100
  for (const char* name : {"fig1-top", "fig2-top"}) {
    const auto curves = figure_preset_curves(name);
    REQUIRE(curves.size() == 3);
    const std::vector<double> gammas = {1e-2, 1e-4, 1e-6};
    for (size_t i = 0; i < 3; ++i) {
      CHECK(curves[i].family == ProbeFamily::kerr_coherent);
      CHECK(curves[i].fixed.at("gamma") == doctest::Approx(gammas[i]));
      CHECK(curves[i].optimize_phi);
      CHECK(curves[i].axis.param == "nalpha");
      CHECK(curves[i].axis.stop == doctest::Approx(100.0));
      CHECK(curves[i].axis.count == 63);  // 60 log-spaced + the integers 1, 2, 3
      CHECK(curves[i].reference_nsq == std::vector<double>{1, 2, 3});
    }
  }
  CHECK(figure_preset_curves("fig1-top").front().task == Task::displacement);
  CHECK(figure_preset_curves("fig2-top").front().task == Task::squeezing);

  // fig1/fig2 bottom: kerr-squeezed with N_sq = 2 and the caption gamma sets
  {
    const auto f1 = figure_preset_curves("fig1-bottom");
    const auto f2 = figure_preset_curves("fig2-bottom");
    REQUIRE(f1.size() == 3);
    REQUIRE(f2.size() == 3);
    const std::vector<double> g1 = {0.01, 0.008, 0.005};
    const std::vector<double> g2 = {0.01, 0.005, 0.001};
    for (size_t i = 0; i < 3; ++i) {
      CHECK(f1[i].family == ProbeFamily::kerr_squeezed);
      CHECK(f1[i].fixed.at("nsq") == doctest::Approx(2.0));
      CHECK(f1[i].fixed.at("gamma") == doctest::Approx(g1[i]));
      CHECK(f2[i].fixed.at("gamma") == doctest::Approx(g2[i]));
    }
  }

  // fig3: three fixed-gamma curves then three fixed-N_alpha curves, open ranges
  for (const char* name : {"fig3-top", "fig3-bottom"}) {
    const auto curves = figure_preset_curves(name);
    REQUIRE(curves.size() == 6);
    const std::vector<double> gammas = {0.04, 0.06, 0.10};
    const std::vector<double> nalphas = {3.0, 2.0, 1.0};
    for (size_t i = 0; i < 3; ++i) {
      CHECK(curves[i].fixed.at("gamma") == doctest::Approx(gammas[i]));
      CHECK(curves[i].axis.param == "nalpha");
      CHECK(curves[i].axis.stop < 3.0);  // open interval (0, 3)
      CHECK(curves[i + 3].fixed.at("nalpha") == doctest::Approx(nalphas[i]));
      CHECK(curves[i + 3].axis.param == "gamma");
      CHECK(curves[i + 3].axis.stop < 0.1);  // open interval (0, 0.1)
    }
  }
}

TEST_CASE("squeezing-task curves order by gamma at large amplitude") {
  // at N_alpha = 100 the gamma = 1e-6 curve lies below the gamma = 1e-2 one
  auto optimized = [](double gamma) {
    ProbeSpec spec;
    spec.alpha_mag = 10.0;
    spec.gamma = gamma;
    return optimize_phase(spec, Task::squeezing).value;
  };
  CHECK(optimized(1e-6) < optimized(1e-2));
}

TEST_CASE("figure presets are listed and reproducible") {
  const auto names = figure_preset_names();
  REQUIRE(names.size() == 6);
  CHECK(names.front() == "fig1-top");
  CHECK_THROWS_AS(run_figure_preset("fig9", temp_dir().string()), std::invalid_argument);

  const auto dir_a = (temp_dir() / "figA").string();
  const auto dir_b = (temp_dir() / "figB").string();
  const FigureFiles a = run_figure_preset("fig3-top", dir_a, 1);
  const FigureFiles b = run_figure_preset("fig3-top", dir_b, 4);
  CHECK(read_file(a.csv) == read_file(b.csv));
  CHECK(read_file(a.svg) == read_file(b.svg));

  const std::string svg = read_file(a.svg);
  size_t polylines = 0;
  for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  CHECK(polylines == 6);  // three solid fixed-gamma curves, three dashed fixed-N curves

  const auto rows = parse_csv(a.csv);
  CHECK(rows.size() == 180);  // 6 curves x 30 samples
  for (const auto& row : rows) {
    CHECK(row.qfi >= 0.0);
    CHECK(row.nong_norm >= 0.0);
    CHECK(row.nong_norm <= 1.0);
  }
}
