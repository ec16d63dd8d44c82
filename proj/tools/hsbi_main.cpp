// Command-line front end: config-driven runs, grid-refinement studies,
// per-step cost benchmarks and SVG rendering of run artifacts.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsbi/bench.hpp"
#include "hsbi/convergence.hpp"
#include "hsbi/plot.hpp"
#include "hsbi/runner.hpp"
#include "json.hpp"

namespace {

using namespace hsbi;

int cmd_run(const std::string& config_path, bool quiet) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return int(RunStatus::ValidationError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return int(RunStatus::IoError);
  }
  std::string message;
  const RunStatus status = run_config(config, message);
  if (status != RunStatus::Ok)
    std::cerr << "error: " << message << '\n';
  else if (!quiet)
    std::cout << message << '\n';
  return int(status);
}

int cmd_converge(const std::string& preset_name, std::vector<double> dx_list,
                 double dx_ref, double t_end, const std::string& out_path) {
  ConvergenceOptions opt;
  opt.t_end = t_end;
  ElastodynamicKernels kernels;
  const ConvergenceResult r = converge(preset_name, dx_list, dx_ref, kernels, opt);
  nlohmann::json j;
  j["preset"] = preset_name;
  j["dx_ref"] = dx_ref;
  j["dx"] = r.dx;
  j["error"] = r.error;
  j["slope"] = r.slope;
  j["trace_t"] = r.trace_t;
  j["trace_error"] = r.trace_error;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
  return 0;
}

int cmd_bench(const std::string& out_path) {
  const BenchResult r = bench();
  const std::string text = bench_json(r);
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
  return 0;
}

int cmd_plot(const std::string& input, const std::string& kind,
             const std::string& out_path) {
  std::string svg;
  if (kind == "rupture") {
    svg = svg_rupture_contours(read_rupture_map(input));
  } else if (kind == "stations") {
    std::vector<StationSeries> stations;
    if (std::filesystem::is_directory(input)) {
      std::vector<std::string> files;
      for (const auto& e : std::filesystem::directory_iterator(input))
        if (e.path().extension() == ".csv") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) stations.push_back(read_station_csv(f));
    } else {
      stations.push_back(read_station_csv(input));
    }
    svg = svg_station_series(stations);
  } else if (kind == "spacetime") {
    svg = svg_spacetime(read_field(input));
  } else if (kind == "scaling") {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot read " + input);
    nlohmann::json j = nlohmann::json::parse(in);
    BenchResult b;
    b.n2 = j.at("fe").at("n2").get<std::vector<int>>();
    b.fe_seconds = j.at("fe").at("seconds").get<std::vector<double>>();
    b.fe_r2 = j.at("fe").at("r2").get<double>();
    b.fe_layer_seconds = j.at("fe").at("layer_seconds").get<double>();
    b.sbi_seconds = j.at("sbi").at("seconds").get<double>();
    b.sbi_to_layer_ratio = j.at("sbi").at("layer_ratio").get<double>();
    b.n1n3 = j.at("scaling").at("n1n3").get<std::vector<std::int64_t>>();
    b.fe_n1n3_seconds =
        j.at("scaling").at("fe_seconds").get<std::vector<double>>();
    b.sbi_n1n3_seconds =
        j.at("scaling").at("sbi_seconds").get<std::vector<double>>();
    b.fe_n1n3_slope = j.at("scaling").at("fe_slope").get<double>();
    b.sbi_n1n3_slope = j.at("scaling").at("sbi_slope").get<double>();
    svg = svg_scaling(b);
  } else {
    throw std::invalid_argument("unknown plot kind: " + kind);
  }
  write_text(out_path, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid finite-element / spectral-boundary-integral dynamic "
               "rupture simulator"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "execute a simulation from a JSON config");
  run->add_option("config", config_path, "path to the JSON run configuration")
      ->required();
  run->add_flag("-q,--quiet", quiet, "suppress the run summary on stdout");

  std::string preset_name;
  std::vector<double> dx_list;
  double dx_ref = 0.0, t_end = 0.0;
  std::string conv_out;
  auto* conv = app.add_subcommand(
      "converge", "grid-refinement study of a preset against a finer reference");
  conv->add_option("--preset", preset_name, "scenario preset name")->required();
  conv->add_option("--dx", dx_list, "coarse grid spacings [m]")->required();
  conv->add_option("--ref", dx_ref, "reference grid spacing [m]")->required();
  conv->add_option("--t", t_end, "comparison time [s]; 0 = preset duration");
  conv->add_option("--out", conv_out, "write the JSON report here instead of stdout");

  std::string bench_out;
  auto* bn = app.add_subcommand("bench", "measure per-step cost scaling");
  bn->add_option("--out", bench_out, "write the JSON report here instead of stdout");

  std::string plot_in, plot_kind, plot_out;
  auto* pl = app.add_subcommand("plot", "render a run artifact as SVG");
  pl->add_option("input", plot_in, "artifact path (file, or directory for stations)")
      ->required();
  pl->add_option("--kind", plot_kind, "rupture | stations | spacetime | scaling")
      ->required()
      ->check(CLI::IsMember({"rupture", "stations", "spacetime", "scaling"}));
  pl->add_option("--out", plot_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, quiet);
    if (*conv) return cmd_converge(preset_name, dx_list, dx_ref, t_end, conv_out);
    if (*bn) return cmd_bench(bench_out);
    if (*pl) return cmd_plot(plot_in, plot_kind, plot_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return int(hsbi::RunStatus::ValidationError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return int(hsbi::RunStatus::IoError);
  }
  return 0;
}
