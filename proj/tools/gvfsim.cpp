#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cgvf/output.hpp"
#include "cgvf/presets.hpp"
#include "cgvf/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace cgvf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

Scenario resolve_scenario(const std::string& ref) {
  if (fs::exists(ref)) return load_scenario(ref);
  for (const std::string& name : preset_names()) {
    if (name == ref) return preset(name);
  }
  throw Error("no scenario file '" + ref + "' and no preset with that name");
}

struct RunOptions {
  std::string scenario;
  std::string out_dir = ".";
  int decimate = 0;          // 0 keeps the scenario's value
  uint64_t seed = 0;
  bool seed_set = false;
  bool plot = false;
};

int do_run(const RunOptions& opt) {
  Scenario sc = resolve_scenario(opt.scenario);
  if (opt.decimate > 0) sc.telemetry_decimation = opt.decimate;
  if (opt.seed_set) sc.seed = opt.seed;

  ValidationReport report = validate_scenario(sc);
  for (const CheckResult& c : report.checks) {
    if (!c.passed && c.warning_only) {
      std::cerr << "warning: " << c.name << ": " << c.detail << "\n";
    }
  }
  if (report.hard_failure()) {
    std::cerr << report.to_string();
    return kExitUsage;
  }

  fs::create_directories(opt.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result = integrate(sc);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_telemetry_csv((fs::path(opt.out_dir) / "telemetry.csv").string(), sc,
                      result.frames);
  write_diagnostics_csv((fs::path(opt.out_dir) / "diagnostics.csv").string(), sc,
                        result.frames);
  write_summary_json((fs::path(opt.out_dir) / "summary.json").string(), sc, result);
  if (opt.plot) {
    write_trajectories_svg((fs::path(opt.out_dir) / "trajectories.svg").string(), sc,
                           result.frames);
  }

  const TelemetryFrame& last = result.frames.back();
  double max_phi = 0.0;
  for (const auto& ph : last.phi) max_phi = std::max(max_phi, ph.norm());
  std::cout << "steps " << result.steps_completed << ", wall " << wall << " s, final |Phi|max "
            << max_phi << ", final |e| " << last.composite_error_norm << "\n";
  if (result.aborted) {
    std::cerr << "run aborted: " << result.abort_reason << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int do_validate(const std::string& ref) {
  Scenario sc = resolve_scenario(ref);
  ValidationReport report = validate_scenario(sc);
  std::cout << report.to_string();
  std::cout << (report.hard_failure() ? "validation FAILED\n" : "validation OK\n");
  return kExitOk;
}

void set_sweep_parameter(Scenario& sc, const std::string& param, double value) {
  if (param == "k_c") {
    sc.coordination.kc1 = value;
    if (sc.param_count() == 2) sc.coordination.kc2 = value;
  } else if (param == "k_c1") {
    sc.coordination.kc1 = value;
  } else if (param == "k_c2") {
    sc.coordination.kc2 = value;
  } else if (param == "step_s") {
    sc.step_s = value;
  } else if (param == "alpha") {
    sc.safety.alpha = value;
  } else if (param == "k_theta") {
    sc.guidance.k_theta = value;
  } else if (param == "comm_interval_s") {
    sc.comm_interval_s = value;
  } else {
    throw Error("unknown sweep parameter '" + param +
                "' (one of k_c, k_c1, k_c2, step_s, alpha, k_theta, comm_interval_s)");
  }
}

int do_sweep(const std::string& ref, const std::string& param,
             const std::vector<double>& values, const std::string& out_dir,
             double threshold) {
  if (values.empty()) throw Error("sweep needs at least one value");
  fs::create_directories(out_dir);
  std::ofstream table((fs::path(out_dir) / "sweep.csv").string());
  table << "value,settling_time_s,final_max_coord_error,final_max_phi,aborted\n";
  std::cout << param << "  settling_s  final_coord_err  final_phi\n";

  for (double value : values) {
    Scenario sc = resolve_scenario(ref);
    set_sweep_parameter(sc, param, value);
    sc.telemetry_decimation = 1;
    RunResult result = integrate(sc);

    // settling: last time the max coordination error crosses the threshold
    double settling = std::numeric_limits<double>::quiet_NaN();
    for (auto it = result.frames.rbegin(); it != result.frames.rend(); ++it) {
      double worst = 0.0;
      for (const auto& err : it->coord_errors) {
        if (err.size()) worst = std::max(worst, err.cwiseAbs().maxCoeff());
      }
      if (worst > threshold) {
        settling = it->t;
        break;
      }
    }
    if (std::isnan(settling)) settling = 0.0;

    const TelemetryFrame& last = result.frames.back();
    double final_coord = 0.0;
    for (const auto& err : last.coord_errors) {
      if (err.size()) final_coord = std::max(final_coord, err.cwiseAbs().maxCoeff());
    }
    double final_phi = 0.0;
    for (const auto& ph : last.phi) final_phi = std::max(final_phi, ph.norm());

    table << format_g17(value) << "," << format_g17(settling) << ","
          << format_g17(final_coord) << "," << format_g17(final_phi) << ","
          << (result.aborted ? 1 : 0) << "\n";
    std::cout << value << "  " << settling << "  " << final_coord << "  " << final_phi
              << (result.aborted ? "  (aborted)" : "") << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinating guiding vector field simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "integrate a scenario and write artifacts");
  run->add_option("scenario", run_opt.scenario, "scenario file or preset name")
      ->required();
  run->add_option("--out", run_opt.out_dir, "output directory");
  run->add_option("--decimate", run_opt.decimate, "telemetry decimation override");
  run->add_option("--seed", run_opt.seed, "seed override")
      ->each([&](const std::string&) { run_opt.seed_set = true; });
  run->add_flag("--plot", run_opt.plot, "write trajectories.svg");

  std::string validate_ref;
  CLI::App* validate = app.add_subcommand("validate", "check assumptions, no run");
  validate->add_option("scenario", validate_ref, "scenario file or preset name")
      ->required();

  std::string sweep_ref, sweep_param;
  std::vector<double> sweep_values;
  std::string sweep_out = ".";
  double sweep_threshold = 1e-2;
  CLI::App* sweep = app.add_subcommand("sweep", "run once per parameter value");
  sweep->add_option("scenario", sweep_ref, "scenario file or preset name")->required();
  sweep->add_option("--param", sweep_param, "parameter to vary")->required();
  sweep->add_option("--values", sweep_values, "values to sweep")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--threshold", sweep_threshold, "coordination settling threshold");

  CLI::App* presets_cmd = app.add_subcommand("presets", "built-in scenarios");
  CLI::App* presets_list = presets_cmd->add_subcommand("list", "list preset names");
  std::string dump_name, dump_out;
  CLI::App* presets_dump =
      presets_cmd->add_subcommand("dump", "write a preset as a scenario file");
  presets_dump->add_option("name", dump_name, "preset name")->required();
  presets_dump->add_option("--out", dump_out, "output file (default stdout)");
  presets_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return do_run(run_opt);
    if (*validate) return do_validate(validate_ref);
    if (*sweep) {
      return do_sweep(sweep_ref, sweep_param, sweep_values, sweep_out, sweep_threshold);
    }
    if (*presets_list) {
      for (const std::string& name : preset_names()) std::cout << name << "\n";
      return kExitOk;
    }
    if (*presets_dump) {
      const std::string text = serialize_scenario(preset(dump_name));
      if (dump_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(dump_out);
        if (!out) throw Error("cannot write '" + dump_out + "'");
        out << text;
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularHeading& e) {
    std::cerr << "runtime abort: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
