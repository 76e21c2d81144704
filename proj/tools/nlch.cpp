#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "nlch/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int classify(const nlch::Error& e) {
  if (dynamic_cast<const nlch::IoError*>(&e) ||
      dynamic_cast<const nlch::FormatError*>(&e))
    return kExitIo;
  if (dynamic_cast<const nlch::DtUnderflow*>(&e) ||
      dynamic_cast<const nlch::NewtonDiverged*>(&e) ||
      dynamic_cast<const nlch::BarrierViolation*>(&e) ||
      dynamic_cast<const nlch::NoConvergence*>(&e))
    return kExitNumerical;
  return kExitValidation;
}

int cmd_simulate_spec(const nlch::RunSpec& spec) {
  const nlch::RunArtifacts art = nlch::run_scenario(spec);
  std::cout << "csv: " << art.csv_path << "\n";
  for (const auto& p : art.snapshot_paths) std::cout << "snapshot: " << p << "\n";
  std::cout << "summary: " << art.summary << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path) {
  return cmd_simulate_spec(nlch::parse_config_file(config_path));
}

int cmd_steady(const std::string& config_path) {
  const nlch::RunSpec spec = nlch::parse_config_file(config_path);
  const nlch::ModelParams params = spec.make_model();
  const nlch::Grid grid = spec.make_grid();
  const nlch::EllipticWorkspace workspace(grid);
  const nlch::Field u0 = spec.make_initial_field();
  const nlch::StationaryState state = nlch::steady_solve(
      params, workspace, u0, nlch::mean(u0), spec.stepping);
  const nlch::MatanoReport matano = nlch::verify_matano(params, state);

  std::filesystem::create_directories(spec.output.snapshot_dir);
  const std::string path =
      (std::filesystem::path(spec.output.snapshot_dir) / "steady.bin").string();
  nlch::write_snapshot(path, state.u, 0.0, state.m);

  std::printf("m = %.17g\n", state.m);
  std::printf("lambda = %.17g\n", state.lambda);
  std::printf("residual_norm = %.17g\n", state.residual_norm);
  std::printf("separation = %.17g\n", state.separation);
  std::printf("energy = %.17g\n", state.energy);
  std::printf("matano = %s [%.17g, %.17g]\n",
              matano.within_bounds ? "within_bounds" : "violated", matano.lower,
              matano.upper);
  std::printf("snapshot = %s\n", path.c_str());
  return kExitOk;
}

int cmd_diagnose(const std::string& csv_path, bool fit_ls) {
  const auto series = nlch::read_csv(csv_path);
  if (series.empty()) {
    std::cout << "no records\n";
    return kExitOk;
  }
  double mass_drift = 0.0, min_sep = 1.0, max_energy_rise = 0.0;
  for (const auto& r : series) {
    mass_drift = std::max(mass_drift, std::abs(r.mass - series.front().mass));
    min_sep = std::min(min_sep, r.separation);
  }
  for (std::size_t i = 1; i < series.size(); ++i)
    max_energy_rise =
        std::max(max_energy_rise, series[i].energy - series[i - 1].energy);

  std::printf("records = %zu\n", series.size());
  std::printf("mass_drift = %.17g\n", mass_drift);
  std::printf("min_separation = %.17g\n", min_sep);
  std::printf("max_energy_rise = %.17g\n", max_energy_rise);
  std::printf("final_energy = %.17g\n", series.back().energy);
  if (fit_ls) {
    const nlch::LojasiewiczFit fit =
        nlch::lojasiewicz_fit(series, series.back().energy);
    std::printf("theta_hat = %.17g\n", fit.theta_hat);
    std::printf("c_hat = %.17g\n", fit.c_hat);
    std::printf("r_squared = %.17g\n", fit.r_squared);
    std::printf("max_below_line = %.17g\n", fit.max_below_line);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& dir) {
  std::vector<std::string> configs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".cfg") configs.push_back(entry.path().string());
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) throw nlch::IoError("no .cfg files in " + dir);
  for (const auto& c : configs) {
    std::cout << "== " << c << "\n";
    cmd_simulate(c);
  }
  return kExitOk;
}

int cmd_preset(const std::string& name, bool emit) {
  const nlch::RunSpec spec = nlch::preset(name);
  if (emit) {
    std::cout << nlch::emit_config(spec);
    return kExitOk;
  }
  return cmd_simulate_spec(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard simulation and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path, csv_path, dir, name;
  bool fit_ls = false, emit = false;

  auto* simulate = app.add_subcommand("simulate", "run a scenario from a config file");
  simulate->add_option("config", config_path, "config file")->required();

  auto* steady = app.add_subcommand("steady", "solve for a stationary state");
  steady->add_option("config", config_path, "config file")->required();

  auto* diagnose = app.add_subcommand("diagnose", "summarize a time-series CSV");
  diagnose->add_option("csv", csv_path, "time-series CSV")->required();
  diagnose->add_flag("--fit-ls", fit_ls, "fit the decay exponent");

  auto* sweep = app.add_subcommand("sweep", "run every .cfg in a directory");
  sweep->add_option("config-dir", dir, "directory of configs")->required();

  auto* preset_cmd = app.add_subcommand("preset", "run or emit a named preset");
  preset_cmd->add_option("name", name, "preset name")->required();
  preset_cmd->add_flag("--emit-config", emit, "print the config instead of running");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path);
    if (steady->parsed()) return cmd_steady(config_path);
    if (diagnose->parsed()) return cmd_diagnose(csv_path, fit_ls);
    if (sweep->parsed()) return cmd_sweep(dir);
    if (preset_cmd->parsed()) return cmd_preset(name, emit);
  } catch (const nlch::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
