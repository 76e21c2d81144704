#ifndef NLCH_IO_HPP
#define NLCH_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlch/diagnostics.hpp"

namespace nlch {

enum class InitialKind { ConstantNoise, CosineMode, TanhProfile, FromSnapshot };

struct ModelSpec {
  double theta = 1.0;
  double theta0 = 2.0;
  CoeffKind a_kind = CoeffKind::Constant;
  std::vector<double> a_coeffs{1.0};
  CoeffKind b_kind = CoeffKind::Constant;
  std::vector<double> b_coeffs{1.0};
  double clamp_delta = 1e-9;
};

struct GridSpec {
  int dim = 1;
  long nx = 64, ny = 64;
  double Lx = 1.0, Ly = 1.0;
};

struct InitialSpec {
  InitialKind kind = InitialKind::ConstantNoise;
  double mass = 0.0;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int mode_x = 1, mode_y = 0;
  std::string path;
};

struct OutputSpec {
  std::string csv_path = "run.csv";
  std::string snapshot_dir = "snapshots";
  long snapshot_every = 0;  // 0: only initial and final snapshots
};

struct RunSpec {
  std::string scenario = "custom";
  ModelSpec model;
  GridSpec grid;
  InitialSpec initial;
  StepConfig stepping;
  double t_end = 1.0;
  OutputSpec output;

  ModelParams make_model() const;
  Grid make_grid() const;
  Field make_initial_field() const;
};

/// Strict line-oriented "[section]" / "key = value" parser; '#' starts a
/// comment, unknown sections or keys are errors. Throws ParseError with a
/// line number or ValidationError naming the offending field.
RunSpec parse_config(const std::string& text);
RunSpec parse_config_file(const std::string& path);
std::string emit_config(const RunSpec& spec);

const std::vector<std::string>& preset_names();
RunSpec preset(const std::string& name);

// Snapshot format: ASCII "key=value" header opened by the magic line
// "NLCH1", terminated by a blank line, then nx*ny little-endian doubles,
// row-major x-fastest. Round trips are bit-exact.
void write_snapshot(const std::string& path, const Field& field, double t,
                    double m);
struct SnapshotData {
  Field field;
  double t = 0.0;
  double m = 0.0;
};
SnapshotData read_snapshot(const std::string& path);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const TimeSeriesRecord& rec);
std::vector<TimeSeriesRecord> read_csv(const std::string& path);

struct RunArtifacts {
  std::string csv_path;
  std::vector<std::string> snapshot_paths;
  long accepted_steps = 0;
  bool reached_equilibrium = false;
  double final_residual = 0.0;
  double E_inf = 0.0;
  std::optional<double> theta_hat;
  std::string summary;
};

/// Executes the scenario: time series CSV, snapshots per cadence and a
/// trailing summary comment line. The contdep and stability_probe
/// scenarios write their experiment reports instead of a plain run.
RunArtifacts run_scenario(const RunSpec& spec);

}  // namespace nlch

#endif
