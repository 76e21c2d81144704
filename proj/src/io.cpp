#include "nlch/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "nlch/random.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot payload assumes a little-endian host");

namespace nlch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("field '" + key + "': not a number: '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("field '" + key + "': not an integer: '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key));
  }
  if (out.empty()) throw ValidationError("field '" + key + "': empty list");
  return out;
}

CoeffKind parse_kind(const std::string& v, const std::string& key) {
  if (v == "constant") return CoeffKind::Constant;
  if (v == "polynomial") return CoeffKind::Polynomial;
  throw ValidationError("field '" + key + "': unknown coefficient kind '" + v + "'");
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_g17(v[i]);
  }
  return out;
}

}  // namespace

ModelParams RunSpec::make_model() const {
  try {
    return ModelParams::make(model.theta, model.theta0,
                             CoefficientFn::validate(model.a_kind, model.a_coeffs),
                             CoefficientFn::validate(model.b_kind, model.b_coeffs),
                             model.clamp_delta);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

Grid RunSpec::make_grid() const {
  try {
    return grid.dim == 1 ? Grid::make_1d(grid.nx, grid.Lx)
                         : Grid::make_2d(grid.nx, grid.ny, grid.Lx, grid.Ly);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

Field RunSpec::make_initial_field() const {
  const Grid g = make_grid();
  Field f(g, initial.mass);
  switch (initial.kind) {
    case InitialKind::ConstantNoise: {
      if (initial.amplitude > 0.0) {
        const Field noise = noise_field(g, initial.amplitude, initial.seed);
        f.values += noise.values;
      }
      break;
    }
    case InitialKind::CosineMode: {
      for (Eigen::Index j = 0; j < g.ny; ++j)
        for (Eigen::Index i = 0; i < g.nx; ++i) {
          double v = std::cos(std::numbers::pi * initial.mode_x * g.x_center(i) / g.Lx);
          if (g.dim == 2 && initial.mode_y > 0)
            v *= std::cos(std::numbers::pi * initial.mode_y * g.y_center(j) / g.Ly);
          f(i, j) += initial.amplitude * v;
        }
      break;
    }
    case InitialKind::TanhProfile: {
      const double width = g.Lx / 16.0;
      for (Eigen::Index j = 0; j < g.ny; ++j)
        for (Eigen::Index i = 0; i < g.nx; ++i)
          f(i, j) += initial.amplitude *
                     std::tanh((g.x_center(i) - 0.5 * g.Lx) / width);
      f.values += initial.mass - f.values.mean();
      break;
    }
    case InitialKind::FromSnapshot: {
      SnapshotData snap = read_snapshot(initial.path);
      if (!(snap.field.grid == g))
        throw ValidationError("snapshot grid does not match the [grid] block");
      f = std::move(snap.field);
      break;
    }
  }
  if (linf_norm(f) >= 1.0)
    throw ValidationError("initial field leaves (-1,1); reduce amplitude");
  return f;
}

RunSpec parse_config(const std::string& text) {
  RunSpec spec;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  bool kind_is_noise = true;

  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"run", "model", "grid", "initial", "stepping", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        fail("unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail("key outside any section");

    if (section == "run") {
      if (key == "scenario") spec.scenario = value;
      else fail("unknown key '" + key + "' in [run]");
    } else if (section == "model") {
      if (key == "theta") spec.model.theta = parse_double(value, key);
      else if (key == "theta0") spec.model.theta0 = parse_double(value, key);
      else if (key == "a_kind") spec.model.a_kind = parse_kind(value, key);
      else if (key == "a_coeffs") spec.model.a_coeffs = parse_list(value, key);
      else if (key == "b_kind") spec.model.b_kind = parse_kind(value, key);
      else if (key == "b_coeffs") spec.model.b_coeffs = parse_list(value, key);
      else if (key == "clamp_delta") spec.model.clamp_delta = parse_double(value, key);
      else fail("unknown key '" + key + "' in [model]");
    } else if (section == "grid") {
      if (key == "dim") spec.grid.dim = int(parse_long(value, key));
      else if (key == "nx") spec.grid.nx = parse_long(value, key);
      else if (key == "ny") spec.grid.ny = parse_long(value, key);
      else if (key == "Lx") spec.grid.Lx = parse_double(value, key);
      else if (key == "Ly") spec.grid.Ly = parse_double(value, key);
      else fail("unknown key '" + key + "' in [grid]");
    } else if (section == "initial") {
      if (key == "kind") {
        if (value == "constant_noise") spec.initial.kind = InitialKind::ConstantNoise;
        else if (value == "cosine_mode") spec.initial.kind = InitialKind::CosineMode;
        else if (value == "tanh_profile") spec.initial.kind = InitialKind::TanhProfile;
        else if (value == "from_snapshot") spec.initial.kind = InitialKind::FromSnapshot;
        else fail("unknown initial kind '" + value + "'");
        kind_is_noise = spec.initial.kind == InitialKind::ConstantNoise;
      } else if (key == "mass") spec.initial.mass = parse_double(value, key);
      else if (key == "amplitude") spec.initial.amplitude = parse_double(value, key);
      else if (key == "seed") {
        spec.initial.seed = std::uint64_t(parse_long(value, key));
        spec.initial.seed_set = true;
      } else if (key == "mode_x") spec.initial.mode_x = int(parse_long(value, key));
      else if (key == "mode_y") spec.initial.mode_y = int(parse_long(value, key));
      else if (key == "path") spec.initial.path = value;
      else fail("unknown key '" + key + "' in [initial]");
    } else if (section == "stepping") {
      auto& st = spec.stepping;
      if (key == "dt_init") st.dt_init = parse_double(value, key);
      else if (key == "dt_min") st.dt_min = parse_double(value, key);
      else if (key == "dt_max") st.dt_max = parse_double(value, key);
      else if (key == "newton_tol") st.newton_tol = parse_double(value, key);
      else if (key == "newton_max_iter") st.newton_max_iter = int(parse_long(value, key));
      else if (key == "energy_slack") st.energy_slack = parse_double(value, key);
      else if (key == "shrink") st.shrink = parse_double(value, key);
      else if (key == "grow") st.grow = parse_double(value, key);
      else if (key == "barrier_margin") st.barrier_margin = parse_double(value, key);
      else if (key == "equilibrium_threshold") st.equilibrium_threshold = parse_double(value, key);
      else if (key == "t_end") spec.t_end = parse_double(value, key);
      else fail("unknown key '" + key + "' in [stepping]");
    } else if (section == "output") {
      if (key == "csv_path") spec.output.csv_path = value;
      else if (key == "snapshot_dir") spec.output.snapshot_dir = value;
      else if (key == "snapshot_every") spec.output.snapshot_every = parse_long(value, key);
      else fail("unknown key '" + key + "' in [output]");
    }
  }

  // Validation: every model hypothesis is an input rule.
  if (!(spec.model.theta < spec.model.theta0))
    throw ValidationError("theta < theta0 required");
  (void)spec.make_model();
  if (spec.grid.dim != 1 && spec.grid.dim != 2)
    throw ValidationError("grid dim must be 1 or 2");
  (void)spec.make_grid();
  try {
    spec.stepping.validate();
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  if (!(spec.t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (!(std::abs(spec.initial.mass) < 1.0))
    throw ValidationError("initial mass must lie in (-1,1)");
  if (kind_is_noise && spec.initial.amplitude > 0.0 && !spec.initial.seed_set)
    throw ValidationError("seed is mandatory when noise is used");
  if (spec.initial.kind == InitialKind::FromSnapshot && spec.initial.path.empty())
    throw ValidationError("from_snapshot needs a path");
  return spec;
}

RunSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunSpec& s) {
  std::ostringstream os;
  os << "[run]\nscenario = " << s.scenario << "\n\n";
  os << "[model]\n";
  os << "theta = " << format_g17(s.model.theta) << "\n";
  os << "theta0 = " << format_g17(s.model.theta0) << "\n";
  os << "a_kind = " << (s.model.a_kind == CoeffKind::Constant ? "constant" : "polynomial") << "\n";
  os << "a_coeffs = " << format_list(s.model.a_coeffs) << "\n";
  os << "b_kind = " << (s.model.b_kind == CoeffKind::Constant ? "constant" : "polynomial") << "\n";
  os << "b_coeffs = " << format_list(s.model.b_coeffs) << "\n";
  os << "clamp_delta = " << format_g17(s.model.clamp_delta) << "\n\n";
  os << "[grid]\ndim = " << s.grid.dim << "\nnx = " << s.grid.nx;
  if (s.grid.dim == 2) os << "\nny = " << s.grid.ny;
  os << "\nLx = " << format_g17(s.grid.Lx);
  if (s.grid.dim == 2) os << "\nLy = " << format_g17(s.grid.Ly);
  os << "\n\n[initial]\nkind = ";
  switch (s.initial.kind) {
    case InitialKind::ConstantNoise: os << "constant_noise"; break;
    case InitialKind::CosineMode: os << "cosine_mode"; break;
    case InitialKind::TanhProfile: os << "tanh_profile"; break;
    case InitialKind::FromSnapshot: os << "from_snapshot"; break;
  }
  os << "\nmass = " << format_g17(s.initial.mass);
  os << "\namplitude = " << format_g17(s.initial.amplitude) << "\n";
  if (s.initial.seed_set) os << "seed = " << s.initial.seed << "\n";
  if (s.initial.kind == InitialKind::CosineMode) {
    os << "mode_x = " << s.initial.mode_x << "\n";
    if (s.grid.dim == 2) os << "mode_y = " << s.initial.mode_y << "\n";
  }
  if (s.initial.kind == InitialKind::FromSnapshot)
    os << "path = " << s.initial.path << "\n";
  os << "\n[stepping]\n";
  os << "dt_init = " << format_g17(s.stepping.dt_init) << "\n";
  os << "dt_min = " << format_g17(s.stepping.dt_min) << "\n";
  os << "dt_max = " << format_g17(s.stepping.dt_max) << "\n";
  os << "newton_tol = " << format_g17(s.stepping.newton_tol) << "\n";
  os << "newton_max_iter = " << s.stepping.newton_max_iter << "\n";
  os << "energy_slack = " << format_g17(s.stepping.energy_slack) << "\n";
  os << "shrink = " << format_g17(s.stepping.shrink) << "\n";
  os << "grow = " << format_g17(s.stepping.grow) << "\n";
  os << "barrier_margin = " << format_g17(s.stepping.barrier_margin) << "\n";
  os << "equilibrium_threshold = " << format_g17(s.stepping.equilibrium_threshold) << "\n";
  os << "t_end = " << format_g17(s.t_end) << "\n";
  os << "\n[output]\n";
  os << "csv_path = " << s.output.csv_path << "\n";
  os << "snapshot_dir = " << s.output.snapshot_dir << "\n";
  os << "snapshot_every = " << s.output.snapshot_every << "\n";
  return os.str();
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "constant",        "spinodal1d",     "spinodal2d",
      "dispersion_check", "matano_constant", "stability_probe",
      "contdep",         "ls_tail",        "classic_regression"};
  return names;
}

RunSpec preset(const std::string& name) {
  RunSpec s;
  s.scenario = name;
  s.output.csv_path = name + ".csv";
  s.output.snapshot_dir = name + "_snapshots";

  if (name == "constant") {
    s.grid = {1, 64, 1, 1.0, 1.0};
    s.initial = {InitialKind::ConstantNoise, 0.3, 0.0, 0, false, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 1e-2;
    s.t_end = 0.1;
  } else if (name == "spinodal1d" || name == "classic_regression") {
    s.grid = {1, 128, 1, 4.0, 1.0};
    s.initial = {InitialKind::ConstantNoise, 0.0, 1e-2, 42, true, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 0.25;
    s.t_end = 200.0;
  } else if (name == "spinodal2d") {
    s.grid = {2, 64, 64, 25.0, 25.0};
    s.initial = {InitialKind::ConstantNoise, 0.0, 1e-2, 7, true, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 4e-3;
    s.t_end = 5.0;
  } else if (name == "dispersion_check") {
    s.grid = {1, 128, 1, 1.0, 1.0};
    s.initial = {InitialKind::CosineMode, 0.0, 1e-4, 0, false, 2, 0, ""};
    s.stepping.dt_init = 1e-6;
    s.stepping.dt_min = 1e-9;
    s.stepping.dt_max = 1e-6;
    s.t_end = 2e-4;
  } else if (name == "matano_constant") {
    s.grid = {1, 64, 1, 1.0, 1.0};
    s.initial = {InitialKind::ConstantNoise, 0.85, 1e-2, 3, true, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 0.5;
    s.t_end = 50.0;
  } else if (name == "stability_probe") {
    s.grid = {1, 64, 1, 4.0, 1.0};
    s.initial = {InitialKind::ConstantNoise, 0.85, 0.0, 5, true, 1, 0, ""};
    s.stepping.dt_init = 1e-3;
    s.stepping.dt_max = 0.1;
    s.t_end = 10.0;
  } else if (name == "contdep") {
    s.grid = {2, 32, 32, 25.0, 25.0};
    s.initial = {InitialKind::ConstantNoise, 0.0, 1e-2, 11, true, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 1e-2;
    s.t_end = 1.0;
  } else if (name == "ls_tail") {
    s.grid = {1, 128, 1, 4.0, 1.0};
    s.initial = {InitialKind::TanhProfile, 0.0, 0.9, 0, false, 1, 0, ""};
    s.stepping.dt_init = 1e-4;
    s.stepping.dt_max = 0.25;
    s.t_end = 400.0;
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return s;
}

void write_snapshot(const std::string& path, const Field& field, double t,
                    double m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open snapshot for writing: " + path);
  const Grid& g = field.grid;
  out << "NLCH1\n";
  out << "dim=" << g.dim << "\n";
  out << "nx=" << g.nx << "\n";
  out << "ny=" << g.ny << "\n";
  out << "Lx=" << format_g17(g.Lx) << "\n";
  out << "Ly=" << format_g17(g.Ly) << "\n";
  out << "t=" << format_g17(t) << "\n";
  out << "m=" << format_g17(m) << "\n";
  out << "\n";
  out.write(reinterpret_cast<const char*>(field.values.data()),
            std::streamsize(sizeof(double)) * field.values.size());
  if (!out) throw IoError("short write on snapshot: " + path);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "NLCH1")
    throw FormatError("bad snapshot magic in " + path);
  std::map<std::string, std::string> header;
  while (std::getline(in, line) && !line.empty()) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("malformed snapshot header line: " + line);
    header[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* k : {"dim", "nx", "ny", "Lx", "Ly", "t", "m"})
    if (!header.count(k)) throw FormatError(std::string("missing header key ") + k);

  const int dim = int(parse_long(header["dim"], "dim"));
  const long nx = parse_long(header["nx"], "nx");
  const long ny = parse_long(header["ny"], "ny");
  const double Lx = parse_double(header["Lx"], "Lx");
  const double Ly = parse_double(header["Ly"], "Ly");
  Grid g;
  try {
    g = dim == 1 ? Grid::make_1d(nx, Lx) : Grid::make_2d(nx, ny, Lx, Ly);
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  SnapshotData snap;
  snap.t = parse_double(header["t"], "t");
  snap.m = parse_double(header["m"], "m");
  snap.field = Field(g);
  in.read(reinterpret_cast<char*>(snap.field.values.data()),
          std::streamsize(sizeof(double)) * g.cells());
  if (in.gcount() != std::streamsize(sizeof(double)) * g.cells())
    throw FormatError("snapshot payload truncated: " + path);
  char extra;
  if (in.read(&extra, 1))
    throw FormatError("snapshot payload has trailing bytes: " + path);
  return snap;
}

void write_csv_header(std::ostream& os) {
  os << "# nlch-timeseries v1\n";
  os << "t,dt,mass,energy,dissipation,min_phi,max_phi,separation,mu_mean,"
        "mu_fluct_l2,rate_hminus1,newton_iters\n";
}

void write_csv_row(std::ostream& os, const TimeSeriesRecord& r) {
  os << format_g17(r.t) << ',' << format_g17(r.dt) << ',' << format_g17(r.mass)
     << ',' << format_g17(r.energy) << ',' << format_g17(r.dissipation) << ','
     << format_g17(r.min_phi) << ',' << format_g17(r.max_phi) << ','
     << format_g17(r.separation) << ',' << format_g17(r.mu_mean) << ','
     << format_g17(r.mu_fluct_l2) << ',' << format_g17(r.rate_hminus1) << ','
     << r.newton_iters << '\n';
}

std::vector<TimeSeriesRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV: " + path);
  std::vector<TimeSeriesRecord> out;
  std::string line;
  bool saw_names = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!saw_names) {  // column-name line
      saw_names = true;
      continue;
    }
    std::vector<std::string> cols;
    std::istringstream is(line);
    std::string item;
    while (std::getline(is, item, ',')) cols.push_back(item);
    if (cols.size() != 12) throw FormatError("CSV row with wrong column count");
    TimeSeriesRecord r;
    r.t = parse_double(cols[0], "t");
    r.dt = parse_double(cols[1], "dt");
    r.mass = parse_double(cols[2], "mass");
    r.energy = parse_double(cols[3], "energy");
    r.dissipation = parse_double(cols[4], "dissipation");
    r.min_phi = parse_double(cols[5], "min_phi");
    r.max_phi = parse_double(cols[6], "max_phi");
    r.separation = parse_double(cols[7], "separation");
    r.mu_mean = parse_double(cols[8], "mu_mean");
    r.mu_fluct_l2 = parse_double(cols[9], "mu_fluct_l2");
    r.rate_hminus1 = parse_double(cols[10], "rate_hminus1");
    r.newton_iters = int(parse_long(cols[11], "newton_iters"));
    out.push_back(r);
  }
  return out;
}

namespace {

RunArtifacts run_simulation(const RunSpec& spec) {
  const ModelParams params = spec.make_model();
  const Grid grid = spec.make_grid();
  const EllipticWorkspace workspace(grid);
  const Field phi0 = spec.make_initial_field();
  const double m = mean(phi0);

  std::filesystem::create_directories(spec.output.snapshot_dir);
  std::ofstream csv(spec.output.csv_path);
  if (!csv) throw IoError("cannot open CSV for writing: " + spec.output.csv_path);
  write_csv_header(csv);

  RunArtifacts art;
  art.csv_path = spec.output.csv_path;
  auto snap_path = [&](long k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%06ld.bin", k);
    return (std::filesystem::path(spec.output.snapshot_dir) / buf).string();
  };
  write_snapshot(snap_path(0), phi0, 0.0, m);
  art.snapshot_paths.push_back(snap_path(0));

  Field prev = phi0;
  long step = 0;
  auto observer = [&](double t, const Field& phi, const Field&, const StepOutcome& o) {
    ++step;
    const TimeSeriesRecord rec = record_observables(params, workspace, t, o.dt_used,
                                                    phi, prev, o.newton_iters);
    write_csv_row(csv, rec);
    csv.flush();
    prev = phi;
    if (spec.output.snapshot_every > 0 && step % spec.output.snapshot_every == 0) {
      write_snapshot(snap_path(step), phi, t, m);
      art.snapshot_paths.push_back(snap_path(step));
    }
  };

  const Trajectory traj =
      advance_adaptive(params, workspace, phi0, spec.t_end, spec.stepping, observer);
  write_snapshot(snap_path(step + 1), traj.phi, traj.t, m);
  art.snapshot_paths.push_back(snap_path(step + 1));

  art.accepted_steps = traj.accepted_steps;
  art.reached_equilibrium = traj.reached_equilibrium;
  const StationaryResidual res = stationary_residual(params, traj.phi);
  art.final_residual = res.norm;
  art.E_inf = discrete_energy(params, traj.phi).total;

  std::ostringstream summary;
  summary << "final_residual=" << format_g17(art.final_residual)
          << " E_inf=" << format_g17(art.E_inf)
          << " accepted_steps=" << art.accepted_steps
          << " equilibrium=" << (art.reached_equilibrium ? 1 : 0)
          << " min_separation=" << format_g17(traj.min_separation);

  if (spec.scenario == "ls_tail") {
    try {
      const auto series = read_csv(spec.output.csv_path);
      const LojasiewiczFit fit = lojasiewicz_fit(series, art.E_inf);
      art.theta_hat = fit.theta_hat;
      summary << " theta_hat=" << format_g17(fit.theta_hat)
              << " r_squared=" << format_g17(fit.r_squared);
    } catch (const InsufficientData&) {
      summary << " theta_hat=nan";
    }
  }
  if (spec.scenario == "matano_constant") {
    StationaryState state;
    state.u = traj.phi;
    state.m = m;
    state.residual_norm = res.norm;
    state.lambda = res.lambda;
    const MatanoReport rep = verify_matano(params, state);
    summary << " matano=" << (rep.within_bounds ? "within_bounds" : "violated")
            << " matano_lower=" << format_g17(rep.lower)
            << " matano_upper=" << format_g17(rep.upper);
  }
  art.summary = summary.str();
  csv << "# summary: " << art.summary << "\n";
  return art;
}

RunArtifacts run_contdep(const RunSpec& spec) {
  const ModelParams params = spec.make_model();
  const Grid grid = spec.make_grid();
  const EllipticWorkspace workspace(grid);
  const Field phi1 = spec.make_initial_field();
  Field offset = noise_field(grid, 1e-3, spec.initial.seed + 1);
  Field phi2 = phi1;
  phi2.values += offset.values;

  const ContinuousDependenceReport rep = continuous_dependence(
      params, workspace, phi1, phi2, spec.t_end, spec.stepping);

  std::ofstream csv(spec.output.csv_path);
  if (!csv) throw IoError("cannot open CSV for writing: " + spec.output.csv_path);
  csv << "# nlch-contdep v1\nt,ratio\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    csv << format_g17(rep.times[i]) << ',' << format_g17(rep.ratios[i]) << '\n';

  RunArtifacts art;
  art.csv_path = spec.output.csv_path;
  std::ostringstream summary;
  summary << "initial_distance=" << format_g17(rep.initial_distance)
          << " max_ratio=" << format_g17(rep.max_ratio);
  art.summary = summary.str();
  csv << "# summary: " << art.summary << "\n";
  return art;
}

RunArtifacts run_stability_probe(const RunSpec& spec) {
  const ModelParams params = spec.make_model();
  const Grid grid = spec.make_grid();
  const EllipticWorkspace workspace(grid);

  // Constant states are exactly stationary; polish is a no-op but records
  // the residual and multiplier.
  const Field u0(grid, spec.initial.mass);
  const StationaryState state = steady_solve(params, workspace, u0,
                                             spec.initial.mass, spec.stepping);
  const double eta = spec.initial.amplitude > 0.0 ? spec.initial.amplitude : 1e-3;
  const StabilityReport rep = stability_probe(params, workspace, state, eta,
                                              spec.t_end, 0.1, spec.stepping,
                                              spec.initial.seed);

  std::ofstream csv(spec.output.csv_path);
  if (!csv) throw IoError("cannot open CSV for writing: " + spec.output.csv_path);
  csv << "# nlch-stability v1\nt,h2_distance\n";
  for (const auto& [t, d] : rep.samples)
    csv << format_g17(t) << ',' << format_g17(d) << '\n';

  RunArtifacts art;
  art.csv_path = spec.output.csv_path;
  std::ostringstream summary;
  summary << "sup_distance=" << format_g17(rep.sup_distance)
          << " stayed_within=" << (rep.stayed_within ? 1 : 0)
          << " exit_time=" << format_g17(rep.exit_time);
  art.summary = summary.str();
  csv << "# summary: " << art.summary << "\n";
  return art;
}

}  // namespace

RunArtifacts run_scenario(const RunSpec& spec) {
  if (spec.scenario == "contdep") return run_contdep(spec);
  if (spec.scenario == "stability_probe") return run_stability_probe(spec);
  return run_simulation(spec);
}

}  // namespace nlch
