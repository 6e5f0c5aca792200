#include "mscv/harness.hpp"
#include "mscv/extensions.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef MSCV_VERSION
#define MSCV_VERSION "0.1.0"
#endif

namespace mscv {

namespace {

bool is_elasticity(const std::string& ex) { return ex == "1" || ex == "2" || ex == "3" || ex == "4" || ex == "5"; }

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error("invalid value for " + key + ": '" + v + "'");
  }
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string format_double(double x) {
  return fmt("%.12g", x);
}

Vec3 cell_rotation(const McsvSolution& sol, const SubMesh& sub, int c) {
  if (!rotation_on_regions(sol.layout.method)) return sol.rotation(c);
  Vec3 s = Vec3::Zero();
  const int nv = sub.macro.vertices_per_cell();
  for (int k = 0; k < nv; ++k) s += sol.rotation(sub.macro.cells[c][k]);
  return s / nv;
}

}  // namespace

void validate(const RunConfig& cfg) {
  const bool elastic = is_elasticity(cfg.example);
  if (!elastic && cfg.example != "darcy" && cfg.example != "stokes")
    throw Error("unknown example '" + cfg.example + "' (expected 1-5, darcy or stokes)");
  if (cfg.method == Method::Method1Scaled && !elastic) throw Error("method 1-scaled is only valid for elasticity");
  if (cfg.example == "2" && cfg.mesh != MeshFamily::Structured)
    throw Error("3D runs (example 2) need the structured mesh family");
  if (cfg.example == "3" && (cfg.lambda || cfg.mu)) throw Error("example 3 has a fixed material; drop --lambda/--mu");
  if ((cfg.example == "darcy" || cfg.example == "stokes") && (cfg.lambda || cfg.mu))
    throw Error("--lambda/--mu apply to elasticity only");
  if (cfg.level_min < 0 || cfg.level_max < cfg.level_min) throw Error("invalid level range");
  if (cfg.base < 0) throw Error("base must be positive");
  if (!(cfg.tol > 0.0)) throw Error("tolerance must be positive");
  if ((cfg.lambda && !(*cfg.lambda > 0.0)) || (cfg.mu && !(*cfg.mu > 0.0)))
    throw Error("Lame coefficients must be positive");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "example") {
    cfg.example = v;
  } else if (key == "method") {
    cfg.method = parse_method(v);
  } else if (key == "mesh") {
    cfg.mesh = parse_mesh_family(v);
  } else if (key == "levels") {
    const auto dots = v.find("..");
    try {
      if (dots == std::string::npos) {
        cfg.level_min = cfg.level_max = std::stoi(v);
      } else {
        cfg.level_min = std::stoi(v.substr(0, dots));
        cfg.level_max = std::stoi(v.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw Error("invalid value for levels: '" + v + "' (expected A..B)");
    }
  } else if (key == "base") {
    cfg.base = static_cast<int>(to_double(key, v));
  } else if (key == "lambda") {
    cfg.lambda = to_double(key, v);
  } else if (key == "mu") {
    cfg.mu = to_double(key, v);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(to_double(key, v));
  } else if (key == "tol") {
    cfg.tol = to_double(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else {
    throw Error("unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(path + ":" + std::to_string(no) + ": expected key=value");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

int default_base(const RunConfig& cfg) {
  if (cfg.base > 0) return cfg.base;
  if (cfg.example == "3") return 6;
  if (cfg.example == "darcy") return 8;
  return 4;
}

int spatial_dim(const RunConfig& cfg) { return cfg.example == "2" ? 3 : 2; }

ManufacturedCase make_case(const RunConfig& cfg) {
  if (cfg.example == "1" || cfg.example == "5") return example1(cfg.lambda.value_or(123.0), cfg.mu.value_or(79.3));
  if (cfg.example == "2") return example2_3d(cfg.lambda.value_or(79.3), cfg.mu.value_or(79.3));
  if (cfg.example == "3") return example3_hetero();
  if (cfg.example == "4") return example4_incompressible(cfg.lambda.value_or(1e6), cfg.mu.value_or(1.0));
  throw Error("example " + cfg.example + " is not an elasticity case");
}

std::vector<std::string> table_columns(const RunConfig& cfg) {
  if (cfg.example == "darcy") return {"velocity", "pressure"};
  if (cfg.example == "stokes") return {"velocity", "pressure"};
  return {"sigma", "mean_sigma", "u", "gamma", "u_0h"};
}

double rate(double prev, double cur) { return std::log2(prev / cur); }

std::string version_string() { return MSCV_VERSION; }

ConvergenceTable run_convergence(const RunConfig& cfg) {
  validate(cfg);
  ConvergenceTable table;
  table.columns = table_columns(cfg);
  const int dim = spatial_dim(cfg);
  const int base = default_base(cfg);
  const bool elastic = is_elasticity(cfg.example);

  auto& md = table.metadata;
  md.push_back({"example", cfg.example});
  if (elastic) md.push_back({"method", to_string(cfg.method)});
  md.push_back({"mesh", to_string(cfg.mesh)});
  md.push_back({"levels", std::to_string(cfg.level_min) + ".." + std::to_string(cfg.level_max)});
  md.push_back({"base", std::to_string(base)});
  if (elastic && cfg.example != "3") {
    const ManufacturedCase c = make_case(cfg);
    const Lame l = c.material(Vec3::Zero());
    md.push_back({"lambda", format_double(l.lambda)});
    md.push_back({"mu", format_double(l.mu)});
  }
  if (cfg.example == "3") md.push_back({"kappa", "1e+06"});
  if (cfg.example == "4") md.push_back({"load", "exact"});
  md.push_back({"seed", std::to_string(cfg.seed)});
  md.push_back({"tol", format_double(cfg.tol)});
  if (elastic) {
    md.push_back({"body_force", "cell-center"});
    md.push_back({"boundary", "facet-center"});
    md.push_back({"gamma_norm", "sample"});
  }
  md.push_back({"version", version_string()});

  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const int n = base << level;
    try {
      const MacroMesh mesh = family_mesh(cfg.mesh, level, dim, base, cfg.seed);
      const SubMesh sub = subdivide(mesh);
      ConvergenceRow row;
      row.h = mesh.h;
      const auto t0 = std::chrono::steady_clock::now();
      if (elastic) {
        const ManufacturedCase c = make_case(cfg);
        const MaterialField mat = sample_material(mesh, c.material);
        SolveOptions so;
        so.tol = cfg.tol;
        const VectorField f = [&](const Vec3& x) { return c.f(x); };
        const VectorField g = [&](const Vec3& x) { return c.g(x); };
        const ElasticityRun run = solve_elasticity(sub, mat, cfg.method, f, g, so);
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ExactFields ex;
        ex.sigma = [&](const Vec3& x) { return c.sigma(x); };
        ex.u = c.u;
        if (cfg.method == Method::Method1Scaled)
          ex.gamma = [&](const Vec3& x) { return c.scaled_rotation(x); };
        else
          ex.gamma = [&](const Vec3& x) { return c.rotation(x); };
        const ErrorRecord e = error_norms(run.solution, ex, sub);
        row.err = {e.sigma, e.mean_sigma, e.u, e.gamma, e.u_0h};
        row.iterations = run.report.iterations;
        row.unknowns = run.system_size;
        row.max_row_nnz = run.max_row_nnz;
        row.pivoted_blocks = run.pivoted_blocks;
        row.solve_residual = run.report.residual;
        const LoadVectors load = assemble_rhs(sub, run.solution.layout, f, g);
        double worst = 0.0;
        for (const Vec3& r : conservation_residual(run.solution, sub, load.F)) worst = std::max(worst, r.norm());
        row.conservation = worst;
      } else if (cfg.example == "darcy") {
        const DarcyCase c = darcy_case();
        SolveOptions so;
        so.tol = cfg.tol;
        const DarcySolution sol = solve_darcy(sub, c.f, c.p, so);
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const DarcyErrors e = darcy_errors(sol, sub, c.u, c.p);
        row.err = {e.velocity, e.pressure};
        row.iterations = sol.report.iterations;
        row.unknowns = mesh.num_cells();
        row.solve_residual = sol.report.residual;
        double worst = 0.0;
        for (double r : darcy_mass_balance(sol, sub, c.f)) worst = std::max(worst, std::abs(r));
        row.conservation = worst;
      } else {
        const StokesCase c = stokes_case();
        StokesOptions so;
        so.tol = cfg.tol;
        const StokesSolution sol = solve_stokes(sub, c.f, so);
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double ep = 0.0, np = 0.0;
        for (int v = 0; v < sub.num_regions(); ++v) {
          double w = 0.0;
          for (int s : sub.regions[v].subcells) w += sub.subcells[s].measure;
          const double p = c.p(mesh.vertices[v]);
          ep += w * (p - sol.pressure[v]) * (p - sol.pressure[v]);
          np += w * p * p;
        }
        row.err = {stokes_velocity_error(sol, sub, c.u), std::sqrt(ep / np)};
        row.iterations = sol.iterations;
        row.unknowns = 2 * mesh.num_cells() + mesh.num_vertices();
        row.solve_residual = sol.schur_residual;
        row.conservation = sol.divergence;
        row.extra = sol.min_singular_value;
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.rate.assign(row.err.size(), nan);
      if (!table.rows.empty())
        for (size_t k = 0; k < row.err.size(); ++k) row.rate[k] = rate(table.rows.back().err[k], row.err[k]);
      table.rows.push_back(std::move(row));
    } catch (const Error& e) {
      throw Error("level " + std::to_string(level) + " (h=1/" + std::to_string(n) + "): " + e.what());
    }
  }
  return table;
}

void emit_csv(const ConvergenceTable& table, std::ostream& os) {
  os << "h";
  for (const auto& c : table.columns) os << ",err_" << c << ",rate_" << c;
  os << ",iterations,wall_time\n";
  for (const auto& r : table.rows) {
    os << fmt("%.3E", r.h);
    for (size_t k = 0; k < table.columns.size(); ++k) {
      os << ',' << fmt("%.3E", r.err[k]) << ',';
      if (k < r.rate.size() && std::isfinite(r.rate[k])) os << fmt("%.4f", r.rate[k]);
    }
    os << ',' << r.iterations << ',' << fmt("%.3E", r.wall_time) << '\n';
  }
  for (const auto& [k, v] : table.metadata) os << "# " << k << '=' << v << '\n';
}

void emit_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  emit_csv(table, out);
  if (!out) throw Error("write failed: " + path);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

ConvergenceTable read_csv(std::istream& is) {
  ConvergenceTable t;
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV");
  const auto head = split(line, ',');
  if (head.size() < 3 || head[0] != "h") throw Error("not a convergence table header");
  for (size_t k = 1; k + 2 < head.size(); k += 2) {
    if (head[k].rfind("err_", 0) != 0) throw Error("unexpected column " + head[k]);
    t.columns.push_back(head[k].substr(4));
  }
  const size_t nc = t.columns.size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      t.metadata.push_back({body.substr(0, eq), eq == std::string::npos ? "" : body.substr(eq + 1)});
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 2 * nc + 3) throw Error("bad CSV row: " + line);
    ConvergenceRow r;
    r.h = std::stod(f[0]);
    for (size_t k = 0; k < nc; ++k) {
      r.err.push_back(std::stod(f[1 + 2 * k]));
      const std::string& rt = f[2 + 2 * k];
      r.rate.push_back(rt.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(rt));
    }
    r.iterations = std::stoi(f[2 * nc + 1]);
    r.wall_time = std::stod(f[2 * nc + 2]);
    t.rows.push_back(std::move(r));
  }
  return t;
}

ConvergenceTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_csv(in);
}

void dump_fields(const McsvSolution& sol, const SubMesh& sub, const std::string& path, const Eigen::VectorXd* F) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  const int d = sub.dim();
  const char* ax = "xyz";
  out << "cell";
  for (int a = 0; a < d; ++a) out << ',' << ax[a];
  for (int a = 0; a < d; ++a) out << ",u" << ax[a];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out << ",sigma_" << ax[a] << ax[b];
  if (d == 2)
    out << ",gamma";
  else
    out << ",gamma_x,gamma_y,gamma_z";
  if (F) out << ",residual";
  out << '\n';
  const auto ms = mean_stress(sol, sub);
  const auto centers = cell_centroids(sub);
  std::vector<Vec3> res;
  if (F) res = conservation_residual(sol, sub, *F);
  out.precision(10);
  for (int c = 0; c < sub.macro.num_cells(); ++c) {
    out << c;
    for (int a = 0; a < d; ++a) out << ',' << centers[c][a];
    const Vec3 u = sol.displacement(c);
    for (int a = 0; a < d; ++a) out << ',' << u[a];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out << ',' << ms[c](a, b);
    const Vec3 g = cell_rotation(sol, sub, c);
    for (int k = 0; k < rotation_components(d); ++k) out << ',' << g[k];
    if (F) out << ',' << res[c].norm();
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mscv
