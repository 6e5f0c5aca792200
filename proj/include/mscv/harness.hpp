#pragma once

#include "mscv/postprocess.hpp"
#include "mscv/problems.hpp"
#include "mscv/reduction.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mscv {

/// One experiment: example "1".."5", "darcy" or "stokes".
struct RunConfig {
  std::string example = "1";
  Method method = Method::Method1;
  MeshFamily mesh = MeshFamily::Structured;
  int level_min = 0;
  int level_max = 4;
  int base = 0;  // cells per side on level 0; 0 picks the example's default
  std::optional<double> lambda;
  std::optional<double> mu;
  std::uint64_t seed = 2024;
  double tol = 1e-12;
  std::string out;
};

/// Throws Error on inconsistent settings.
void validate(const RunConfig& cfg);

/// Sets one option by its flag name (without dashes): example, method, mesh,
/// levels (A..B), base, lambda, mu, seed, tol, out.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// key=value lines; blank lines and '#' comments are skipped.
std::map<std::string, std::string> read_config_file(const std::string& path);

int default_base(const RunConfig& cfg);
int spatial_dim(const RunConfig& cfg);

/// The manufactured elasticity case of an example with overrides applied.
ManufacturedCase make_case(const RunConfig& cfg);

struct ConvergenceRow {
  double h = 0.0;
  std::vector<double> err;
  std::vector<double> rate;  // NaN on the first row
  int iterations = 0;
  double wall_time = 0.0;
  // diagnostics, not written to CSV
  int unknowns = 0;
  int max_row_nnz = 0;
  int pivoted_blocks = 0;
  double solve_residual = 0.0;
  double conservation = 0.0;
  double extra = 0.0;  // Stokes: smallest singular value (-1 if skipped)
};

struct ConvergenceTable {
  std::vector<std::string> columns;
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Elasticity columns: sigma, mean_sigma, u, gamma, u_0h.
/// Darcy: velocity, pressure. Stokes: velocity, divergence.
std::vector<std::string> table_columns(const RunConfig& cfg);

ConvergenceTable run_convergence(const RunConfig& cfg);

/// log2(prev / cur).
double rate(double prev, double cur);

std::string version_string();

void emit_csv(const ConvergenceTable& table, std::ostream& os);
void emit_csv(const ConvergenceTable& table, const std::string& path);
ConvergenceTable read_csv(std::istream& is);
ConvergenceTable read_csv_file(const std::string& path);

/// CSV point cloud, one row per macro-element: center, displacement, mean
/// stress, rotation at the center, and the conservation residual when the
/// load vector is given.
void dump_fields(const McsvSolution& sol, const SubMesh& sub, const std::string& path,
                 const Eigen::VectorXd* F = nullptr);

}  // namespace mscv
