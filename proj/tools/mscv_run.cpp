// Convergence study driver.
#include "mscv/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Run a refinement study and write the convergence table as CSV"};
  std::string config_path, dump_path;
  std::map<std::string, std::string> flags;
  const char* names[] = {"example", "method", "mesh", "levels", "base", "lambda", "mu", "seed", "tol", "out"};
  const char* help[] = {"1-5, darcy or stokes",
                        "1, 2 or 1-scaled",
                        "structured, parallelogram, smooth or random",
                        "level range A..B (level k has base*2^k cells per side)",
                        "cells per side on level 0",
                        "Lame lambda",
                        "Lame mu",
                        "seed of the random mesh family",
                        "relative CG tolerance",
                        "output CSV path (default: stdout)"};
  for (int k = 0; k < 10; ++k) app.add_option(std::string("--") + names[k], flags[names[k]], help[k]);
  app.add_option("--config", config_path, "key=value file; flags override it");
  app.add_option("--dump", dump_path, "write the finest elasticity solution per cell");
  CLI11_PARSE(app, argc, argv);

  try {
    mscv::RunConfig cfg;
    if (!config_path.empty())
      for (const auto& [k, v] : mscv::read_config_file(config_path)) mscv::apply_setting(cfg, k, v);
    for (const char* k : names)
      if (app.count(std::string("--") + k)) mscv::apply_setting(cfg, k, flags[k]);
    mscv::validate(cfg);

    const mscv::ConvergenceTable table = mscv::run_convergence(cfg);
    if (cfg.out.empty())
      mscv::emit_csv(table, std::cout);
    else
      mscv::emit_csv(table, cfg.out);

    if (!dump_path.empty()) {
      if (cfg.example == "darcy" || cfg.example == "stokes") throw mscv::Error("--dump supports elasticity only");
      const mscv::ManufacturedCase c = mscv::make_case(cfg);
      const int dim = mscv::spatial_dim(cfg);
      const mscv::MacroMesh mesh = mscv::family_mesh(cfg.mesh, cfg.level_max, dim, mscv::default_base(cfg), cfg.seed);
      const mscv::SubMesh sub = mscv::subdivide(mesh);
      const mscv::VectorField f = [&](const mscv::Vec3& x) { return c.f(x); };
      const mscv::VectorField g = [&](const mscv::Vec3& x) { return c.g(x); };
      mscv::SolveOptions so;
      so.tol = cfg.tol;
      const auto run = mscv::solve_elasticity(sub, mscv::sample_material(mesh, c.material), cfg.method, f, g, so);
      const auto load = mscv::assemble_rhs(sub, run.solution.layout, f, g);
      mscv::dump_fields(run.solution, sub, dump_path, &load.F);
    }
  } catch (const std::exception& e) {
    std::cerr << "mscv_run: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
