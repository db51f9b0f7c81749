#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid arguments,
// 2 numerical or I/O failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vsl/bessel_oracle.hpp"
#include "vsl/errors.hpp"
#include "vsl/identity_suite.hpp"
#include "vsl/io_reporting.hpp"
#include "vsl/ns_disk_solver.hpp"
#include "vsl/sweep_harness.hpp"

namespace vsl {

namespace detail {
inline void write_fields_csv(std::ostream& os, const RadialField& u) {
  const auto omega = vorticity_radial(u);
  os << "r,u_theta,omega\n";
  for (std::size_t i = 0; i < u.size(); ++i)
    os << format_double(u.grid()[i]) << ',' << format_double(u[i]) << ',' << format_double(omega[i]) << '\n';
}
}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Vanishing-viscosity and vortex-sheet verification on the unit disk", "vsl"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<double> nu, T, dt;
  std::optional<std::size_t> N;
  int dim = 2;
  std::size_t n = 64;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "Solve one trajectory and write r,u_theta,omega at t = T");
  solve->add_option("--config", config_path, "Scenario config (key = value)");
  solve->add_option("--nu", nu, "Viscosity")->required();
  solve->add_option("--N", N, "Radial intervals");
  solve->add_option("--T", T, "Final time");
  solve->add_option("--dt", dt, "Time step");
  solve->add_option("--out", out_dir, "Output directory (default: CSV on standard output)");

  auto* sweep = app.add_subcommand("sweep", "Run a viscosity sweep and write all result files");
  sweep->add_option("--config", config_path, "Sweep config (key = value)")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--N", N, "Radial intervals (overrides config)");
  sweep->add_option("--T", T, "Final time (overrides config)");
  sweep->add_option("--dt", dt, "Time step (overrides config)");

  auto* check = app.add_subcommand("check-identities", "Residual table for the vector-calculus identities");
  check->add_option("--dim", dim, "Dimension")->check(CLI::IsMember({2, 3}));
  check->add_option("--n", n, "Finest box intervals per axis (multiple of 16)");
  check->add_option("--seed", seed, "Seed for the random fields");

  auto* report = app.add_subcommand("report", "Rebuild the equivalence verdict from stored results");
  report->add_option("--out", out_dir, "Results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 1;
  }

  try {
    if (*solve) {
      if (!(*nu > 0.0)) throw InvalidArgument("nu must be positive");
      SweepConfig c = config_path.empty() ? SweepConfig{} : load_config(config_path);
      if (N) c.N = *N;
      if (T) c.T = *T;
      if (dt) c.dt = *dt, c.dt_kappa = 0.0;
      const auto grid = c.make_grid();
      SolverOptions opt;
      opt.dt = c.time_step(*grid);
      opt.warn = [&](const std::string& w) { err << "warning: " << w << '\n'; };
      const auto traj = solve_ns_radial(c.initial_field(grid), *nu, c.make_forcing(), c.T, {c.T}, opt);
      if (out_dir.empty()) {
        detail::write_fields_csv(out, traj.fields.back());
      } else {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        const auto path = std::filesystem::path(out_dir) / ("fields_" + short_double(*nu) + ".csv");
        std::ostringstream os;
        detail::write_fields_csv(os, traj.fields.back());
        detail::TextFile f(path);
        f << os.str();
        f.close();
        out << path.string() << '\n';
      }
      return 0;
    }
    if (*sweep) {
      SweepConfig c = load_config(config_path);
      if (N) c.N = *N;
      if (T) c.T = *T;
      if (dt) c.dt = *dt, c.dt_kappa = 0.0;
      const auto res = run_sweep(c);
      emit_outputs(res, out_dir);
      for (const auto& o : res.per_nu) {
        for (const auto& w : o.warnings) err << "warning (nu = " << short_double(o.nu) << "): " << w << '\n';
        if (!o.ok) err << "error (nu = " << short_double(o.nu) << "): " << o.error << '\n';
      }
      if (!res.complete()) return 2;
      out << equivalence_report(res).text << '\n';
      return 0;
    }
    if (*check) {
      const auto rows = run_identity_suite(dim, n, seed);
      bool all = true;
      char line[160];
      std::snprintf(line, sizeof line, "%-36s %14s %12s  %s\n", "check", "value", "threshold", "result");
      out << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-36s %14.6e %12.3e  %s\n", r.name.c_str(), r.value, r.threshold,
                      r.pass() ? "PASS" : "FAIL");
        out << line;
        all = all && r.pass();
      }
      return all ? 0 : 2;
    }
    if (*report) {
      const auto chk = report_from_dir(out_dir);
      out << chk.text << '\n';
      if (!chk.reproduced) {
        for (const auto& m : chk.mismatches) err << "mismatch: " << m << '\n';
        return 2;
      }
      out << "verdict reproduced\n";
      return 0;
    }
  } catch (const InvalidArgument& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "I/O failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace vsl
