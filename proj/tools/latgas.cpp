#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latgas/bounds.hpp"
#include "latgas/config.hpp"
#include "latgas/errors.hpp"
#include "latgas/free_oracle.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"
#include "latgas/harness.hpp"
#include "latgas/util.hpp"

namespace {

using latgas::fmt_g;

struct PhysicalArgs {
  int N = 0;
  double J_over_hbar = 0.0;
  double r0 = 0.0;
  int D = 1;
  double beta_minus_alpha = 0.0;
  double ell = 0.0;
  double t = 0.0;
  std::string mode = "replica";
};

struct MassmatArgs {
  double a = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  double d = 0.0;
  int N = 0;
  std::string t_grid;
  double v = -1.0;  // negative: derive from --J/--D
  double J = 1.0;
  int D = 1;
};

struct VelocityArgs {
  std::string lattice;
  std::string hopping;
  std::vector<double> a;
  double beta_minus_alpha = 1.0;
};

struct OracleArgs {
  int L = 0;
  int N = 0;
  double theta = 0.0;
  std::string t_grid;
  std::vector<int> r;
  double amplitude = 1.0;
  std::vector<double> field;
  int delta_site = 0;
  std::vector<double> f;
  std::string csv;
};

int do_physical(const PhysicalArgs& a) {
  latgas::bounds::UnitsMode mode;
  if (a.mode == "replica")
    mode = latgas::bounds::UnitsMode::Replica;
  else if (a.mode == "exact")
    mode = latgas::bounds::UnitsMode::Exact;
  else
    latgas::fail(latgas::ErrorKind::ConfigError,
                 "--mode must be replica or exact");
  const latgas::bounds::PhysicalBound pb = latgas::bounds::physical_units_bound(
      a.N, a.J_over_hbar, a.r0, a.D, a.beta_minus_alpha, a.ell, a.t, mode);
  std::cout << "exponent = " << fmt_g(pb.exponent) << '\n';
  std::cout << "probability = " << fmt_g(pb.probability) << '\n';
  return 0;
}

int do_massmat(const MassmatArgs& a) {
  latgas::hamiltonian::BoundParams p;
  p.a = a.a;
  p.alpha = a.alpha;
  p.beta = a.beta;
  p.d_xy = a.d;
  p.N = a.N;
  if (a.v >= 0.0) {
    p.v = a.v;
    p.kappa = a.v;  // no hopping given; the first moment is unknown
  } else {
    p.v = 2.0 * a.D * std::abs(a.J) * std::sinh(a.a) / a.a;
    p.kappa = 2.0 * a.D * std::abs(a.J);
  }
  const std::vector<double> ts = latgas::config::parse_real_grid(a.t_grid);
  std::cout << "t,exponent,norm_bound,probability_bound\n";
  for (double t : ts) {
    const latgas::bounds::BoundEvaluation ev =
        latgas::bounds::massmat_bound(p, t);
    std::cout << fmt_g(t) << ',' << fmt_g(ev.exponent) << ','
              << fmt_g(ev.norm_bound) << ',' << fmt_g(ev.probability_bound)
              << '\n';
  }
  return 0;
}

int do_velocity(const VelocityArgs& a) {
  const latgas::geometry::LatticeGraph lattice = latgas::config::build_lattice(
      latgas::config::parse_lattice_spec(a.lattice));
  const latgas::hamiltonian::HoppingMatrix J = latgas::config::build_hopping(
      latgas::config::parse_hopping_spec(a.hopping), lattice);
  const std::vector<latgas::bounds::VelocityRow> rows =
      latgas::bounds::velocity_comparison(J, lattice.sites, a.a,
                                          a.beta_minus_alpha);
  std::cout << "a,v,kappa,slope_ratio\n";
  for (const latgas::bounds::VelocityRow& row : rows)
    std::cout << fmt_g(row.a) << ',' << fmt_g(row.v) << ','
              << fmt_g(row.kappa) << ',' << fmt_g(row.slope_ratio) << '\n';
  return 0;
}

int do_oracle(const OracleArgs& a) {
  latgas::free_oracle::OneBodyChain chain;
  chain.L = a.L;
  chain.amplitude = a.amplitude;
  if (!a.field.empty()) {
    if (static_cast<int>(a.field.size()) != a.L)
      latgas::fail(latgas::ErrorKind::ConfigError,
                   "--field needs one value per site");
    chain.on_site = Eigen::Map<const Eigen::VectorXd>(
        a.field.data(), static_cast<Eigen::Index>(a.field.size()));
  }

  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(a.L);
  if (!a.f.empty()) {
    if (static_cast<int>(a.f.size()) != a.L)
      latgas::fail(latgas::ErrorKind::ConfigError,
                   "--f needs one coefficient per site");
    for (int i = 0; i < a.L; ++i) f[i] = a.f[i];
    const double nrm = f.norm();
    if (nrm == 0.0)
      latgas::fail(latgas::ErrorKind::ConfigError, "--f is the zero vector");
    f /= nrm;
  } else {
    if (a.delta_site < 0 || a.delta_site >= a.L)
      latgas::fail(latgas::ErrorKind::ConfigError, "--delta site out of range");
    f[a.delta_site] = 1.0;
  }

  const std::vector<double> ts = latgas::config::parse_real_grid(a.t_grid);
  const latgas::free_oracle::FreeConeReport report =
      latgas::free_oracle::free_massmat_check(chain, f, a.theta, a.N, a.r, ts);

  std::cout << "v' = " << fmt_g(report.v_prime) << '\n';
  std::cout << "C = " << fmt_g(report.C) << '\n';
  std::cout << "dominated = " << (report.dominated ? "yes" : "no") << '\n';
  if (a.csv.empty()) {
    latgas::free_oracle::write_oracle_csv(std::cout, report);
  } else {
    std::ofstream out(a.csv, std::ios::trunc);
    if (!out)
      latgas::fail(latgas::ErrorKind::ConfigError,
                   "cannot write '" + a.csv + "'");
    latgas::free_oracle::write_oracle_csv(out, report);
    std::cout << "oracle: " << a.csv << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice-gas macroscopic transport: exact sweeps and bounds"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* cmd_run = app.add_subcommand("run", "execute a config sweep");
  cmd_run->add_option("config", run_config, "config file")->required();

  std::string info_config;
  CLI::App* cmd_info = app.add_subcommand("info", "summarize a config");
  cmd_info->add_option("config", info_config, "config file")->required();

  std::string tilt_config;
  CLI::App* cmd_tilt = app.add_subcommand(
      "verify-tilting", "check the deformed propagator and projector tilts");
  cmd_tilt->add_option("config", tilt_config, "config file")->required();

  CLI::App* cmd_bound =
      app.add_subcommand("bound", "evaluate analytic transport bounds");
  cmd_bound->require_subcommand(1);

  PhysicalArgs pa;
  CLI::App* cmd_phys = cmd_bound->add_subcommand(
      "physical", "physical-units bound for a cold-atom style setup");
  cmd_phys->add_option("--N", pa.N, "particle number")->required();
  cmd_phys->add_option("--J-over-hbar", pa.J_over_hbar, "tunneling rate, 1/s")
      ->required();
  cmd_phys->add_option("--r0", pa.r0, "lattice spacing, m")->required();
  cmd_phys->add_option("--D", pa.D, "spatial dimension");
  cmd_phys
      ->add_option("--beta-minus-alpha", pa.beta_minus_alpha,
                   "density-threshold gap")
      ->required();
  cmd_phys->add_option("--ell", pa.ell, "separation in lattice spacings")
      ->required();
  cmd_phys->add_option("--t", pa.t, "time, s")->required();
  cmd_phys->add_option("--mode", pa.mode, "replica or exact");

  MassmatArgs ma;
  CLI::App* cmd_mass = cmd_bound->add_subcommand(
      "massmat", "norm and probability bounds over a time grid");
  cmd_mass->add_option("--a", ma.a, "decay rate")->required();
  cmd_mass->add_option("--alpha", ma.alpha, "lower density threshold");
  cmd_mass->add_option("--beta", ma.beta, "upper density threshold");
  cmd_mass->add_option("--d", ma.d, "region distance")->required();
  cmd_mass->add_option("--N", ma.N, "particle number")->required();
  cmd_mass->add_option("--t", ma.t_grid, "time grid lo:hi:step or list")
      ->required();
  cmd_mass->add_option("--v", ma.v, "velocity (overrides --J/--D)");
  cmd_mass->add_option("--J", ma.J, "nearest-neighbor amplitude");
  cmd_mass->add_option("--D", ma.D, "spatial dimension");

  VelocityArgs va;
  CLI::App* cmd_vel = cmd_bound->add_subcommand(
      "velocity", "compare v(a) against the first moment kappa");
  cmd_vel->add_option("--lattice", va.lattice, "chain:L or grid:WxH")
      ->required();
  cmd_vel->add_option("--hopping", va.hopping, "nn:J or exp:J,gamma")
      ->required();
  cmd_vel->add_option("--a", va.a, "decay rates")->required()->delimiter(',');
  cmd_vel->add_option("--beta-minus-alpha", va.beta_minus_alpha,
                      "density-threshold gap for the cone slope");

  OracleArgs oa;
  CLI::App* cmd_oracle = app.add_subcommand(
      "oracle", "free-chain cluster probabilities and the exhibited cone");
  cmd_oracle->add_option("--L", oa.L, "chain length")->required();
  cmd_oracle->add_option("--N", oa.N, "particle number")->required();
  cmd_oracle->add_option("--theta", oa.theta, "cluster fraction in (0,1)")
      ->required();
  cmd_oracle->add_option("--t", oa.t_grid, "time grid lo:hi:step or list")
      ->required();
  cmd_oracle->add_option("--r", oa.r, "tail starts")->required()->delimiter(
      ',');
  cmd_oracle->add_option("--amplitude", oa.amplitude, "hopping amplitude");
  cmd_oracle->add_option("--field", oa.field, "on-site fields")->delimiter(
      ',');
  cmd_oracle->add_option("--delta", oa.delta_site,
                         "initial one-body delta site");
  cmd_oracle->add_option("--f", oa.f, "initial one-body coefficients")
      ->delimiter(',');
  cmd_oracle->add_option("--csv", oa.csv, "write rows here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_run) {
      const latgas::config::ExperimentConfig cfg =
          latgas::config::parse_config_file(run_config);
      return latgas::harness::run(cfg, std::cout).exit_code;
    }
    if (*cmd_info) {
      const latgas::config::ExperimentConfig cfg =
          latgas::config::parse_config_file(info_config);
      latgas::harness::info(cfg, std::cout);
      return 0;
    }
    if (*cmd_tilt) {
      const latgas::config::ExperimentConfig cfg =
          latgas::config::parse_config_file(tilt_config);
      return latgas::harness::verify_tilting(cfg, std::cout).exit_code;
    }
    if (*cmd_phys) return do_physical(pa);
    if (*cmd_mass) return do_massmat(ma);
    if (*cmd_vel) return do_velocity(va);
    if (*cmd_oracle) return do_oracle(oa);
  } catch (const latgas::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_input_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
