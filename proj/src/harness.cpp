#include "latgas/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "latgas/bounds.hpp"
#include "latgas/errors.hpp"
#include "latgas/evolution.hpp"
#include "latgas/fock.hpp"
#include "latgas/free_oracle.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"
#include "latgas/tilting.hpp"
#include "latgas/util.hpp"

namespace latgas::harness {
namespace {

using config::ExperimentConfig;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorKind::ConfigError, "cannot write '" + path + "'");
  return f;
}

// Inputs of the analytic bound that stay fixed across the sweep; the decay
// rate is either pinned or re-optimized per point.
struct BoundContext {
  bool auto_a = false;
  double a_fixed = 1.0;
  double v_fixed = 0.0;  // velocity at a_fixed
  double kap = 0.0;
  double alpha = 0.0, beta = 1.0;
  int D = 1;
  double J_amp = 0.0;  // |J| feeding the closed-form optimal rate
  hamiltonian::HoppingMatrix J;
  Eigen::MatrixXd coords;
};

struct BoundRow {
  bounds::BoundEvaluation ev;
  hamiltonian::BoundParams p;
};

// Single evaluation path for every bound column.  Auto mode plugs the
// closed-form optimal rate into the same evaluator, with the exact
// finite-lattice velocity at that rate; inside the cone any rate gives the
// clamped bound 1, so the fallback rate 1 is as good as any.
BoundRow bound_at(const BoundContext& bc, int N, double d, double t) {
  BoundRow row;
  row.p.alpha = bc.alpha;
  row.p.beta = bc.beta;
  row.p.d_xy = d;
  row.p.N = N;
  row.p.kappa = bc.kap;
  if (!bc.auto_a) {
    row.p.a = bc.a_fixed;
    row.p.v = bc.v_fixed;
  } else {
    double a_eff = 1.0;
    if (t != 0.0) {
      try {
        a_eff = hamiltonian::optimal_a(bc.J_amp, bc.D, bc.beta - bc.alpha, d,
                                       t, N)
                    .a_star;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoSupersonicSeparation) throw;
      }
    }
    row.p.a = a_eff;
    row.p.v = hamiltonian::velocity_v(bc.J, bc.coords, a_eff);
  }
  row.ev = bounds::massmat_bound(row.p, t);
  return row;
}

// Everything geometry- and model-shaped that the sweep legs share.
struct Prepared {
  geometry::LatticeGraph lattice;
  geometry::RegionPair regions;
  geometry::SeparationProfile profile;
  hamiltonian::HoppingMatrix J;  // static-model hopping
  std::vector<hamiltonian::SchedulePiece> pieces;
  double total_duration = 0.0;
  BoundContext bc;
};

Prepared prepare(const ExperimentConfig& cfg, std::ostream& out) {
  Prepared prep;
  prep.lattice = config::build_lattice(cfg.model.lattice);
  prep.regions =
      geometry::make_region_pair(prep.lattice, cfg.regions.X, cfg.regions.Y);
  try {
    prep.profile = geometry::separation(prep.lattice, cfg.regions.X,
                                        cfg.regions.Y, cfg.regions.separation);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GeometryDegenerate ||
        cfg.regions.separation != geometry::SeparationStrategy::ConvexHull)
      throw;
    out << "note: convex separation is degenerate here (" << e.what()
        << "); falling back to half-gap\n";
    prep.profile =
        geometry::separation(prep.lattice, cfg.regions.X, cfg.regions.Y,
                             geometry::SeparationStrategy::HalfGap);
  }

  BoundContext& bc = prep.bc;
  bc.auto_a = cfg.bound.auto_a;
  bc.a_fixed = cfg.bound.a;
  bc.alpha = cfg.regions.alpha;
  bc.beta = cfg.regions.beta;
  bc.D = prep.lattice.D;
  bc.coords = prep.lattice.sites;

  if (!cfg.schedule.empty()) {
    for (const config::PieceSpec& ps : cfg.schedule) {
      hamiltonian::SchedulePiece piece;
      piece.duration = ps.duration;
      piece.J = config::build_hopping(ps.hopping, prep.lattice);
      piece.V = config::build_potential(ps.potential);
      prep.total_duration += piece.duration;
      if (!bc.auto_a)
        bc.v_fixed =
            std::max(bc.v_fixed, hamiltonian::velocity_v(
                                     piece.J, prep.lattice.sites, bc.a_fixed));
      bc.kap = std::max(bc.kap,
                        hamiltonian::kappa(piece.J, prep.lattice.sites));
      prep.pieces.push_back(std::move(piece));
    }
    bc.J = prep.pieces.front().J;
  } else {
    prep.J = config::build_hopping(cfg.model.hopping, prep.lattice);
    if (!bc.auto_a)
      bc.v_fixed = hamiltonian::velocity_v(prep.J, prep.lattice.sites,
                                           bc.a_fixed);
    bc.kap = hamiltonian::kappa(prep.J, prep.lattice.sites);
    bc.J = prep.J;
  }
  bc.J_amp = std::abs(cfg.model.hopping.J);
  return prep;
}

struct Leg {
  int N = 0;
  bool has_U = false;
  double U = 0.0;
};

std::vector<Leg> make_legs(const ExperimentConfig& cfg) {
  const bool bh =
      cfg.model.potential.kind == config::PotentialSpec::Kind::BoseHubbard;
  std::vector<double> us = cfg.sweep.U;
  if (us.empty() && bh) us.push_back(cfg.model.potential.U);
  std::vector<Leg> legs;
  for (int n : cfg.model.N) {
    if (us.empty()) {
      legs.push_back({n, false, 0.0});
    } else {
      for (double u : us) legs.push_back({n, true, u});
    }
  }
  return legs;
}

std::string leg_id(const ExperimentConfig& cfg, const Leg& leg) {
  std::string id = cfg.name + ":N" + std::to_string(leg.N);
  if (leg.has_U) id += ":U" + fmt_g(leg.U);
  return id;
}

hamiltonian::Potential leg_potential(const ExperimentConfig& cfg,
                                     const Leg& leg) {
  if (!leg.has_U) return config::build_potential(cfg.model.potential);
  return hamiltonian::Potential::bose_hubbard(leg.U, cfg.model.potential.mu);
}

void check_sector_cap(const ExperimentConfig& cfg, int L, int N) {
  const fock::index_t dim =
      fock::sector_dimension(cfg.model.statistics, L, N);
  if (dim > cfg.run.max_sparse_dim)
    fail(ErrorKind::ResourceLimit,
         "sector dimension " + std::to_string(dim) + " exceeds the cap " +
             std::to_string(cfg.run.max_sparse_dim) + " (N=" +
             std::to_string(N) + ")");
}

std::unique_ptr<evolution::Propagator> make_prop(const Prepared& prep,
                                                 const CsrMatrix& H,
                                                 const std::vector<CsrMatrix>&
                                                     pieces,
                                                 double t) {
  if (prep.pieces.empty())
    return std::make_unique<evolution::HamiltonianPropagator>(H, t);
  if (t < 0.0)
    fail(ErrorKind::ConfigError, "schedules only evolve forward in time");
  if (t > prep.total_duration + 1e-12)
    fail(ErrorKind::ConfigError,
         "sweep time " + fmt_g(t) + " runs past the schedule (total " +
             fmt_g(prep.total_duration) + ")");
  std::vector<const CsrMatrix*> ps;
  std::vector<double> ds;
  double cum = 0.0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const double dur = prep.pieces[i].duration;
    ps.push_back(&pieces[i]);
    ds.push_back(std::clamp(t - cum, 0.0, dur));
    cum += dur;
  }
  return std::make_unique<evolution::SchedulePropagator>(std::move(ps),
                                                         std::move(ds));
}

// Unitarity probe: one deterministic pseudo-random unit vector pushed
// through the propagator; drift is the departure of its image from norm 1.
double norm_drift_probe(const evolution::Propagator& prop,
                        std::uint64_t seed) {
  const fock::index_t dim = prop.dim();
  Eigen::VectorXcd probe(dim);
  std::uint64_t s = seed;
  auto next = [&s]() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  auto u01 = [&next]() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  };
  for (fock::index_t i = 0; i < dim; ++i)
    probe[i] = cplx(u01() - 0.5, u01() - 0.5);
  const double nrm = probe.norm();
  if (nrm == 0.0)
    probe[0] = 1.0;
  else
    probe /= nrm;
  return std::abs(prop.forward(probe).norm() - 1.0);
}

Eigen::VectorXcd one_body_from(const config::InitialSpec& init, int L) {
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(L);
  if (init.kind == config::InitialSpec::Kind::Delta) {
    if (init.site < 0 || init.site >= L)
      fail(ErrorKind::ConfigError, "delta initial site out of range");
    f[init.site] = 1.0;
  } else {
    if (static_cast<int>(init.coefficients.size()) != L)
      fail(ErrorKind::ConfigError,
           "onebody initial state needs one coefficient per site");
    for (int i = 0; i < L; ++i) f[i] = init.coefficients[i];
    const double nrm = f.norm();
    if (nrm == 0.0)
      fail(ErrorKind::ConfigError, "onebody initial state is zero");
    f /= nrm;
  }
  return f;
}

Eigen::VectorXcd build_initial(const ExperimentConfig& cfg,
                               const fock::FockBasis& basis, int L) {
  const config::InitialSpec& init = cfg.initial;
  if (init.kind == config::InitialSpec::Kind::FockState) {
    if (static_cast<int>(init.occupations.size()) != L)
      fail(ErrorKind::ConfigError,
           "fock initial state needs one occupation per site");
    std::vector<std::uint8_t> occ(init.occupations.size());
    for (size_t i = 0; i < occ.size(); ++i)
      occ[i] = static_cast<std::uint8_t>(init.occupations[i]);
    const fock::index_t idx = basis.index_of(occ.data());
    if (idx < 0)
      fail(ErrorKind::ConfigError, "fock initial state is outside the sector");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    psi[idx] = 1.0;
    return psi;
  }
  return free_oracle::cluster_state(basis, one_body_from(init, L));
}

double transport_through(const evolution::Propagator& prop,
                         const Eigen::VectorXd& mask_in,
                         const Eigen::VectorXd& mask_out,
                         const Eigen::VectorXcd& psi0) {
  for (fock::index_t i = 0; i < psi0.size(); ++i)
    if (std::abs(psi0[i]) > 1e-12 && mask_in[i] == 0.0)
      fail(ErrorKind::InvalidState,
           "initial state leaves the source projector range");
  const Eigen::VectorXcd psit = prop.forward(psi0);
  double p = 0.0;
  for (fock::index_t i = 0; i < psit.size(); ++i)
    if (mask_out[i] == 1.0) p += std::norm(psit[i]);
  return std::min(1.0, p);
}

// Free-chain mirror of an interaction-free config: same hopping amplitude,
// uniform one-body field from the chemical potential.
free_oracle::OneBodyChain oracle_chain(const ExperimentConfig& cfg, int L) {
  free_oracle::OneBodyChain chain;
  chain.L = L;
  chain.amplitude = cfg.model.hopping.J;
  if (cfg.model.potential.kind == config::PotentialSpec::Kind::BoseHubbard &&
      cfg.model.potential.mu != 0.0)
    chain.on_site = Eigen::VectorXd::Constant(L, -cfg.model.potential.mu);
  return chain;
}

// X must be the terminal tail {r, ..., L-1}; returns r.
int oracle_tail_start(const std::vector<int>& X, int L) {
  std::vector<int> xs = X;
  std::sort(xs.begin(), xs.end());
  for (size_t i = 0; i < xs.size(); ++i)
    if (xs[i] != xs.front() + static_cast<int>(i) || xs.back() != L - 1)
      fail(ErrorKind::ConfigError,
           "oracle comparison needs X to be the terminal tail {r..L-1}");
  return xs.front();
}

struct TiltingArtifacts {
  int violations = 0;
  int rows = 0;
};

// Deformed-propagator rows plus projector-tilt certificates for one leg.
TiltingArtifacts tilting_leg(const ExperimentConfig& cfg,
                             const Prepared& prep, const Leg& leg,
                             const fock::FockBasis& basis, const CsrMatrix& H,
                             std::uint64_t leg_salt, std::ostream& csv,
                             std::ostream& out) {
  TiltingArtifacts art;
  const std::string id = leg_id(cfg, leg);
  const tilting::TiltingWeights weights =
      tilting::make_tilting(prep.profile, cfg.bound.a);
  const tilting::DeformedHopping dh = tilting::deformed_hopping(
      prep.J, prep.lattice.sites, weights, cfg.bound.a);
  const tilting::ProjectorTiltBounds ptb = tilting::projector_tilt_bounds(
      basis, weights, cfg.regions.X, cfg.regions.Y, cfg.regions.alpha,
      cfg.regions.beta);

  tilting::DeformedNormOptions opt;
  opt.dense_cap = cfg.run.max_dense_dim;
  opt.seed = mix_seed(cfg.run.seed, leg_salt ^ 0x7117ULL);
  const std::vector<tilting::DeformedNormPoint> pts =
      tilting::verify_deformed_propagator(H, basis, weights, cfg.bound.a,
                                          prep.bc.v_fixed, cfg.sweep.t, opt);

  for (const tilting::DeformedNormPoint& pt : pts) {
    csv << id << ',' << fmt_g(pt.t) << ',' << fmt_g(pt.measured) << ','
        << fmt_g(std::exp(pt.log_bound)) << ',' << fmt_g(dh.schur_bound)
        << ',' << fmt_g(dh.av) << ',' << fmt_g(ptb.log_lhs_X) << ','
        << fmt_g(ptb.log_rhs_X) << ',' << fmt_g(ptb.log_lhs_Y) << ','
        << fmt_g(ptb.log_rhs_Y) << '\n';
    ++art.rows;
    if (!pt.ok) {
      ++art.violations;
      out << "violation: " << id << " t=" << fmt_g(pt.t)
          << " deformed norm " << fmt_g(pt.measured) << " > bound "
          << fmt_g(std::exp(pt.log_bound)) << '\n';
    }
  }
  const double slack = 1e-9;
  if (!(ptb.log_lhs_X <= ptb.log_rhs_X + slack)) {
    ++art.violations;
    out << "violation: " << id << " X projector tilt "
        << fmt_g(ptb.log_lhs_X) << " > " << fmt_g(ptb.log_rhs_X) << '\n';
  }
  if (!(ptb.log_lhs_Y <= ptb.log_rhs_Y + slack)) {
    ++art.violations;
    out << "violation: " << id << " Y projector tilt "
        << fmt_g(ptb.log_lhs_Y) << " > " << fmt_g(ptb.log_rhs_Y) << '\n';
  }
  if (!(dh.schur_bound <= dh.av * (1.0 + 1e-12) + 1e-12)) {
    ++art.violations;
    out << "violation: " << id << " deformed Schur bound "
        << fmt_g(dh.schur_bound) << " > a v = " << fmt_g(dh.av) << '\n';
  }
  return art;
}

const char* kResultsHeader = "config_id,t,measured_norm,bound,probability,norm_drift\n";
const char* kTiltingHeader =
    "config_id,t,deformed_measured,deformed_bound,schur_bound,av,proj_lhs_X,"
    "proj_rhs_X,proj_lhs_Y,proj_rhs_Y\n";
const char* kLightconeHeader =
    "config_id,r,t,measured,bound,r_vcone,r_kcone\n";

}  // namespace

Outcome run(const ExperimentConfig& cfg, std::ostream& out) {
  Outcome oc;

  if (cfg.units.present) {
    const bounds::PhysicalBound pb = bounds::physical_units_bound(
        cfg.units.N, cfg.units.J_over_hbar, cfg.units.r0, cfg.units.D,
        cfg.units.beta_minus_alpha, cfg.units.ell, cfg.units.t,
        cfg.units.mode);
    out << "exponent = " << fmt_g(pb.exponent) << '\n';
    out << "probability = " << fmt_g(pb.probability) << '\n';
  }
  if (!cfg.model.present) return oc;

  Prepared prep = prepare(cfg, out);
  const int L = prep.lattice.size();

  if (!cfg.output.profile.empty()) {
    std::ofstream f = open_csv(cfg.output.profile);
    geometry::write_profile_csv(f, prep.lattice, prep.profile);
    out << "profile: " << cfg.output.profile << '\n';
  }

  std::ofstream results = open_csv(cfg.output.results);
  results << kResultsHeader;

  const bool lightcone_on = !cfg.sweep.r.empty() && !cfg.sweep.t.empty();
  std::ofstream lightcone;
  const std::string lightcone_path =
      cfg.output.lightcone.empty() ? "lightcone.csv" : cfg.output.lightcone;
  if (lightcone_on) {
    lightcone = open_csv(lightcone_path);
    lightcone << kLightconeHeader;
  }

  const bool tilting_on = cfg.run.verify_tilting && !cfg.sweep.t.empty();
  std::ofstream tilt_csv;
  const std::string tilting_path =
      cfg.output.tilting.empty() ? "tilting.csv" : cfg.output.tilting;
  if (tilting_on) {
    tilt_csv = open_csv(tilting_path);
    tilt_csv << kTiltingHeader;
  }

  long rows = 0;
  double oracle_max_err = 0.0;
  int oracle_points = 0;

  if (!cfg.sweep.t.empty()) {
    const std::vector<Leg> legs = make_legs(cfg);
    for (size_t li = 0; li < legs.size(); ++li) {
      const Leg& leg = legs[li];
      const std::string id = leg_id(cfg, leg);
      check_sector_cap(cfg, L, leg.N);
      fock::FockBasis basis(cfg.model.statistics, L, leg.N);

      CsrMatrix H;
      std::vector<CsrMatrix> piece_H;
      if (prep.pieces.empty()) {
        H = hamiltonian::assemble(basis, prep.J, leg_potential(cfg, leg));
      } else {
        for (const hamiltonian::SchedulePiece& piece : prep.pieces)
          piece_H.push_back(hamiltonian::assemble(basis, piece.J, piece.V));
      }

      const Eigen::VectorXd mask_x =
          fock::threshold_projector(basis, cfg.regions.X, cfg.regions.beta)
              .values;
      const Eigen::VectorXd mask_y =
          fock::threshold_projector(basis, cfg.regions.Y,
                                    1.0 - cfg.regions.alpha)
              .values;

      Eigen::VectorXcd psi0;
      if (cfg.initial.kind != config::InitialSpec::Kind::None)
        psi0 = build_initial(cfg, basis, L);

      for (size_t ti = 0; ti < cfg.sweep.t.size(); ++ti) {
        const double t = cfg.sweep.t[ti];
        const std::uint64_t salt = (li + 1) * 1000003ULL + ti;
        const std::unique_ptr<evolution::Propagator> prop =
            make_prop(prep, H, piece_H, t);

        evolution::ConeNormOptions copt;
        copt.dense_cap = cfg.run.max_dense_dim;
        copt.seed = mix_seed(cfg.run.seed, salt);
        const evolution::ConeNormResult res =
            evolution::masked_norm(*prop, mask_x, mask_y, copt);
        if (!res.converged) {
          ++oc.convergence_notes;
          out << "note: " << id << " t=" << fmt_g(t)
              << " norm iteration stagnated (error bar "
              << fmt_g(res.error_bar) << ")\n";
        }

        const BoundRow br = bound_at(prep.bc, leg.N, prep.regions.d_xy, t);
        const double probability =
            psi0.size() > 0
                ? transport_through(*prop, mask_y, mask_x, psi0)
                : std::min(1.0, res.value * res.value);
        const double drift =
            norm_drift_probe(*prop, mix_seed(cfg.run.seed, salt ^ 0xd12fULL));

        results << id << ',' << fmt_g(t) << ',' << fmt_g(res.value) << ','
                << fmt_g(br.ev.norm_bound) << ',' << fmt_g(probability)
                << ',' << fmt_g(drift) << '\n';
        ++rows;

        if (res.value > br.ev.norm_bound + cfg.run.tolerance) {
          ++oc.violations;
          out << "violation: " << id << " t=" << fmt_g(t) << " measured "
              << fmt_g(res.value) << " > bound " << fmt_g(br.ev.norm_bound)
              << '\n';
        }

        if (lightcone_on) {
          for (size_t ri = 0; ri < cfg.sweep.r.size(); ++ri) {
            const int r = cfg.sweep.r[ri];
            const geometry::RegionPair rp = geometry::make_region_pair(
                prep.lattice, {r}, cfg.regions.Y);
            const Eigen::VectorXd mask_r =
                fock::threshold_projector(basis, rp.X, cfg.regions.beta)
                    .values;
            evolution::ConeNormOptions ropt = copt;
            ropt.seed =
                mix_seed(cfg.run.seed, salt ^ ((ri + 1) * 0x9e37ULL));
            const evolution::ConeNormResult rres =
                evolution::masked_norm(*prop, mask_r, mask_y, ropt);
            const BoundRow rbr = bound_at(prep.bc, leg.N, rp.d_xy, t);
            const double bw = cfg.regions.beta - cfg.regions.alpha;
            lightcone << id << ',' << r << ',' << fmt_g(t) << ','
                      << fmt_g(rres.value) << ',' << fmt_g(rbr.ev.norm_bound)
                      << ',' << fmt_g(rbr.p.v * std::abs(t) / bw) << ','
                      << fmt_g(rbr.p.kappa * std::abs(t) / bw) << '\n';
            if (rres.value > rbr.ev.norm_bound + cfg.run.tolerance) {
              ++oc.violations;
              out << "violation: " << id << " r=" << r
                  << " t=" << fmt_g(t) << " measured " << fmt_g(rres.value)
                  << " > bound " << fmt_g(rbr.ev.norm_bound) << '\n';
            }
          }
        }
      }

      if (tilting_on) {
        const TiltingArtifacts art = tilting_leg(
            cfg, prep, leg, basis, H, (li + 1) * 7919ULL, tilt_csv, out);
        oc.violations += art.violations;
      }

      if (cfg.run.compare_oracle) {
        const int r = oracle_tail_start(cfg.regions.X, L);
        const free_oracle::OneBodyChain chain = oracle_chain(cfg, L);
        const Eigen::VectorXcd f = one_body_from(cfg.initial, L);
        const Eigen::VectorXcd psi_cluster =
            free_oracle::cluster_state(basis, f);
        const Eigen::VectorXd mask_theta =
            fock::threshold_projector(basis, cfg.regions.X, cfg.run.theta)
                .values;
        for (double t : cfg.sweep.t) {
          const Eigen::VectorXcd psit =
              evolution::evolve(H, psi_cluster, t);
          double p_eng = 0.0;
          for (fock::index_t i = 0; i < psit.size(); ++i)
            if (mask_theta[i] == 1.0) p_eng += std::norm(psit[i]);
          p_eng = std::min(1.0, p_eng);
          const double p_oracle = free_oracle::cluster_probability(
              chain, f, r, cfg.run.theta, leg.N, t);
          oracle_max_err =
              std::max(oracle_max_err, std::abs(p_eng - p_oracle));
          ++oracle_points;
        }
      }
    }
  }

  if (cfg.run.compare_oracle) {
    out << "oracle max abs error = " << fmt_g(oracle_max_err) << " over "
        << oracle_points << " points\n";
    if (!cfg.output.oracle.empty()) {
      const free_oracle::OneBodyChain chain = oracle_chain(cfg, L);
      const Eigen::VectorXcd f = one_body_from(cfg.initial, L);
      std::vector<int> r_grid;
      for (int r : cfg.sweep.r)
        if (r >= 1 && r <= L - 1) r_grid.push_back(r);
      if (r_grid.empty()) {
        const int r = oracle_tail_start(cfg.regions.X, L);
        if (r >= 1) r_grid.push_back(r);
      }
      std::vector<double> t_grid;
      for (double t : cfg.sweep.t)
        if (t >= 1.0) t_grid.push_back(t);
      if (r_grid.empty() || t_grid.empty()) {
        out << "note: oracle cone fit skipped (needs r >= 1 and t >= 1)\n";
      } else {
        const int n_max =
            *std::max_element(cfg.model.N.begin(), cfg.model.N.end());
        const free_oracle::FreeConeReport report = free_oracle::free_massmat_check(
            chain, f, cfg.run.theta, n_max, r_grid, t_grid);
        std::ofstream f_csv = open_csv(cfg.output.oracle);
        free_oracle::write_oracle_csv(f_csv, report);
        out << "oracle cone fit: v' = " << fmt_g(report.v_prime)
            << ", C = " << fmt_g(report.C) << ", dominated = "
            << (report.dominated ? "yes" : "no") << " -> "
            << cfg.output.oracle << '\n';
      }
    }
  }

  out << "results: " << cfg.output.results << " (" << rows << " rows, "
      << oc.violations << " violations)\n";
  if (lightcone_on) out << "lightcone: " << lightcone_path << '\n';
  if (tilting_on) out << "tilting: " << tilting_path << '\n';

  oc.exit_code = oc.violations > 0 ? 1 : 0;
  return oc;
}

Outcome verify_tilting(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.model.present)
    fail(ErrorKind::ConfigError, "verify-tilting needs a [model] block");
  if (cfg.bound.auto_a)
    fail(ErrorKind::ConfigError,
         "verify-tilting needs an explicit [bound] a, not auto");
  if (!cfg.schedule.empty())
    fail(ErrorKind::ConfigError,
         "verify-tilting works on static models, not schedules");

  Outcome oc;
  Prepared prep = prepare(cfg, out);
  const int L = prep.lattice.size();

  const std::string path =
      cfg.output.tilting.empty() ? "tilting.csv" : cfg.output.tilting;
  std::ofstream csv = open_csv(path);
  csv << kTiltingHeader;

  int rows = 0;
  const std::vector<Leg> legs = make_legs(cfg);
  for (size_t li = 0; li < legs.size(); ++li) {
    const Leg& leg = legs[li];
    check_sector_cap(cfg, L, leg.N);
    fock::FockBasis basis(cfg.model.statistics, L, leg.N);
    const CsrMatrix H =
        hamiltonian::assemble(basis, prep.J, leg_potential(cfg, legs[li]));
    const TiltingArtifacts art =
        tilting_leg(cfg, prep, leg, basis, H, (li + 1) * 7919ULL, csv, out);
    oc.violations += art.violations;
    rows += art.rows;
  }

  out << "tilting: " << path << " (" << rows << " rows, " << oc.violations
      << " violations)\n";
  oc.exit_code = oc.violations > 0 ? 1 : 0;
  return oc;
}

void info(const ExperimentConfig& cfg, std::ostream& out) {
  out << "config " << cfg.name << '\n';

  if (cfg.units.present) {
    const bounds::PhysicalBound pb = bounds::physical_units_bound(
        cfg.units.N, cfg.units.J_over_hbar, cfg.units.r0, cfg.units.D,
        cfg.units.beta_minus_alpha, cfg.units.ell, cfg.units.t,
        cfg.units.mode);
    out << "units: N=" << cfg.units.N << " J/hbar="
        << fmt_g(cfg.units.J_over_hbar) << "/s ell=" << fmt_g(cfg.units.ell)
        << " t=" << fmt_g(cfg.units.t) << "s -> exponent = "
        << fmt_g(pb.exponent) << ", probability = " << fmt_g(pb.probability)
        << '\n';
  }
  if (!cfg.model.present) return;

  const geometry::LatticeGraph lattice = config::build_lattice(
      cfg.model.lattice);
  out << "lattice: D=" << lattice.D << ", " << lattice.size() << " sites, "
      << lattice.edges.size() << " edges\n";
  out << "statistics: " << fock::statistics_name(cfg.model.statistics)
      << '\n';
  if (cfg.schedule.empty()) {
    if (cfg.model.hopping.kind == config::HoppingSpec::Kind::NearestNeighbor)
      out << "hopping: nn J=" << fmt_g(cfg.model.hopping.J) << '\n';
    else
      out << "hopping: exp J=" << fmt_g(cfg.model.hopping.J)
          << " gamma=" << fmt_g(cfg.model.hopping.gamma) << '\n';
    if (cfg.model.potential.kind == config::PotentialSpec::Kind::Zero)
      out << "potential: zero\n";
    else
      out << "potential: bosehubbard U=" << fmt_g(cfg.model.potential.U)
          << " mu=" << fmt_g(cfg.model.potential.mu) << '\n';
  } else {
    double total = 0.0;
    for (const config::PieceSpec& p : cfg.schedule) total += p.duration;
    out << "schedule: " << cfg.schedule.size() << " pieces, total duration "
        << fmt_g(total) << '\n';
  }

  const geometry::RegionPair rp =
      geometry::make_region_pair(lattice, cfg.regions.X, cfg.regions.Y);
  out << "regions: |X|=" << cfg.regions.X.size() << " |Y|="
      << cfg.regions.Y.size() << " d_XY=" << fmt_g(rp.d_xy) << " alpha="
      << fmt_g(cfg.regions.alpha) << " beta=" << fmt_g(cfg.regions.beta)
      << " separation=" << geometry::strategy_name(cfg.regions.separation)
      << '\n';

  for (int n : cfg.model.N) {
    const fock::index_t dim =
        fock::sector_dimension(cfg.model.statistics, lattice.size(), n);
    out << "sector: N=" << n << " dim=" << dim;
    if (dim > cfg.run.max_sparse_dim) out << " (past max_sparse_dim)";
    out << '\n';
  }

  if (cfg.schedule.empty()) {
    const hamiltonian::HoppingMatrix J =
        config::build_hopping(cfg.model.hopping, lattice);
    const double kap = hamiltonian::kappa(J, lattice.sites);
    if (cfg.bound.auto_a) {
      out << "bound: a=auto kappa=" << fmt_g(kap) << '\n';
    } else {
      try {
        const double v =
            hamiltonian::velocity_v(J, lattice.sites, cfg.bound.a);
        out << "bound: a=" << fmt_g(cfg.bound.a) << " v=" << fmt_g(v)
            << " kappa=" << fmt_g(kap) << '\n';
      } catch (const Error& e) {
        out << "bound: a=" << fmt_g(cfg.bound.a)
            << " (velocity unavailable: " << e.what() << ")\n";
      }
    }
  }

  out << "sweep: " << cfg.sweep.t.size() << " time points";
  if (!cfg.sweep.U.empty()) out << ", " << cfg.sweep.U.size() << " U values";
  if (!cfg.sweep.r.empty())
    out << ", " << cfg.sweep.r.size() << " light-cone distances";
  out << '\n';
}

}  // namespace latgas::harness
