#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latgas/bounds.hpp"
#include "latgas/fock.hpp"
#include "latgas/geometry.hpp"
#include "latgas/hamiltonian.hpp"

namespace latgas::config {

// Lattice named by shape; File reads "D NSITES", NSITES coordinate rows,
// then an optional "EDGES M" section with M index pairs.
struct LatticeSpec {
  enum class Kind { Chain, Grid, File };
  Kind kind = Kind::Chain;
  int L = 0;         // Chain
  int W = 0, H = 0;  // Grid
  std::string path;  // File
};

struct HoppingSpec {
  enum class Kind { NearestNeighbor, ExponentialDecay };
  Kind kind = Kind::NearestNeighbor;
  double J = 1.0;
  double gamma = 0.0;
};

struct PotentialSpec {
  enum class Kind { Zero, BoseHubbard };
  Kind kind = Kind::Zero;
  double U = 0.0;
  double mu = 0.0;
};

// Initial ensemble for transport probabilities.  Delta and OneBody build the
// N-particle product (cluster) state of a one-body wavefunction; FockState
// pins one occupation pattern.
struct InitialSpec {
  enum class Kind { None, Delta, OneBody, FockState };
  Kind kind = Kind::None;
  int site = 0;                      // Delta
  std::vector<double> coefficients;  // OneBody, normalized on use
  std::vector<int> occupations;      // FockState
};

struct PieceSpec {
  double duration = 0.0;
  HoppingSpec hopping;
  PotentialSpec potential;
};

struct ModelBlock {
  bool present = false;
  fock::Statistics statistics = fock::Statistics::Boson;
  LatticeSpec lattice;
  std::vector<int> N;
  HoppingSpec hopping;
  PotentialSpec potential;
};

struct RegionsBlock {
  bool present = false;
  std::vector<int> X;
  std::vector<int> Y;
  double alpha = 0.0;
  double beta = 1.0;
  geometry::SeparationStrategy separation =
      geometry::SeparationStrategy::HalfGap;
};

struct BoundBlock {
  bool auto_a = false;  // per-point optimal decay rate (nn hopping only)
  double a = 1.0;
};

struct SweepBlock {
  std::vector<double> t;
  std::vector<double> U;  // Bose-Hubbard interaction sweep
  std::vector<int> r;     // light-cone distance scan (chain lattices)
};

struct RunBlock {
  bool compare_oracle = false;
  double theta = 0.5;  // macroscopic-cluster fraction for the oracle check
  bool verify_tilting = false;
  double tolerance = 1e-9;  // bound-violation slack
  std::int64_t max_sparse_dim = 200000;
  std::int64_t max_dense_dim = 400;
  std::uint64_t seed = 1;
};

struct OutputBlock {
  std::string results = "results.csv";
  std::string profile;
  std::string tilting;
  std::string oracle;
  std::string lightcone;
};

// Physical-units calculator inputs (cold-atom style numbers).
struct UnitsBlock {
  bool present = false;
  int N = 0;
  double J_over_hbar = 0.0;  // 1/s
  double r0 = 0.0;           // lattice spacing, m (cancels from the bound)
  int D = 1;
  double beta_minus_alpha = 0.0;
  double ell = 0.0;  // separation in units of r0
  double t = 0.0;    // s
  bounds::UnitsMode mode = bounds::UnitsMode::Replica;
};

struct ExperimentConfig {
  std::string name;  // id prefix in CSV rows; defaults to the file stem
  ModelBlock model;
  std::vector<PieceSpec> schedule;  // nonempty: piecewise-constant evolution
  RegionsBlock regions;
  BoundBlock bound;
  SweepBlock sweep;
  RunBlock run;
  OutputBlock output;
  InitialSpec initial;
  UnitsBlock units;

  // Cross-field checks shared by every entry point; throws config-error.
  void validate() const;
};

// Parses the block/key=value grammar; errors carry 1-based line numbers.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

// "lo:hi:step" inclusive grid or a comma-separated list.
std::vector<double> parse_real_grid(const std::string& text);

// Single-token spec parsers shared with the CLI ("chain:8", "nn:1.0").
LatticeSpec parse_lattice_spec(const std::string& text);
HoppingSpec parse_hopping_spec(const std::string& text);

geometry::LatticeGraph build_lattice(const LatticeSpec& spec);
hamiltonian::HoppingMatrix build_hopping(
    const HoppingSpec& spec, const geometry::LatticeGraph& lattice);
hamiltonian::Potential build_potential(const PotentialSpec& spec);

}  // namespace latgas::config
