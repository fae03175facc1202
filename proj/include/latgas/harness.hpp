#pragma once

#include <iosfwd>

#include "latgas/config.hpp"

namespace latgas::harness {

// What an orchestrated entry point found; the CLI turns this into the
// process exit code (0 clean, 1 when any bound check failed).
struct Outcome {
  int violations = 0;
  int convergence_notes = 0;  // iterative norms that stagnated (reported only)
  int exit_code = 0;
};

// Full sweep: results CSV, optional profile/tilting/oracle/light-cone
// artifacts, bound-dominance checks, physical-units calculator output.
Outcome run(const config::ExperimentConfig& cfg, std::ostream& out);

// Deformed-propagator and projector-tilt verification alone; requires an
// explicit decay rate in [bound].
Outcome verify_tilting(const config::ExperimentConfig& cfg, std::ostream& out);

// Cheap summary of what a config would do: lattice, sectors, geometry,
// velocities, sweep sizes.  No Hamiltonian assembly.
void info(const config::ExperimentConfig& cfg, std::ostream& out);

}  // namespace latgas::harness
