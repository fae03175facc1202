#include "latgas/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "latgas/errors.hpp"

namespace latgas::config {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Where a diagnostic points: file (or buffer) name plus 1-based line.
struct Ctx {
  const std::string& origin;
  int line;
};

[[noreturn]] void bad(const Ctx& ctx, const std::string& what) {
  fail(ErrorKind::ConfigError,
       ctx.origin + ":" + std::to_string(ctx.line) + ": " + what);
}

double to_real(const Ctx& ctx, const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    bad(ctx, "key '" + key + "' needs a real number, got '" + t + "'");
  return x;
}

long long to_int(const Ctx& ctx, const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const long long x = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    bad(ctx, "key '" + key + "' needs an integer, got '" + t + "'");
  return x;
}

bool to_bool(const Ctx& ctx, const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  bad(ctx, "key '" + key + "' needs true/false, got '" + t + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> real_list(const Ctx& ctx, const std::string& key,
                              const std::string& v) {
  std::vector<double> out;
  for (const std::string& part : split(v, ','))
    out.push_back(to_real(ctx, key, part));
  return out;
}

std::vector<int> int_list(const Ctx& ctx, const std::string& key,
                          const std::string& v) {
  std::vector<int> out;
  for (const std::string& part : split(v, ','))
    out.push_back(static_cast<int>(to_int(ctx, key, part)));
  return out;
}

std::vector<double> real_grid(const Ctx& ctx, const std::string& key,
                              const std::string& v) {
  const std::string t = trim(v);
  if (t.find(':') == std::string::npos) return real_list(ctx, key, t);
  const auto parts = split(t, ':');
  if (parts.size() != 3) bad(ctx, "grid for '" + key + "' needs lo:hi:step");
  const double lo = to_real(ctx, key, parts[0]);
  const double hi = to_real(ctx, key, parts[1]);
  const double step = to_real(ctx, key, parts[2]);
  if (step <= 0.0) bad(ctx, "grid step for '" + key + "' must be positive");
  if (hi < lo) bad(ctx, "grid for '" + key + "' has hi < lo");
  const long long n = static_cast<long long>((hi - lo) / step + 1e-9);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) out.push_back(lo + step * i);
  return out;
}

// "tag" or "tag:payload"
std::pair<std::string, std::string> tagged(const std::string& v) {
  const std::string t = trim(v);
  const size_t colon = t.find(':');
  if (colon == std::string::npos) return {t, ""};
  return {t.substr(0, colon), trim(t.substr(colon + 1))};
}

LatticeSpec lattice_spec(const Ctx& ctx, const std::string& v) {
  const auto [tag, payload] = tagged(v);
  LatticeSpec spec;
  if (tag == "chain") {
    spec.kind = LatticeSpec::Kind::Chain;
    spec.L = static_cast<int>(to_int(ctx, "lattice", payload));
    if (spec.L < 1) bad(ctx, "chain length must be at least 1");
  } else if (tag == "grid") {
    spec.kind = LatticeSpec::Kind::Grid;
    const size_t x = payload.find('x');
    if (x == std::string::npos) bad(ctx, "grid lattice needs WxH");
    spec.W = static_cast<int>(to_int(ctx, "lattice", payload.substr(0, x)));
    spec.H = static_cast<int>(to_int(ctx, "lattice", payload.substr(x + 1)));
    if (spec.W < 1 || spec.H < 1) bad(ctx, "grid sides must be at least 1");
  } else if (tag == "file") {
    spec.kind = LatticeSpec::Kind::File;
    spec.path = payload;
    if (spec.path.empty()) bad(ctx, "file lattice needs a path");
  } else {
    bad(ctx, "unknown lattice kind '" + tag + "' (chain, grid, file)");
  }
  return spec;
}

HoppingSpec hopping_spec(const Ctx& ctx, const std::string& v) {
  const auto [tag, payload] = tagged(v);
  HoppingSpec spec;
  if (tag == "nn") {
    spec.kind = HoppingSpec::Kind::NearestNeighbor;
    spec.J = to_real(ctx, "hopping", payload);
  } else if (tag == "exp") {
    const auto parts = split(payload, ',');
    if (parts.size() != 2) bad(ctx, "exp hopping needs amplitude,gamma");
    spec.kind = HoppingSpec::Kind::ExponentialDecay;
    spec.J = to_real(ctx, "hopping", parts[0]);
    spec.gamma = to_real(ctx, "hopping", parts[1]);
    if (spec.gamma <= 0.0) bad(ctx, "exp hopping gamma must be positive");
  } else {
    bad(ctx, "unknown hopping kind '" + tag + "' (nn, exp)");
  }
  return spec;
}

PotentialSpec potential_spec(const Ctx& ctx, const std::string& v) {
  const auto [tag, payload] = tagged(v);
  PotentialSpec spec;
  if (tag == "zero") {
    spec.kind = PotentialSpec::Kind::Zero;
  } else if (tag == "bosehubbard") {
    spec.kind = PotentialSpec::Kind::BoseHubbard;
    const auto parts = split(payload, ',');
    if (parts.empty() || parts.size() > 2)
      bad(ctx, "bosehubbard potential needs U or U,mu");
    spec.U = to_real(ctx, "potential", parts[0]);
    spec.mu = parts.size() == 2 ? to_real(ctx, "potential", parts[1]) : 0.0;
  } else {
    bad(ctx, "unknown potential kind '" + tag + "' (zero, bosehubbard)");
  }
  return spec;
}

InitialSpec initial_spec(const Ctx& ctx, const std::string& v) {
  const auto [tag, payload] = tagged(v);
  InitialSpec spec;
  if (tag == "delta") {
    spec.kind = InitialSpec::Kind::Delta;
    spec.site = static_cast<int>(to_int(ctx, "state", payload));
  } else if (tag == "onebody") {
    spec.kind = InitialSpec::Kind::OneBody;
    spec.coefficients = real_list(ctx, "state", payload);
    if (spec.coefficients.empty()) bad(ctx, "onebody state needs coefficients");
  } else if (tag == "fock") {
    spec.kind = InitialSpec::Kind::FockState;
    spec.occupations = int_list(ctx, "state", payload);
    for (int n : spec.occupations)
      if (n < 0) bad(ctx, "fock occupations must be nonnegative");
  } else {
    bad(ctx, "unknown initial state '" + tag + "' (delta, onebody, fock)");
  }
  return spec;
}

geometry::SeparationStrategy separation_strategy(const Ctx& ctx,
                                                 const std::string& v) {
  const std::string t = trim(v);
  if (t == "half-gap" || t == "half-gap-surrogate")
    return geometry::SeparationStrategy::HalfGap;
  if (t == "convex" || t == "convex-hull")
    return geometry::SeparationStrategy::ConvexHull;
  if (t == "level-set" || t == "signed-distance-to-S")
    return geometry::SeparationStrategy::SignedDistanceToS;
  bad(ctx, "unknown separation strategy '" + t +
               "' (half-gap, convex, level-set)");
}

PieceSpec piece_spec(const Ctx& ctx, const std::string& v) {
  std::istringstream in(trim(v));
  std::string dur, hop, pot;
  if (!(in >> dur >> hop >> pot))
    bad(ctx, "piece needs: DURATION HOPPING POTENTIAL");
  std::string extra;
  if (in >> extra) bad(ctx, "piece has trailing text '" + extra + "'");
  PieceSpec piece;
  piece.duration = to_real(ctx, "piece", dur);
  if (piece.duration <= 0.0) bad(ctx, "piece duration must be positive");
  piece.hopping = hopping_spec(ctx, hop);
  piece.potential = potential_spec(ctx, pot);
  return piece;
}

std::string file_stem(const std::string& path) {
  const size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base.empty() ? "config" : base;
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text) {
  static const std::string origin = "<grid>";
  return real_grid(Ctx{origin, 1}, "grid", text);
}

LatticeSpec parse_lattice_spec(const std::string& text) {
  static const std::string origin = "<arg>";
  return lattice_spec(Ctx{origin, 1}, text);
}

HoppingSpec parse_hopping_spec(const std::string& text) {
  static const std::string origin = "<arg>";
  return hopping_spec(Ctx{origin, 1}, text);
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  cfg.name = file_stem(origin);

  std::istringstream in(text);
  std::string raw;
  std::string block;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const Ctx ctx{origin, line_no};
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad(ctx, "unterminated block header");
      block = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known = {
          "model", "schedule", "regions", "bound", "sweep",
          "run",   "output",   "units",   "initial"};
      if (!known.count(block)) bad(ctx, "unknown block [" + block + "]");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) bad(ctx, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) bad(ctx, "empty key");
    if (block.empty()) bad(ctx, "key '" + key + "' outside any block");

    const std::string qual = block + "." + key;
    if (qual != "schedule.piece" && !seen.insert(qual).second)
      bad(ctx, "duplicate key '" + key + "' in [" + block + "]");

    if (block == "model") {
      cfg.model.present = true;
      if (key == "statistics") {
        if (value == "boson")
          cfg.model.statistics = fock::Statistics::Boson;
        else if (value == "fermion")
          cfg.model.statistics = fock::Statistics::Fermion;
        else
          bad(ctx, "statistics must be boson or fermion");
      } else if (key == "lattice") {
        cfg.model.lattice = lattice_spec(ctx, value);
      } else if (key == "N") {
        cfg.model.N = int_list(ctx, key, value);
      } else if (key == "hopping") {
        cfg.model.hopping = hopping_spec(ctx, value);
      } else if (key == "potential") {
        cfg.model.potential = potential_spec(ctx, value);
      } else if (key == "name") {
        cfg.name = value;
      } else {
        bad(ctx, "unknown key '" + key + "' in [model]");
      }
    } else if (block == "schedule") {
      if (key == "piece")
        cfg.schedule.push_back(piece_spec(ctx, value));
      else
        bad(ctx, "unknown key '" + key + "' in [schedule]");
    } else if (block == "regions") {
      cfg.regions.present = true;
      if (key == "X")
        cfg.regions.X = int_list(ctx, key, value);
      else if (key == "Y")
        cfg.regions.Y = int_list(ctx, key, value);
      else if (key == "alpha")
        cfg.regions.alpha = to_real(ctx, key, value);
      else if (key == "beta")
        cfg.regions.beta = to_real(ctx, key, value);
      else if (key == "separation")
        cfg.regions.separation = separation_strategy(ctx, value);
      else
        bad(ctx, "unknown key '" + key + "' in [regions]");
    } else if (block == "bound") {
      if (key == "a") {
        if (trim(value) == "auto") {
          cfg.bound.auto_a = true;
        } else {
          cfg.bound.auto_a = false;
          cfg.bound.a = to_real(ctx, key, value);
        }
      } else {
        bad(ctx, "unknown key '" + key + "' in [bound]");
      }
    } else if (block == "sweep") {
      if (key == "t")
        cfg.sweep.t = real_grid(ctx, key, value);
      else if (key == "U")
        cfg.sweep.U = real_list(ctx, key, value);
      else if (key == "r")
        cfg.sweep.r = int_list(ctx, key, value);
      else
        bad(ctx, "unknown key '" + key + "' in [sweep]");
    } else if (block == "run") {
      if (key == "compare_oracle")
        cfg.run.compare_oracle = to_bool(ctx, key, value);
      else if (key == "theta")
        cfg.run.theta = to_real(ctx, key, value);
      else if (key == "verify_tilting")
        cfg.run.verify_tilting = to_bool(ctx, key, value);
      else if (key == "tolerance")
        cfg.run.tolerance = to_real(ctx, key, value);
      else if (key == "max_sparse_dim")
        cfg.run.max_sparse_dim = to_int(ctx, key, value);
      else if (key == "max_dense_dim")
        cfg.run.max_dense_dim = to_int(ctx, key, value);
      else if (key == "seed")
        cfg.run.seed = static_cast<std::uint64_t>(to_int(ctx, key, value));
      else
        bad(ctx, "unknown key '" + key + "' in [run]");
    } else if (block == "output") {
      if (key == "results")
        cfg.output.results = value;
      else if (key == "profile")
        cfg.output.profile = value;
      else if (key == "tilting")
        cfg.output.tilting = value;
      else if (key == "oracle")
        cfg.output.oracle = value;
      else if (key == "lightcone")
        cfg.output.lightcone = value;
      else
        bad(ctx, "unknown key '" + key + "' in [output]");
    } else if (block == "units") {
      cfg.units.present = true;
      if (key == "N")
        cfg.units.N = static_cast<int>(to_int(ctx, key, value));
      else if (key == "J_over_hbar")
        cfg.units.J_over_hbar = to_real(ctx, key, value);
      else if (key == "r0")
        cfg.units.r0 = to_real(ctx, key, value);
      else if (key == "D")
        cfg.units.D = static_cast<int>(to_int(ctx, key, value));
      else if (key == "beta_minus_alpha")
        cfg.units.beta_minus_alpha = to_real(ctx, key, value);
      else if (key == "ell")
        cfg.units.ell = to_real(ctx, key, value);
      else if (key == "t")
        cfg.units.t = to_real(ctx, key, value);
      else if (key == "mode") {
        if (value == "replica")
          cfg.units.mode = bounds::UnitsMode::Replica;
        else if (value == "exact")
          cfg.units.mode = bounds::UnitsMode::Exact;
        else
          bad(ctx, "mode must be replica or exact");
      } else {
        bad(ctx, "unknown key '" + key + "' in [units]");
      }
    } else if (block == "initial") {
      if (key == "state")
        cfg.initial = initial_spec(ctx, value);
      else
        bad(ctx, "unknown key '" + key + "' in [initial]");
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void ExperimentConfig::validate() const {
  auto reject = [](const std::string& what) {
    fail(ErrorKind::ConfigError, what);
  };

  if (!model.present && !units.present)
    reject("config needs a [model] or [units] block");

  if (units.present) {
    if (units.N < 1) reject("[units] N must be at least 1");
    if (units.J_over_hbar <= 0.0) reject("[units] J_over_hbar must be positive");
    if (units.r0 <= 0.0) reject("[units] r0 must be positive");
    if (units.D < 1) reject("[units] D must be at least 1");
    if (units.beta_minus_alpha <= 0.0 || units.beta_minus_alpha > 1.0)
      reject("[units] beta_minus_alpha must lie in (0, 1]");
    if (units.ell <= 0.0) reject("[units] ell must be positive");
    if (units.t < 0.0) reject("[units] t must be nonnegative");
  }

  if (run.tolerance < 0.0) reject("[run] tolerance must be nonnegative");
  if (run.max_sparse_dim < 1) reject("[run] max_sparse_dim must be positive");
  if (run.max_dense_dim < 1) reject("[run] max_dense_dim must be positive");
  if (!bound.auto_a && bound.a <= 0.0) reject("[bound] a must be positive");

  if (!model.present) return;

  if (model.N.empty()) reject("[model] needs an N list");
  for (int n : model.N)
    if (n < 1 || n > 255) reject("[model] N entries must lie in [1, 255]");
  if (!regions.present) reject("a [model] config needs a [regions] block");
  if (regions.X.empty() || regions.Y.empty())
    reject("[regions] X and Y must be nonempty");
  if (!(regions.alpha >= 0.0 && regions.alpha < regions.beta &&
        regions.beta <= 1.0))
    reject("[regions] needs 0 <= alpha < beta <= 1");

  if (!sweep.U.empty() &&
      model.potential.kind != PotentialSpec::Kind::BoseHubbard)
    reject("[sweep] U needs potential = bosehubbard:...");
  if (!schedule.empty()) {
    if (!sweep.U.empty()) reject("[sweep] U cannot combine with [schedule]");
    if (bound.auto_a) reject("[bound] a = auto cannot combine with [schedule]");
    if (run.verify_tilting)
      reject("[run] verify_tilting cannot combine with [schedule]");
  }
  if (bound.auto_a &&
      model.hopping.kind != HoppingSpec::Kind::NearestNeighbor)
    reject("[bound] a = auto needs nearest-neighbor hopping");
  if (run.verify_tilting && bound.auto_a)
    reject("[run] verify_tilting needs an explicit [bound] a");

  if (!sweep.r.empty() && model.lattice.kind != LatticeSpec::Kind::Chain)
    reject("[sweep] r needs a chain lattice");

  if ((initial.kind == InitialSpec::Kind::Delta ||
       initial.kind == InitialSpec::Kind::OneBody) &&
      model.statistics != fock::Statistics::Boson)
    reject("delta and onebody initial states build boson cluster states");

  if (initial.kind == InitialSpec::Kind::FockState) {
    if (model.N.size() != 1)
      reject("a fock initial state pins N; give a single [model] N");
    long long total = 0;
    for (int n : initial.occupations) total += n;
    if (total != model.N.front())
      reject("fock initial occupations must sum to N");
  }

  if (run.compare_oracle) {
    if (run.theta <= 0.0 || run.theta >= 1.0)
      reject("[run] theta must lie in (0, 1)");
    if (model.statistics != fock::Statistics::Boson)
      reject("oracle comparison needs bosons");
    if (!schedule.empty())
      reject("oracle comparison cannot combine with [schedule]");
    if (model.lattice.kind != LatticeSpec::Kind::Chain)
      reject("oracle comparison needs a chain lattice");
    if (model.hopping.kind != HoppingSpec::Kind::NearestNeighbor)
      reject("oracle comparison needs nearest-neighbor hopping");
    const bool interaction_free =
        model.potential.kind == PotentialSpec::Kind::Zero ||
        (model.potential.kind == PotentialSpec::Kind::BoseHubbard &&
         model.potential.U == 0.0);
    bool swept_free = true;
    for (double u : sweep.U) swept_free = swept_free && u == 0.0;
    if (!interaction_free || !swept_free)
      reject("oracle comparison needs an interaction-free potential");
    if (initial.kind != InitialSpec::Kind::Delta &&
        initial.kind != InitialSpec::Kind::OneBody)
      reject("oracle comparison needs a delta or onebody initial state");
  }
}

geometry::LatticeGraph build_lattice(const LatticeSpec& spec) {
  switch (spec.kind) {
    case LatticeSpec::Kind::Chain:
      return geometry::make_chain(spec.L);
    case LatticeSpec::Kind::Grid:
      return geometry::make_grid(spec.W, spec.H);
    case LatticeSpec::Kind::File:
      break;
  }

  std::ifstream in(spec.path);
  if (!in)
    fail(ErrorKind::ConfigError, "cannot open lattice file '" + spec.path + "'");
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const size_t hash = out.find('#');
      if (hash != std::string::npos) out = out.substr(0, hash);
      out = trim(out);
      if (!out.empty()) return true;
    }
    return false;
  };
  auto lat_bad = [&](const std::string& what) {
    fail(ErrorKind::ConfigError,
         spec.path + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  if (!next_line(line)) lat_bad("lattice file is empty");
  std::istringstream head(line);
  int D = 0, n_sites = 0;
  if (!(head >> D >> n_sites) || D < 1 || n_sites < 1)
    lat_bad("lattice header needs: D NSITES");

  geometry::LatticeGraph lattice;
  lattice.D = D;
  lattice.sites.resize(n_sites, D);
  for (int i = 0; i < n_sites; ++i) {
    if (!next_line(line)) lat_bad("missing coordinates for site " +
                                  std::to_string(i));
    std::istringstream row(line);
    for (int d = 0; d < D; ++d) {
      double x;
      if (!(row >> x)) lat_bad("site " + std::to_string(i) + " needs " +
                               std::to_string(D) + " coordinates");
      lattice.sites(i, d) = x;
    }
  }
  if (next_line(line)) {
    std::istringstream head2(line);
    std::string tag;
    int m = 0;
    if (!(head2 >> tag >> m) || tag != "EDGES" || m < 0)
      lat_bad("expected 'EDGES M' after the site list");
    for (int k = 0; k < m; ++k) {
      if (!next_line(line)) lat_bad("missing edge " + std::to_string(k));
      std::istringstream row(line);
      int i = 0, j = 0;
      if (!(row >> i >> j)) lat_bad("edge " + std::to_string(k) +
                                    " needs two site indices");
      if (i < 0 || i >= n_sites || j < 0 || j >= n_sites || i == j)
        lat_bad("edge " + std::to_string(k) + " indices out of range");
      lattice.edges.emplace_back(i, j);
    }
  }
  lattice.validate();
  return lattice;
}

hamiltonian::HoppingMatrix build_hopping(
    const HoppingSpec& spec, const geometry::LatticeGraph& lattice) {
  if (spec.kind == HoppingSpec::Kind::NearestNeighbor)
    return hamiltonian::nn_hopping(lattice, spec.J);
  return hamiltonian::expdecay_hopping(lattice, spec.J, spec.gamma);
}

hamiltonian::Potential build_potential(const PotentialSpec& spec) {
  if (spec.kind == PotentialSpec::Kind::Zero)
    return hamiltonian::Potential::zero();
  return hamiltonian::Potential::bose_hubbard(spec.U, spec.mu);
}

}  // namespace latgas::config
