#pragma once

#include <stdexcept>
#include <string>

namespace latgas {

// Failure classes used across the library.  The CLI maps these onto exit
// codes: invalid input -> 2, resource/convergence failures -> 3.
enum class ErrorKind {
  InvalidRegion,
  InvalidSector,
  InvalidModel,
  InvalidState,
  InvalidLattice,
  GeometryDegenerate,
  Unsupported,
  NoSupersonicSeparation,
  Overflow,
  ConfigError,
  PropagationFailure,
  ResourceLimit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // true for errors caused by bad user input rather than runtime limits
  bool is_input_error() const noexcept {
    return kind_ != ErrorKind::PropagationFailure &&
           kind_ != ErrorKind::ResourceLimit;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace latgas
