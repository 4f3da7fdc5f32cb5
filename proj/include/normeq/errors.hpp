#pragma once

#include <stdexcept>
#include <string>

namespace normeq {

// Every failure the library can raise, as one enum so the CLI can map
// kinds to exit codes without string matching.
enum class ErrorKind {
  non_square,
  not_normal,
  shape_mismatch,
  not_orthonormal,
  not_hermitian,
  not_unitary,
  spectrum_contains_one,
  not_intertwining,
  not_a_substructure,
  cluster_ambiguity,
  guard_tripped,
  parse_error,
  shape_error,
  non_finite,
  invalid_argument,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace normeq
