#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slm {

enum class ErrorKind {
  invalid_parameter,
  incompatible_grids,
  precondition,
  invalid_interval,
  no_interior_maximum,
  undefined_q,
  blow_up,
  instability,
  closure_singularity,
  horizon_violation,
  config,
  io,
};

/// Machine-parsable category name used by the CLI ("blow-up", "config", ...).
std::string_view category_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Population cap exceeded during a microscopic run.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, std::size_t population);
  double time() const noexcept { return time_; }
  std::size_t population() const noexcept { return population_; }

 private:
  double time_;
  std::size_t population_;
};

/// A time stepper produced a negative value beyond round-off.
class InstabilityError : public Error {
 public:
  InstabilityError(double time, std::size_t cell, double value);
  double time() const noexcept { return time_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  double time_;
  std::size_t cell_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace slm
