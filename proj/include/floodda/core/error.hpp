#pragma once

#include <stdexcept>
#include <string>

namespace floodda {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: a config field, a malformed file, an inconsistent grid.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The explicit solver produced a non-finite value.
class SolverInstability : public Error {
 public:
  SolverInstability(int cell, double t, const std::string& what)
      : Error(what), cell_(cell), time_(t) {}
  int cell() const noexcept { return cell_; }
  double time() const noexcept { return time_; }

 private:
  int cell_;
  double time_;
};

}  // namespace floodda
