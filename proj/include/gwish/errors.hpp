#pragma once

#include <stdexcept>
#include <string>

namespace gwish {

// A matrix failed a positive-definiteness check. `pivot` is the 1-based index
// of the first nonpositive Cholesky pivot.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(int pivot, const std::string& what)
      : std::runtime_error(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

// An iterative routine ran out of sweeps. `residual` is the last observed
// maximum entrywise change.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double residual, const std::string& what)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Unreadable or malformed input file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gwish
