#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// Base class for every domain error raised by the simulator.
class BohmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Guidance velocities are undefined because |psi|^2 fell below the node
/// threshold at the evaluated point.
class NodeError : public BohmError {
 public:
  NodeError(double density, double threshold)
      : BohmError("density " + std::to_string(density) +
                  " below node threshold " + std::to_string(threshold)),
        density_(density),
        threshold_(threshold) {}

  double density() const noexcept { return density_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double density_;
  double threshold_;
};

class InvalidStart : public BohmError {
 public:
  using BohmError::BohmError;
};

class DegenerateValues : public BohmError {
 public:
  using BohmError::BohmError;
};

class ZeroMass : public BohmError {
 public:
  using BohmError::BohmError;
};

class InsufficientGroup : public BohmError {
 public:
  using BohmError::BohmError;
};

}  // namespace bohm
