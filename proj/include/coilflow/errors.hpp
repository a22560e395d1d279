#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace coilflow {

/// Invalid or inconsistent run configuration (detected before any step runs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometry that the solver cannot handle (disconnected domain, thin outlet, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written; message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or non-positive state detected during a step.
class NumericalBlowUp : public std::runtime_error {
 public:
  NumericalBlowUp(const std::string& what, std::array<int, 3> cell, long step)
      : std::runtime_error(what), cell_(cell), step_(step) {}

  [[nodiscard]] std::array<int, 3> cell() const { return cell_; }
  [[nodiscard]] long step() const { return step_; }

 private:
  std::array<int, 3> cell_;
  long step_;
};

}  // namespace coilflow
