#pragma once

#include <stdexcept>
#include <string>

namespace kerrqfi {

// Probability mass lost to the finite Fock basis exceeded the configured
// tolerance, or a construction was detected to be truncation-corrupted.
class truncation_error : public std::runtime_error {
 public:
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity violated a physical bound beyond numerical tolerance
// (negative variance, uncertainty-principle violation, ...).
class inconsistency_error : public std::runtime_error {
 public:
  explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

// A parameter sweep aborted; the message identifies the offending grid point.
class sweep_error : public std::runtime_error {
 public:
  explicit sweep_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kerrqfi
