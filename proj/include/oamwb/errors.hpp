#pragma once

#include <stdexcept>
#include <string>

namespace oamwb {

// Precondition failures on constructor/operation arguments.
using InvalidArgument = std::invalid_argument;

// Fisher information matrix (or scalar) with no usable information.
class SingularInformation : public std::runtime_error {
 public:
  explicit SingularInformation(const std::string& what) : std::runtime_error(what) {}
};

// Fock-space truncation could not hold the state to the requested tolerance.
class TailOverflow : public std::runtime_error {
 public:
  explicit TailOverflow(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation is outside the supported model (e.g. lossy QFIM).
class Unsupported : public std::logic_error {
 public:
  explicit Unsupported(const std::string& what) : std::logic_error(what) {}
};

}  // namespace oamwb
