#pragma once

#include <stdexcept>
#include <string>

namespace bsb {

// An iterative method failed to meet its tolerance. Indicates a defect or a
// pathological input rather than a domain answer such as infeasibility.
class ConvergenceError : public std::runtime_error
{
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bsb
