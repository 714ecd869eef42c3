#pragma once

#include <stdexcept>
#include <string>

namespace splitrx {

// Unsupported modulation order / ring layout.
class InvalidOrder : public std::invalid_argument {
  public:
    explicit InvalidOrder(const std::string& what) : std::invalid_argument(what) {}
};

// A detector was asked to run at a splitting ratio where one of its branches
// carries no signal (rho = 0 or rho = 1 for the two-branch detectors).
class SplitterDegenerate : public std::domain_error {
  public:
    explicit SplitterDegenerate(const std::string& what) : std::domain_error(what) {}
};

// A likelihood was requested for a noise configuration whose density contains
// a point mass (zero conversion or rectifier variance); quadrature is invalid.
class DegenerateDensity : public std::domain_error {
  public:
    explicit DegenerateDensity(const std::string& what) : std::domain_error(what) {}
};

// Configuration file problem; carries the 1-based line number when known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

  private:
    int line_ = 0;
};

}  // namespace splitrx
