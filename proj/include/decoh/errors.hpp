#ifndef DECOH_ERRORS_HPP
#define DECOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace decoh {

/* Error taxonomy mirrors the CLI exit-code contract:
 *   ConfigError      -> exit 2   (bad input: schema, parameter domains)
 *   StabilityError   -> exit 3   (gamma0 >= M*Omega^2/4, hilltop unstable)
 *   ConvergenceError -> exit 4   (quadrature/root-finding/range failures)
 * Oracle deviation (exit 5) is a comparison outcome, not an exception. */

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Bad argument values at the library boundary (eigenvalue not in spectrum,
// degenerate pair, ...). Treated as a configuration problem by the CLI.
class DomainError : public ConfigError {
public:
    explicit DomainError(const std::string& msg) : ConfigError(msg) {}
};

class StabilityError : public Error {
public:
    explicit StabilityError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Evaluation outside the tabulated correlator range. No silent extrapolation.
class RangeError : public ConvergenceError {
public:
    explicit RangeError(const std::string& msg) : ConvergenceError(msg) {}
};

} // namespace decoh

#endif
