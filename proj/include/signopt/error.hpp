#ifndef SIGNOPT_ERROR_HPP
#define SIGNOPT_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace signopt {

// Invalid argument to a library operation (dimension mismatch, out-of-range
// parameter, violated precondition).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iteration produced a non-finite or runaway state.
class NumericAbort : public std::runtime_error {
public:
    NumericAbort(std::uint64_t step, double rho, const std::string& what)
        : std::runtime_error(what), step_(step), rho_(rho) {}

    std::uint64_t step() const noexcept { return step_; }
    double rho() const noexcept { return rho_; }

private:
    std::uint64_t step_;
    double rho_;
};

}  // namespace signopt

#endif  // SIGNOPT_ERROR_HPP
