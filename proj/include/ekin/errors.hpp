#pragma once

#include <stdexcept>
#include <string>

namespace ekin {

// Bad input: malformed model file, out-of-range parameter, arity mismatch.
// CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical invariant the pipeline relies on failed at runtime
// (mass drift, non-finite entries, broken stochasticity). Exit code 2.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ekin
