#pragma once

#include <stdexcept>
#include <string>

namespace deblur {

// Iterative or factorization failure: eigensolver did not converge within its
// sweep cap, or a truncation asked to divide by a zero singular value.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed experiment spec; the message carries the offending field path.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace deblur
