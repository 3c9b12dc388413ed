#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace lifecycle {

// Error hierarchy mirrors the CLI exit codes: validation problems
// (bad parameters, bad config) are distinct from numerical failures
// (tolerance breaches, non-convergence) and from I/O trouble.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

class NumericError : public Error {
  public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace lifecycle

#define LC_REQUIRE(cond, msg)                                 \
    do {                                                      \
        if (!(cond)) {                                        \
            std::ostringstream lc_oss_;                       \
            lc_oss_ << msg;                                   \
            throw lifecycle::ValidationError(lc_oss_.str());  \
        }                                                     \
    } while (false)

#define LC_NUMERIC_REQUIRE(cond, msg)                         \
    do {                                                      \
        if (!(cond)) {                                        \
            std::ostringstream lc_oss_;                       \
            lc_oss_ << msg;                                   \
            throw lifecycle::NumericError(lc_oss_.str());     \
        }                                                     \
    } while (false)

#define LC_FAIL(msg)                                          \
    do {                                                      \
        std::ostringstream lc_oss_;                           \
        lc_oss_ << msg;                                       \
        throw lifecycle::Error(lc_oss_.str());                \
    } while (false)
