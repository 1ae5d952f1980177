#pragma once

#include <stdexcept>
#include <string>

namespace pqcat {

// Error taxonomy shared by the whole library. Everything derives from Error
// so callers can catch the library as a whole or a specific failure mode.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHyperbolic : Error {
    explicit NotHyperbolic(const std::string& msg) : Error(msg) {}
};
struct NotSymplectic : Error {
    explicit NotSymplectic(const std::string& msg) : Error(msg) {}
};
struct GenerationFailed : Error {
    explicit GenerationFailed(const std::string& msg) : Error(msg) {}
};
struct NotExpanding : Error {
    explicit NotExpanding(const std::string& msg) : Error(msg) {}
};
struct ParityNonzero : Error {
    explicit ParityNonzero(const std::string& msg) : Error(msg) {}
};
struct TruncationTooSmall : Error {
    explicit TruncationTooSmall(const std::string& msg) : Error(msg) {}
};
struct IntertwinerNotUnique : Error {
    explicit IntertwinerNotUnique(const std::string& msg) : Error(msg) {}
};
struct QuantizationConditionViolated : Error {
    explicit QuantizationConditionViolated(const std::string& msg) : Error(msg) {}
};
struct NotUnitary : Error {
    explicit NotUnitary(const std::string& msg) : Error(msg) {}
};
struct ModeMismatch : Error {
    explicit ModeMismatch(const std::string& msg) : Error(msg) {}
};
struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};
struct UnsupportedDimension : Error {
    explicit UnsupportedDimension(const std::string& msg) : Error(msg) {}
};
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace pqcat
