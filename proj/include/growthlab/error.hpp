#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace growthlab {

// Every hard failure in the library is one of these kinds. The CLI maps
// kinds to exit codes, tests match on them.
enum class ErrorKind {
    Domain,          // argument outside the mathematical domain
    Overflow,        // value left the representable range upward
    HeightCap,       // tower height would exceed the configured cap
    IterationBudget, // descent/ascent loop exceeded its iteration cap
    DepthBudget,     // recursion/chain depth exceeded its cap
    Parse,           // expression text failed to parse
    Precondition,    // sampled precondition check failed (e.g. f(x) <= x)
    Unsupported,     // parameter combination deliberately not supported
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    Error(ErrorKind kind, std::string message, double at)
        : std::runtime_error(std::move(message)), kind_(kind), at_(at) {}
    Error(ErrorKind kind, std::string message, std::size_t offset)
        : std::runtime_error(std::move(message)), kind_(kind), offset_(offset) {}

    ErrorKind kind() const { return kind_; }
    std::optional<double> at() const { return at_; }
    std::optional<std::size_t> offset() const { return offset_; }

private:
    ErrorKind kind_;
    std::optional<double> at_;       // offending value, when meaningful
    std::optional<std::size_t> offset_; // byte offset, for parse errors
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}
[[noreturn]] inline void fail_at(ErrorKind kind, const std::string& msg, double x) {
    throw Error(kind, msg, x);
}

const char* to_string(ErrorKind kind);

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::HeightCap: return "height-cap";
    case ErrorKind::IterationBudget: return "iteration-budget";
    case ErrorKind::DepthBudget: return "depth-budget";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Unsupported: return "unsupported";
    }
    return "unknown";
}

} // namespace growthlab
