#ifndef QJSD_ERRORS_HPP
#define QJSD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qjsd {

// Every library error carries a stable machine-readable code string; the CLI
// maps it to an error JSON on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct InvalidOperatorError : Error {
    explicit InvalidOperatorError(const std::string& what) : Error("invalid-operator", what) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& what) : Error("dimension-mismatch", what) {}
};

struct CommutativityViolationError : Error {
    explicit CommutativityViolationError(const std::string& what)
        : Error("commutativity-violation", what) {}
};

struct SpecInvariantError : Error {
    explicit SpecInvariantError(const std::string& what) : Error("spec-invariant", what) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& what) : Error("resource-limit", what) {}
};

struct DomainError : Error {
    DomainError(const std::string& code, const std::string& what) : Error(code, what) {}
};

struct DegenerateConditioningError : Error {
    explicit DegenerateConditioningError(const std::string& what)
        : Error("degenerate-conditioning", what) {}
};

// carries the raw post-selection probability that fell below threshold
struct DegeneratePostSelectionError : Error {
    DegeneratePostSelectionError(const std::string& what, double raw_probability)
        : Error("degenerate-post-selection", what), raw_probability(raw_probability) {}
    double raw_probability;
};

struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& what) : Error("grid-mismatch", what) {}
};

struct SchemaError : Error {
    // `where` is a JSON-pointer-style path to the offending field
    SchemaError(const std::string& where, const std::string& what)
        : Error("schema-violation", what + " (at " + where + ")"), where(where) {}
    std::string where;
};

struct InvariantViolationError : Error {
    InvariantViolationError(const std::string& what, double residual)
        : Error("invariant-violation", what), residual(residual) {}
    double residual;
};

}  // namespace qjsd

#endif
