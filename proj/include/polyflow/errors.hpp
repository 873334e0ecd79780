#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polyflow {

// Config file could not be read as a structured document.
struct ParseError : std::runtime_error {
    int line;  // 1-based line in the config file, 0 if unknown
    explicit ParseError(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
};

// One or more config fields violate their stated rule. Collects every
// violation so a bad file is reported in a single pass.
struct ValidationError : std::runtime_error {
    std::vector<std::string> violations;  // "field: rule" entries
    explicit ValidationError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "config validation failed:";
        for (const auto& e : v) { s += "\n  - "; s += e; }
        return s;
    }
};

struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nonlinear coupling iteration failed to contract.
struct PicardDiverged : SolverError {
    std::vector<double> residual_history;
    PicardDiverged(const std::string& what, std::vector<double> hist)
        : SolverError(what), residual_history(std::move(hist)) {}
};

}  // namespace polyflow
