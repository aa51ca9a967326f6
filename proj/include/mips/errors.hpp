#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mips {

// One violated constraint from parameter validation.
struct Violation {
    std::string field;
    std::string code;  // "NonPositive", "OverPacked", "DegenerateDomain", ...
    std::string message;
};

std::string format_violations(const std::vector<Violation>& v);

// Configuration / validation problems. CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    ConfigError(const std::string& msg, std::vector<Violation> violations)
        : std::runtime_error(msg), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

enum class TheoryErrc {
    degenerate_speed,
    density_above_close_packing,
    nonpositive_density,
};

class TheoryError : public std::runtime_error {
  public:
    TheoryError(TheoryErrc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    TheoryErrc code() const { return code_; }

  private:
    TheoryErrc code_;
};

enum class AnalysisErrc {
    empty_sample,
    time_mismatch,
    non_negative_slope,
};

class AnalysisError : public std::runtime_error {
  public:
    AnalysisError(AnalysisErrc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    AnalysisErrc code() const { return code_; }

  private:
    AnalysisErrc code_;
};

// Malformed persisted data; carries the 1-based line number when known.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg, std::size_t line = 0) : std::runtime_error(msg), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class InitializationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace mips
