#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qpol::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kPrecondition = 2, kVerification = 3 };

/// Malformed flag value. `column` is 1-based inside the offending value.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& flag, const std::string& value, std::size_t column, const std::string& what)
        : std::runtime_error(flag + ": " + what + " at column " + std::to_string(column) + " in '" + value + "'") {}
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

enum class Format { csv, json };

struct RunConfig {
    std::optional<int> cutoff;
    int theta_nodes = 64;
    int phi_nodes = 128;
    double tolerance = 1e-8;
    Format format = Format::csv;
    std::string output;  // empty: stdout
    bool oracle = false;

    void validate() const;
};

/// lo:hi:step, inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& flag, const std::string& text);

/// Comma separated reals.
std::vector<double> parse_reals(const std::string& flag, const std::string& text);

/// Shortest text for 17 significant digits; -0 prints as 0.
std::string format_number(double v);

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> footer;  // CSV: trailing '#' lines; JSON: meta.footer
    std::vector<std::string> argv;

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
};

/// Verification report; `failed` counts failing checks.
struct VerifyResult {
    Table table;
    int failed = 0;
};

/// Runs the named verify sections (all when empty).
VerifyResult run_verify(const std::vector<std::string>& only, const RunConfig& config);

std::vector<std::string> verify_sections();

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpol::cli
