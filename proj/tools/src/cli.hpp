#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polycap/capacity_engine.hpp"

namespace polycap::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_validation = 3, exit_computation = 4 };

enum class Subcommand { coeffs, fundsol, capacity, wiener, verify };
enum class Format { json, csv, text };

struct RunConfig {
    Subcommand subcommand = Subcommand::verify;
    int m = 1;
    int n = 3;
    Format format = Format::json;
    std::string out_path;  ///< empty writes to stdout
    Discretization disc;
    CapacityKind kind = CapacityKind::dirichlet;
    // coeffs
    int p_max = 10;
    // capacity
    std::string obstacle_path;
    double r_in = 0.0;
    double r_out = 0.0;
    bool sweep = false;
    int sweep_steps = 6;
    // wiener
    std::string model_path;
    int j0 = 0;
    int j_max = 12;
};

struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code = exit_ok;
    std::string message;  ///< usage text, help text or the validation error
};

/// Parses arguments after the program name. Usage problems give exit_usage,
/// an invalid (m, n) gives exit_validation; --help gives exit_ok without a config.
ParseResult parse_args(const std::vector<std::string>& args);

/// Runs a validated config, writing the artifact to out (or the configured
/// path) and diagnostics to err. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polycap::cli
