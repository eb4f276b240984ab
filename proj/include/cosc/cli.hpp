// cli.hpp - command-line front end, callable as a library.
//
//   cosc <command> --scenario FILE [options]
//   commands: scenario, verify, diagonalize, spectrum, eigen
//
// Exit codes: 0 success, 1 check or domain failure, 2 input error.

#pragma once

#include "cosc/json_io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cosc::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailed = 1, kInputError = 2 };

struct RunConfig {
    std::string command;
    std::string scenario_path;
    std::optional<double> t0, t1;
    int grid{201};
    int cutoff{0};                 // 0: command default
    std::optional<double> tol;     // overrides every check tolerance
    std::string out_dir;           // empty: report on stdout
    std::string format{"json"};
    std::optional<double> time;    // evaluation time for spectrum / eigen
    int k{10};
    int nmax{2};
    double delta_scale{1.0};       // verify only: corrupt delta for detection tests
    bool dump_matrix{false};
    int points{200};               // eigen quadrature points per axis
    double h{0.02};                // eigen finite-difference spacing
};

struct CommandResult {
    int exit_code{kSuccess};
    io::Json report;
    std::string csv;     // filled for --format csv
    std::string message; // one-line summary, names failing checks
};

/// Runs one command on an already loaded scenario.
CommandResult execute(const RunConfig& cfg, const Scenario& s);

/// Full pipeline: argument parsing, scenario loading, execution, output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cosc::cli
