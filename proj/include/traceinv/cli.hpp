/// @file cli.hpp
/// @brief Command-line orchestration: run the dynamic pipeline or the
///        model-vs-Monte-Carlo comparison, writing CSV and plot artifacts.

#ifndef TRACEINV_CLI_HPP
#define TRACEINV_CLI_HPP

#include <iosfwd>
#include <string>

#include "traceinv/dynamics.hpp"

namespace traceinv {

struct CompareConfig {
    std::string matrix_path;
    std::string generator;
    int grid_side = 0;
    double alpha = 0.0;
    int fit_points = 20;  // also the MC sample budget s
    double droptol = 1e-2;
    double solver_tol = 1e-10;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

/// Loads the configured matrix (file or generator).
SparseMatrix load_matrix(const std::string& path, const std::string& generator, int grid_side,
                         double alpha);

/// Runs the dynamic pipeline and writes trajectory.csv, summary.txt and
/// plots.gp into cfg.out_dir. Throws on failure.
void run_command(const RunConfig& cfg);

/// Writes compare.csv: per approximation source, the fitted relative trace
/// error next to the std-derived relative errors of the Rademacher
/// estimator on A^-1 and on E at the same sample budget.
void compare_command(const CompareConfig& cfg);

void write_trajectory_csv(std::ostream& out, const DynamicTrajectory& traj);

/// key = value lines echoing the configuration; parse_config_echo restores
/// an identical RunConfig from them.
void write_config_echo(std::ostream& out, const RunConfig& cfg);
RunConfig parse_config_echo(std::istream& in);

/// Full argv interface (subcommands `run` and `compare`); returns the
/// process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace traceinv

#endif
