/// @file dynamics.hpp
/// @brief The dynamic fitting loop: grow fitting points, refit, estimate the
///        Monte Carlo variances from solved columns, monitor the relative
///        trace error, and pick a follow-up estimator.

#ifndef TRACEINV_DYNAMICS_HPP
#define TRACEINV_DYNAMICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "traceinv/fitting.hpp"
#include "traceinv/solver.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

enum class ApproxKind { ilu, ilu0, svd, bounds };
enum class ModelKind { linear, pchip };
enum class FollowUp { fitted_trace, mc_unit_on_efit, mc_hutch_on_e, mc_hutch_on_ainv };

const char* to_string(ApproxKind k);
const char* to_string(ModelKind k);
const char* to_string(FollowUp f);

struct RunConfig {
    // matrix source: a Matrix Market path, or a generator with parameters
    std::string matrix_path;
    std::string generator;  // "poisson2d" | "heatflow" | ""
    int grid_side = 0;
    double alpha = 0.0;

    ApproxKind approx = ApproxKind::svd;
    ModelKind model = ModelKind::pchip;
    int max_pts = 20;
    int s_mc = 10;
    double solver_tol = 1e-10;
    double droptol = 1e-2;
    std::uint64_t seed = 0;
    bool oracle = false;
    double target_rel_error = 1e-2;
    std::string out_dir = ".";
    // 0 means estimate from the matrix (bounds source only)
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct StepRecord {
    int step = 0;              // i
    int fit_point_count = 0;   // k_i = |S_fit|
    double trace_fit = 0.0;    // T_i
    double var_hutch_ainv = 0.0;
    double var_hutch_e = 0.0;  // nan when the source provides no Z^-1 action
    double var_unit_efit = 0.0;
    double trace_err_est = 0.0;     // nan before the monitor is defined
    double trace_err_actual = 0.0;  // nan without the oracle
};

struct DynamicTrajectory {
    std::vector<StepRecord> records;
    RunConfig config;
    FollowUp chosen_followup = FollowUp::fitted_trace;
    double final_trace = 0.0;
    std::vector<int> mc_indices;
    int column_solve_count = 0;
    double oracle_trace = 0.0;  // nan without the oracle
};

struct VarianceEstimates {
    double hutch_ainv = 0.0;
    double hutch_e = 0.0;
    double unit_efit = 0.0;
};

/// Sampled-column variance estimates. columns covers S_fit plus S_mc;
/// residual_cols (may be empty) is aligned with columns and holds
/// E(:,i) = x_i - Z^-1 e_i; mc_* carry the holdout probes only.
VarianceEstimates estimate_variances(std::span<const ColumnSolve> columns,
                                     std::span<const DenseVector> residual_cols,
                                     std::span<const int> mc_indices,
                                     std::span<const double> mc_d, const FitModel& f,
                                     const DenseVector& m, int n);

/// Streaming form of the relative trace-error monitor. Feed T_5, T_6, ...;
/// the estimate is defined from the second push on.
class TraceErrorMonitor {
public:
    void push(double trace_fit);
    bool defined() const { return defined_; }
    double current() const;

private:
    int step_ = 4;
    double prev_trace_ = 0.0;
    double err_ = 0.0;
    bool defined_ = false;
};

/// Relative trace error from the sequence T_5 .. T_i (needs i >= 6):
/// the estimate accepts a successive-difference value only when it does not
/// improve faster than the interpolation error bound ratio ((i-1)/i)^4
/// allows, and otherwise decays the previous estimate by ((i-1)/i)^(9/4).
double monitor_trace_error(std::span<const double> trace_fits);

/// Runs the full dynamic loop for i = 5..max_pts.
DynamicTrajectory run_dynamic(const SparseMatrix& a, const RunConfig& cfg);

}  // namespace traceinv

#endif
