#include "traceinv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "traceinv/bounds.hpp"
#include "traceinv/dense_oracle.hpp"
#include "traceinv/diag_approx.hpp"
#include "traceinv/generators.hpp"
#include "traceinv/ilu.hpp"
#include "traceinv/lowrank.hpp"
#include "traceinv/rng.hpp"
#include "traceinv/sampling.hpp"

namespace traceinv {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double norm_sq(const DenseVector& v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

const char* to_string(ApproxKind k) {
    switch (k) {
        case ApproxKind::ilu: return "ilu";
        case ApproxKind::ilu0: return "ilu0";
        case ApproxKind::svd: return "svd";
        case ApproxKind::bounds: return "bounds";
    }
    return "?";
}

const char* to_string(ModelKind k) {
    return k == ModelKind::linear ? "linear" : "pchip";
}

const char* to_string(FollowUp f) {
    switch (f) {
        case FollowUp::fitted_trace: return "fitted-trace";
        case FollowUp::mc_unit_on_efit: return "mc-unit-on-Efit";
        case FollowUp::mc_hutch_on_e: return "mc-hutch-on-E";
        case FollowUp::mc_hutch_on_ainv: return "mc-hutch-on-Ainv";
    }
    return "?";
}

VarianceEstimates estimate_variances(std::span<const ColumnSolve> columns,
                                     std::span<const DenseVector> residual_cols,
                                     std::span<const int> mc_indices,
                                     std::span<const double> mc_d, const FitModel& f,
                                     const DenseVector& m, int n) {
    if (columns.empty()) {
        throw std::invalid_argument("estimate_variances: no solved columns");
    }
    if (!residual_cols.empty() && residual_cols.size() != columns.size()) {
        throw std::invalid_argument("estimate_variances: residual columns misaligned");
    }
    if (mc_indices.size() != mc_d.size()) {
        throw std::invalid_argument("estimate_variances: probe arrays misaligned");
    }
    if (mc_indices.size() < 2) {
        throw std::invalid_argument("estimate_variances: need at least two holdout probes");
    }

    const double s = static_cast<double>(columns.size());
    VarianceEstimates out;

    double acc = 0.0;
    for (const ColumnSolve& c : columns) {
        acc += norm_sq(c.x) - c.d * c.d;
    }
    out.hutch_ainv = (2.0 * n / (s * s)) * acc;

    if (residual_cols.empty()) {
        out.hutch_e = kNan;
    } else {
        double acc_e = 0.0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const double eii = residual_cols[j][columns[j].index];
            acc_e += norm_sq(residual_cols[j]) - eii * eii;
        }
        out.hutch_e = (2.0 * n / (s * s)) * acc_e;
    }

    const double s_mc = static_cast<double>(mc_indices.size());
    double mean = 0.0;
    DenseVector efit(mc_indices.size());
    for (std::size_t j = 0; j < mc_indices.size(); ++j) {
        efit[j] = mc_d[j] - eval_model(f, m[mc_indices[j]]);
        mean += efit[j];
    }
    mean /= s_mc;
    double ss = 0.0;
    for (double v : efit) ss += (v - mean) * (v - mean);
    const double unbiased = ss / (s_mc - 1.0);
    out.unit_efit = (static_cast<double>(n) * n / (s_mc - 1.0)) * unbiased;
    return out;
}

void TraceErrorMonitor::push(double trace_fit) {
    ++step_;
    const int i = step_;
    if (i == 5) {
        prev_trace_ = trace_fit;
        return;
    }
    if (i == 6) {
        if (prev_trace_ == 0.0) {
            throw std::domain_error("trace error monitor: T_5 is zero");
        }
        err_ = std::abs(trace_fit - prev_trace_) / std::abs(prev_trace_);
        defined_ = true;
        prev_trace_ = trace_fit;
        return;
    }
    if (trace_fit == 0.0) {
        throw std::domain_error("trace error monitor: zero trace estimate");
    }
    const double temp = std::abs(trace_fit - prev_trace_) / std::abs(trace_fit);
    const double r = (i - 1.0) / static_cast<double>(i);
    const double r2 = r * r;
    const double ratio = r2 * r2;  // ((i-1)/i)^4
    bool accept;
    if (err_ == 0.0) {
        accept = temp > 0.0;
    } else {
        accept = temp / err_ >= ratio;
    }
    if (accept) {
        err_ = temp;
    } else {
        err_ *= std::pow(r, 2.25);  // ((i-1)/i)^(9/4)
    }
    prev_trace_ = trace_fit;
}

double TraceErrorMonitor::current() const {
    if (!defined_) {
        throw std::logic_error("trace error monitor: not defined before the second step");
    }
    return err_;
}

double monitor_trace_error(std::span<const double> trace_fits) {
    if (trace_fits.size() < 2) {
        throw std::invalid_argument("monitor_trace_error: need T_5 and T_6 at least");
    }
    TraceErrorMonitor monitor;
    for (double t : trace_fits) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument("monitor_trace_error: non-finite trace estimate");
        }
        monitor.push(t);
    }
    return monitor.current();
}

namespace {

struct ApproxPlan {
    std::optional<IluFactors> ilu;
    std::optional<LowRankFactors> lowrank;  // 2*max_pts triplets, truncated per step
    std::optional<DiagApprox> fixed;        // ilu/ilu0/bounds: M does not change
};

ApproxPlan build_plan(const SparseMatrix& a, const RunConfig& cfg) {
    ApproxPlan plan;
    switch (cfg.approx) {
        case ApproxKind::ilu:
            plan.ilu = ilut_factorize(a, cfg.droptol);
            plan.fixed = diag_inverse_from_ilu(*plan.ilu);
            break;
        case ApproxKind::ilu0:
            plan.ilu = ilu0_factorize(a);
            plan.fixed = diag_inverse_from_ilu(*plan.ilu);
            break;
        case ApproxKind::svd: {
            const int k = std::min(2 * cfg.max_pts, a.n);
            plan.lowrank = smallest_singular_triplets(a, k);
            break;
        }
        case ApproxKind::bounds: {
            double lo = cfg.lambda_min, hi = cfg.lambda_max;
            if (lo == 0.0 && hi == 0.0) {
                std::tie(lo, hi) = estimate_spectrum_range(a);
            }
            auto [lower, upper] = variational_bounds(a, lo, hi);
            (void)upper;  // the sharper lower bound serves as M
            plan.fixed = std::move(lower);
            break;
        }
    }
    return plan;
}

DiagApprox approx_for_step(const ApproxPlan& plan, int step) {
    if (plan.fixed) {
        return *plan.fixed;
    }
    const int k = std::min(2 * step, plan.lowrank->k);
    return diag_from_lowrank(truncate(*plan.lowrank, k));
}

}  // namespace

DynamicTrajectory run_dynamic(const SparseMatrix& a, const RunConfig& cfg) {
    validate(a);
    const int n = a.n;
    if (cfg.max_pts < 5) {
        throw std::invalid_argument("run_dynamic: max_pts must be >= 5");
    }
    if (cfg.s_mc < 2) {
        throw std::invalid_argument("run_dynamic: s_mc must be >= 2");
    }
    if (cfg.max_pts + cfg.s_mc > n) {
        throw std::invalid_argument("run_dynamic: max_pts + s_mc exceeds the matrix order");
    }
    if (cfg.oracle && n > kOracleCap) {
        throw std::invalid_argument("run_dynamic: oracle requested above the oracle cap");
    }

    ApproxPlan plan = build_plan(a, cfg);

    // fitting point growth is deterministic given the approximations, so the
    // whole schedule is laid out first and the holdout set is drawn from the
    // untouched indices
    std::vector<DiagApprox> approxes;       // per step, 5..max_pts
    std::vector<FitSampleSet> fit_sets;
    approxes.reserve(cfg.max_pts - 4);
    fit_sets.reserve(cfg.max_pts - 4);
    std::set<int> fit_union;
    for (int i = 5; i <= cfg.max_pts; ++i) {
        approxes.push_back(approx_for_step(plan, i));
        if (i == 5) {
            fit_sets.push_back(select_fit_points(approxes.back(), 5));
        } else {
            fit_sets.push_back(grow_fit_points(fit_sets.back(), approxes.back(), i));
        }
        for (int idx : fit_sets.back().original_indices) {
            fit_union.insert(idx);
        }
    }

    std::vector<int> complement;
    complement.reserve(n - fit_union.size());
    for (int i = 0; i < n; ++i) {
        if (!fit_union.count(i)) complement.push_back(i);
    }
    if (static_cast<int>(complement.size()) < cfg.s_mc) {
        throw std::runtime_error("run_dynamic: not enough indices left for the holdout set");
    }
    RngStream rng(cfg.seed, 0x5ACu);
    std::vector<int> draw = sample_without_replacement(
        static_cast<int>(complement.size()), cfg.s_mc, rng);
    std::vector<int> mc_indices;
    mc_indices.reserve(cfg.s_mc);
    for (int d : draw) mc_indices.push_back(complement[d]);
    std::sort(mc_indices.begin(), mc_indices.end());

    // one solver, one solve per distinct index over the whole trajectory
    SolveOptions solve_opts;
    solve_opts.tol = cfg.solver_tol;
    solve_opts.precond = plan.ilu ? &*plan.ilu : nullptr;
    LinearSolver solver(a, solve_opts);
    std::map<int, ColumnSolve> solved;
    int solve_count = 0;
    auto ensure_solved = [&](std::span<const int> indices) {
        for (int idx : indices) {
            if (solved.count(idx)) continue;
            DenseVector e(n, 0.0);
            e[idx] = 1.0;
            ColumnSolve c;
            c.index = idx;
            c.x = solver.solve(e);
            c.d = c.x[idx];
            DenseVector ax = matvec(a, c.x);
            ax[idx] -= 1.0;
            c.residual_norm = std::sqrt(norm_sq(ax));
            solved.emplace(idx, std::move(c));
            ++solve_count;
        }
    };
    ensure_solved(mc_indices);

    DenseVector mc_d;
    mc_d.reserve(mc_indices.size());
    for (int idx : mc_indices) mc_d.push_back(solved.at(idx).d);

    double oracle_trace = kNan;
    if (cfg.oracle) {
        DenseVector diag = dense_inverse_diagonal(a);
        oracle_trace = std::accumulate(diag.begin(), diag.end(), 0.0);
    }

    DynamicTrajectory traj;
    traj.config = cfg;
    traj.mc_indices = mc_indices;
    traj.oracle_trace = oracle_trace;

    // residual columns against the fixed ILU factors never change
    std::map<int, DenseVector> ilu_residuals;
    TraceErrorMonitor monitor;

    for (int i = 5; i <= cfg.max_pts; ++i) {
        const DiagApprox& approx = approxes[i - 5];
        const FitSampleSet& samples = fit_sets[i - 5];
        ensure_solved(samples.original_indices);

        DenseVector fit_m, fit_d;
        fit_m.reserve(samples.original_indices.size());
        fit_d.reserve(samples.original_indices.size());
        for (int idx : samples.original_indices) {
            fit_m.push_back(approx.m[idx]);
            fit_d.push_back(solved.at(idx).d);
        }

        FitModel model = cfg.model == ModelKind::linear
                             ? FitModel(fit_linear(fit_m, fit_d))
                             : FitModel(fit_pchip(approx, samples, fit_d));
        const double trace_fit = trace_from_fit(model, approx.m);

        // columns over S_fit U S_mc in ascending index order
        std::set<int> active(samples.original_indices.begin(),
                             samples.original_indices.end());
        active.insert(mc_indices.begin(), mc_indices.end());
        std::vector<ColumnSolve> columns;
        columns.reserve(active.size());
        for (int idx : active) columns.push_back(solved.at(idx));

        std::vector<DenseVector> residual_cols;
        if (plan.ilu) {
            residual_cols.reserve(columns.size());
            for (const ColumnSolve& c : columns) {
                auto it = ilu_residuals.find(c.index);
                if (it == ilu_residuals.end()) {
                    it = ilu_residuals
                             .emplace(c.index, residual_column(a, *plan.ilu, c.x, c.index))
                             .first;
                }
                residual_cols.push_back(it->second);
            }
        } else if (plan.lowrank) {
            const LowRankFactors step_factors =
                truncate(*plan.lowrank, std::min(2 * i, plan.lowrank->k));
            residual_cols.reserve(columns.size());
            for (const ColumnSolve& c : columns) {
                residual_cols.push_back(residual_column(a, step_factors, c.x, c.index));
            }
        }

        VarianceEstimates v = estimate_variances(columns, residual_cols, mc_indices, mc_d,
                                                 model, approx.m, n);

        monitor.push(trace_fit);

        StepRecord rec;
        rec.step = i;
        rec.fit_point_count = samples.size();
        rec.trace_fit = trace_fit;
        rec.var_hutch_ainv = v.hutch_ainv;
        rec.var_hutch_e = v.hutch_e;
        rec.var_unit_efit = v.unit_efit;
        rec.trace_err_est = monitor.defined() ? monitor.current() : kNan;
        rec.trace_err_actual =
            cfg.oracle ? std::abs(trace_fit - oracle_trace) / std::abs(oracle_trace) : kNan;
        traj.records.push_back(rec);
    }

    traj.final_trace = traj.records.back().trace_fit;
    traj.column_solve_count = solve_count;

    // follow-up choice: the fitted trace when the monitor meets the target,
    // otherwise the estimator whose per-sample variance is smallest
    const StepRecord& last = traj.records.back();
    if (monitor.defined() && monitor.current() <= cfg.target_rel_error) {
        traj.chosen_followup = FollowUp::fitted_trace;
    } else {
        const double s_total = static_cast<double>(
            std::set<int>(fit_sets.back().original_indices.begin(),
                          fit_sets.back().original_indices.end())
                .size() +
            mc_indices.size());
        const double v1 = last.var_hutch_ainv * s_total;
        const double v2 = std::isnan(last.var_hutch_e)
                              ? std::numeric_limits<double>::infinity()
                              : last.var_hutch_e * s_total;
        const double v3 = last.var_unit_efit * (static_cast<double>(mc_indices.size()) - 1.0);
        traj.chosen_followup = FollowUp::mc_hutch_on_ainv;
        double best = v1;
        if (v2 < best) {
            best = v2;
            traj.chosen_followup = FollowUp::mc_hutch_on_e;
        }
        if (v3 < best) {
            best = v3;
            traj.chosen_followup = FollowUp::mc_unit_on_efit;
        }
    }
    return traj;
}

}  // namespace traceinv
