#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qphase/optimize.hpp"
#include "qphase/strategies.hpp"

namespace qphase {

enum class StrategyKind {
    Heisenberg,
    Sil,
    Noon,
    UnbalancedNoon,   // one-arm only
    Chopping,
    Optimal,
    TwoComponent,     // anchored family one-arm, symmetric family both-arms
    TwinFock,         // Holland-Burnett arm state (|n/2,n/2> behind a splitter)
};

std::optional<StrategyKind> parse_strategy_kind(const std::string& name);
std::string strategy_kind_name(StrategyKind kind);

struct StrategySpec {
    StrategyKind kind;
    LossMode loss_mode;

    StrategySpec(StrategyKind k, LossMode mode);
};

struct StrategyValue {
    double precision = 0.0;
    bool converged = true;   // meaningful for optimizer-backed strategies
};

struct CurveOptions {
    // Report the optimal strategy's precision from exact F_Q evaluated at the
    // bound-optimal state (both-arms only; the bound is already exact
    // one-arm). Exact evaluation is O(n^4); curves above n = 60 use the bound.
    bool refine_exact = false;
    int jobs = 0;             // 0: hardware concurrency
    double tolerance = 1e-9;
    int max_iter = 10000;
};

// One strategy's precision at a single (n, eta) point.
StrategyValue strategy_precision(StrategyKind kind, int n, double eta, LossMode mode,
                                 const CurveOptions& options = {});

struct PrecisionCurve {
    LossMode loss_mode = LossMode::BothArms;
    double eta = 1.0;
    std::vector<StrategyKind> strategies;
    struct Row {
        int n = 0;
        std::vector<double> precision;
        std::vector<bool> converged;
    };
    std::vector<Row> rows;
};

// Precision-versus-N table, rows computed independently (and in parallel when
// options.jobs allows). Optimizer non-convergence is flagged on the row, the
// value is still reported.
PrecisionCurve precision_curve(const std::vector<StrategyKind>& strategies, int n_from,
                               int n_to, double eta, LossMode mode,
                               const CurveOptions& options = {});

struct ScalingCurve {
    double eta = 1.0;
    LossMode loss_mode = LossMode::BothArms;
    struct Row {
        int n = 0;
        double s = 0.0;
    };
    std::vector<Row> rows;
};

// Differential scaling S(n): minus the least-squares slope of
// log(delta phi) against log(n) over the 2*window+1 points n-window..n+window.
// Positive by convention, so the SQL gives 0.5 and the Heisenberg limit 1.
// Rows without full window coverage are omitted.
ScalingCurve differential_scaling(const PrecisionCurve& curve, StrategyKind strategy,
                                  int window = 4);

} // namespace qphase
