#pragma once

#include <optional>
#include <vector>

#include "qphase/qfi.hpp"
#include "qphase/states.hpp"

namespace qphase {

struct OptimizeOptions {
    double tolerance = 1e-9;  // on the tangent-cone projected gradient norm
    int max_iter = 10000;
    // Starting weights; the uniform interior point when absent. Any interior
    // start reaches the same global maximum (the objective is concave).
    std::optional<std::vector<double>> start;
    // Evaluate qfi_exact at the found optimum when eta_b < 1 (where the bound
    // is not automatically exact).
    bool refine_exact = true;
};

struct OptimizationReport {
    InputState optimum;
    QfiResult qfi;                // F̃_Q at the optimum (exact for eta_b = 1)
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;        // final projected-gradient norm
    std::optional<QfiResult> refined_exact;
};

// Maximizes F̃_Q over the weight simplex: projected gradient ascent with
// Armijo backtracking, accelerated by Levenberg-regularized Newton steps on
// the current face, plus a residual-polish endgame once function increases
// fall below double-precision resolution. Concavity makes any maximum global.
// Non-convergence within max_iter reports converged = false, not an error.
OptimizationReport optimize(int n, const LossModel& loss, const OptimizeOptions& options = {});

enum class TwoComponentForm {
    Anchored,   // sqrt(p)|m,n-m> + sqrt(1-p)|n,0>, p and integer m searched
    Symmetric,  // (|m,n-m> + |n-m,m>)/sqrt(2), integer m searched
};

// Restricted search over the two-component families. The anchored continuous
// parameter is resolved by golden-section (the objective is concave in p
// along the family, hence unimodal); ties between m values resolve to the
// smaller m.
OptimizationReport optimize_two_component(int n, const LossModel& loss, TwoComponentForm form,
                                          const OptimizeOptions& options = {});

} // namespace qphase
