#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qphase/states.hpp"

namespace qphase {

enum class QfiMethod { Pure, Bound, OneArm, Exact };

std::string qfi_method_name(QfiMethod m);

// Quantum Fisher information for the relative-phase generator, plus the
// per-run precision delta_phi_min = 1/sqrt(F) it implies through the quantum
// Cramer-Rao bound. A zero value means the state carries no phase
// information; precision_defined() is false then and precision() returns
// +infinity rather than performing the division blindly.
struct QfiResult {
    double value = 0.0;
    QfiMethod method = QfiMethod::Pure;

    bool precision_defined() const { return value > 0.0; }
    double precision() const {
        return precision_defined() ? 1.0 / std::sqrt(value)
                                   : std::numeric_limits<double>::infinity();
    }
};

// Lossless pure-state value 4 * Var(n_a) = 4 (sum k^2 x_k - (sum k x_k)^2).
QfiResult qfi_pure(const InputState& state);

// Convexity upper bound F̃_Q over the loss-branch mixture:
//   F̃_Q = 4 ( sum_k k^2 x_k - sum_lm (sum_k x_k k B^k_lm)^2 / (sum_k x_k B^k_lm) ).
// Coincides with qfi_pure at eta_a = eta_b = 1 and with the exact value for
// one-arm loss and for N00N states.
QfiResult qfi_bound(const InputState& state, const LossModel& loss);

// One-arm (eta_b = 1) specialization; exact there, not just a bound. Produces
// bit-identical values to qfi_bound(state, {eta_a, 1}).
QfiResult qfi_one_arm(const InputState& state, double eta_a);

// Exact mixed-state value: assembles rho(0) sector-by-sector (sectors indexed
// by surviving photon number), eigendecomposes each sector, and sums
// 2 |<e_i| rho' |e_j>|^2 / (p_i + p_j) with rho' formed analytically from the
// commutator with the arm-a number operator. Pairs with p_i + p_j below
// 1e-12 * tr(rho) are dropped.
QfiResult qfi_exact(const InputState& state, const LossModel& loss);

// Analytic gradient of the bound with respect to the weights,
//   dF̃/dx_k = 4 [ k^2 - sum_lm B^k_lm (2k S P - S^2) / P^2 ],
// with branches below P < 1e-15 skipped. Matches central finite differences
// of the raw bound at interior points of the simplex.
std::vector<double> qfi_bound_gradient(const InputState& state, const LossModel& loss);

} // namespace qphase
