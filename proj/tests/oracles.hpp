#pragma once

// Test-only reference implementations. Each oracle reaches its value by a
// route independent of the library code it checks.

#include <cstdint>
#include <vector>

#include "qphase/branch_table.hpp"
#include "qphase/states.hpp"

namespace qphase::oracles {

// Exact integer binomial via Pascal's triangle; valid through n = 66.
std::uint64_t exact_binomial(int n, int k);

// Exact-rational branch coefficient for transmissivities given as fractions
// eta_a = pa/qa, eta_b = pb/qb, evaluated with arbitrary-precision rationals
// and converted to double at the very end.
double rational_branch_coefficient(int k, int l, int m, int n, long pa, long qa, long pb,
                                   long qb);

// Central finite differences of the raw bound at x (free coordinates, no
// renormalization).
std::vector<double> fd_gradient(const BranchTable& table, const std::vector<double>& x,
                                double step);

// Exact QFI assembled from decompose() output at phase phi, using complex
// sector matrices and a complex eigensolver. Independent of qfi_exact's
// internal real-sector assembly.
double exact_qfi_at_phase(const InputState& state, const LossModel& loss, double phi);

// The bound computed through the branch decomposition as
// 4 sum_lm p_lm Var_lm(surviving arm-a count) - the variance form.
double bound_via_decompose(const InputState& state, const LossModel& loss);

// Eq-(6)-shaped reference in long double, plain accumulation.
double bound_long_double(const InputState& state, const LossModel& loss);

// Exhaustive maximum of the bound over the weight grid {x_k = i_k/steps,
// sum i_k = steps}. Slices along the last coordinate are concave, so each is
// maximized by integer ternary search; every slice of every grid point is
// visited. jobs > 1 splits the outermost coordinate across threads (the
// maximum is an order-independent reduction).
double grid_search_max(int n, const LossModel& loss, int steps, int jobs = 1);

// Root of sqrt(x)(ln x - 1) = 1 by bisection: the one-arm chopping constant
// derived from stationarity of the per-budget n00n precision.
double solve_chopping_constant();

} // namespace qphase::oracles
