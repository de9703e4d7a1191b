#pragma once

#include <string>

#include "qphase/errors.hpp"

namespace qphase {

enum class LossMode { BothArms, OneArm };

std::string loss_mode_name(LossMode mode);

// Universal constant of the one-arm chopping optimum: the root of
// sqrt(x) (ln x - 1) = 1, i.e. the stationarity condition of the per-budget
// precision of unbalanced n00n states. Stored to full double precision; the
// test suite re-derives it from the stationarity condition.
inline constexpr double kChoppingEta0OneArm = 4.382722305540078;

// Heisenberg limit 1/N.
double heisenberg_limit(int n);

// Standard interferometric limit: 1/sqrt(N eta) for losses in both arms,
// (1+sqrt(eta))/(2 sqrt(N eta)) for losses in one arm. eta = 0 is rejected
// (no photons survive).
double sil(int n, double eta, LossMode mode);

// N00N-state precision: 1/(N eta^{N/2}) for losses in both arms;
// sqrt(1+eta^{-N})/(sqrt(2) N) one-arm balanced; (1+eta^{-N/2})/(2N) for the
// optimally unbalanced one-arm variant. balanced=false is only meaningful
// with one-arm loss.
double noon_precision(int n, double eta, LossMode mode, bool balanced = true);

enum class ChoppingRegime { SinglePhoton, Intermediate, Unchopped };

std::string chopping_regime_name(ChoppingRegime regime);

struct ChoppingResult {
    double precision = 0.0;   // per total photon budget, run count absorbed
    ChoppingRegime regime = ChoppingRegime::Unchopped;
    double n_per_run = 0.0;   // continuous optimal sub-state size
    double eta0 = 0.0;        // regime constant used (e or the one-arm root)
};

// Closed-form optimum of splitting the N-photon budget into N/n runs of
// n00n states (n treated as continuous). Piecewise in eta with boundaries
// eta0^-1 and eta0^(-1/N); boundary points fall to the lower-eta regime.
ChoppingResult chopping(int n_total, double eta, LossMode mode);

// Independent numeric route: minimizes the per-budget precision
// noon_precision(n)*sqrt(n/N) over continuous n in [1, N] by golden-section
// search. Agrees with chopping() to better than 1e-6 relative everywhere.
ChoppingResult chopping_numeric(int n_total, double eta, LossMode mode);

namespace detail {
// Continuous-n extension of noon_precision used by the chopping analysis.
double noon_precision_real(double n, double eta, LossMode mode, bool balanced);
}

} // namespace qphase
