#include "qphase/strategies.hpp"

#include <cmath>

namespace qphase {

namespace {

void check_common(int n, double eta) {
    if (n < 1) throw ContractError("photon number must be >= 1");
    if (!(eta > 0.0 && eta <= 1.0)) throw ContractError("eta must lie in (0,1]");
}

} // namespace

std::string loss_mode_name(LossMode mode) {
    return mode == LossMode::BothArms ? "both" : "one";
}

std::string chopping_regime_name(ChoppingRegime regime) {
    switch (regime) {
    case ChoppingRegime::SinglePhoton: return "single-photon";
    case ChoppingRegime::Intermediate: return "intermediate";
    case ChoppingRegime::Unchopped: return "unchopped";
    }
    return "?";
}

double heisenberg_limit(int n) {
    if (n < 1) throw ContractError("heisenberg_limit: n must be >= 1");
    return 1.0 / n;
}

double sil(int n, double eta, LossMode mode) {
    check_common(n, eta);
    const double base = 1.0 / std::sqrt(n * eta);
    if (mode == LossMode::BothArms) return base;
    return 0.5 * (1.0 + std::sqrt(eta)) * base;
}

namespace detail {

double noon_precision_real(double n, double eta, LossMode mode, bool balanced) {
    if (mode == LossMode::BothArms) {
        if (!balanced) {
            throw ContractError("noon_precision: unbalanced form is one-arm only");
        }
        return 1.0 / (n * std::pow(eta, n / 2.0));
    }
    if (balanced) {
        return std::sqrt(1.0 + std::pow(eta, -n)) / (std::sqrt(2.0) * n);
    }
    return (1.0 + std::pow(eta, -n / 2.0)) / (2.0 * n);
}

} // namespace detail

double noon_precision(int n, double eta, LossMode mode, bool balanced) {
    check_common(n, eta);
    return detail::noon_precision_real(n, eta, mode, balanced);
}

ChoppingResult chopping(int n_total, double eta, LossMode mode) {
    check_common(n_total, eta);
    const double N = n_total;
    const bool both = mode == LossMode::BothArms;
    const double eta0 = both ? std::exp(1.0) : kChoppingEta0OneArm;
    const double eta_tilde0 = both ? 1.0 : eta0;

    ChoppingResult out;
    out.eta0 = eta0;
    if (eta <= 1.0 / eta0) {
        // One photon per run: reduces to the SIL of the matching mode.
        const double eta_tilde = both ? 1.0 : eta;
        out.precision = (1.0 + std::sqrt(eta_tilde)) / (2.0 * std::sqrt(N * eta));
        out.regime = ChoppingRegime::SinglePhoton;
        out.n_per_run = 1.0;
    } else if (eta <= std::pow(eta0, -1.0 / N)) {
        out.precision = (1.0 + std::sqrt(eta_tilde0)) / (2.0 * std::sqrt(N * eta_tilde0)) *
                        std::sqrt(eta0 * std::abs(std::log(eta)) / std::log(eta0));
        out.regime = ChoppingRegime::Intermediate;
        out.n_per_run = std::log(eta0) / std::abs(std::log(eta));
    } else {
        const double eta_tilde = both ? 1.0 : eta;
        out.precision = (1.0 + std::pow(eta_tilde, N / 2.0)) / (2.0 * N * std::pow(eta, N / 2.0));
        out.regime = ChoppingRegime::Unchopped;
        out.n_per_run = N;
    }
    return out;
}

namespace {

// Golden-section minimization on [a, b].
template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (d - c > tol) {
        if (fc > fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
    }
    return 0.5 * (c + d);
}

} // namespace

ChoppingResult chopping_numeric(int n_total, double eta, LossMode mode) {
    check_common(n_total, eta);
    const double N = n_total;
    const bool both = mode == LossMode::BothArms;
    // Per-budget precision of n-photon runs: nu N/n runs absorb sqrt(n/N).
    auto budget_precision = [&](double n) {
        return detail::noon_precision_real(n, eta, mode, both) * std::sqrt(n / N);
    };
    double n_star = N;
    if (eta < 1.0) {
        n_star = golden_min(budget_precision, 1.0, N, 1e-10 * std::max(1.0, N - 1.0));
        for (double edge : {1.0, N}) {
            if (budget_precision(edge) < budget_precision(n_star)) n_star = edge;
        }
    }
    ChoppingResult out;
    out.n_per_run = n_star;
    out.precision = budget_precision(n_star);
    const double boundary_tol = 1e-6 * N;
    if (n_star <= 1.0 + boundary_tol && eta < 1.0) {
        out.regime = ChoppingRegime::SinglePhoton;
    } else if (n_star >= N - boundary_tol) {
        out.regime = ChoppingRegime::Unchopped;
    } else {
        out.regime = ChoppingRegime::Intermediate;
    }
    // The implied regime constant: at an interior optimum n* = ln(eta0)/|ln eta|.
    out.eta0 = out.regime == ChoppingRegime::Intermediate
                   ? std::exp(n_star * std::abs(std::log(eta)))
                   : (both ? std::exp(1.0) : kChoppingEta0OneArm);
    return out;
}

} // namespace qphase
