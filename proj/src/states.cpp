#include "qphase/states.hpp"

#include <cmath>
#include <numeric>

namespace qphase {

namespace {

constexpr double kSimplexTolerance = 1e-12;
constexpr double kBranchPruneThreshold = 1e-15;

} // namespace

LossModel::LossModel(double ea, double eb) : eta_a(ea), eta_b(eb) {
    if (!(ea >= 0.0 && ea <= 1.0) || !(eb >= 0.0 && eb <= 1.0)) {
        throw ContractError("LossModel: transmissivities must lie in [0,1]");
    }
}

InputState::InputState(int n, std::vector<double> weights)
    : n_(n), weights_(std::move(weights)) {
    if (n_ < 0) {
        throw ContractError("InputState: photon number must be nonnegative");
    }
    if (weights_.size() != static_cast<size_t>(n_) + 1) {
        throw ContractError("InputState: expected n+1 weights");
    }
    double sum = 0.0;
    for (double& w : weights_) {
        if (w < 0.0) {
            if (w < -kSimplexTolerance) {
                throw ContractError("InputState: negative weight");
            }
            w = 0.0;
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw ContractError("InputState: weights must sum to 1");
    }
    if (sum != 1.0) {
        for (double& w : weights_) w /= sum;
    }
}

InputState preset_state(StateKind kind, int n, const PresetParams& params) {
    if (n < 1) throw ContractError("preset_state: n must be >= 1");
    std::vector<double> x(static_cast<size_t>(n) + 1, 0.0);
    switch (kind) {
    case StateKind::Noon:
        x[0] = 0.5;
        x[static_cast<size_t>(n)] = 0.5;
        break;
    case StateKind::UnbalancedNoon: {
        if (!params.p) throw ContractError("unbalanced-noon: parameter p required");
        double p = *params.p;
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("unbalanced-noon: p must lie in [0,1]");
        x[0] += p;
        x[static_cast<size_t>(n)] += 1.0 - p;
        break;
    }
    case StateKind::TwoComponent: {
        if (!params.m || !params.p) throw ContractError("two-component: parameters m and p required");
        int m = *params.m;
        double p = *params.p;
        if (m < 0 || m > n) throw ContractError("two-component: m must lie in [0,n]");
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("two-component: p must lie in [0,1]");
        x[static_cast<size_t>(m)] += p;
        x[static_cast<size_t>(n)] += 1.0 - p;
        break;
    }
    case StateKind::SymmetricTwoComponent: {
        if (!params.m) throw ContractError("symmetric two-component: parameter m required");
        int m = *params.m;
        if (m < 0 || m > n) throw ContractError("symmetric two-component: m must lie in [0,n]");
        x[static_cast<size_t>(m)] += 0.5;
        x[static_cast<size_t>(n - m)] += 0.5;
        break;
    }
    case StateKind::TwinFock:
        if (n % 2 != 0) throw ContractError("twin-fock: n must be even");
        x[static_cast<size_t>(n / 2)] = 1.0;
        break;
    case StateKind::HollandBurnett: {
        // |h,h> through a 50:50 splitter populates even arm-a counts only:
        // x_{2j} = C(2j,j) C(n-2j, h-j) / 2^n, h = n/2.
        if (n % 2 != 0) throw ContractError("holland-burnett: n must be even");
        int h = n / 2;
        double scale = std::ldexp(1.0, -n);
        for (int j = 0; j <= h; ++j) {
            x[static_cast<size_t>(2 * j)] =
                binomial(2 * j, j) * binomial(n - 2 * j, h - j) * scale;
        }
        break;
    }
    case StateKind::Uniform:
        for (double& w : x) w = 1.0 / (n + 1);
        break;
    }
    return InputState(n, std::move(x));
}

std::optional<StateKind> parse_state_kind(const std::string& name) {
    if (name == "noon") return StateKind::Noon;
    if (name == "unbalanced-noon") return StateKind::UnbalancedNoon;
    if (name == "two-component") return StateKind::TwoComponent;
    if (name == "symmetric") return StateKind::SymmetricTwoComponent;
    if (name == "twin-fock") return StateKind::TwinFock;
    if (name == "holland-burnett") return StateKind::HollandBurnett;
    if (name == "uniform") return StateKind::Uniform;
    return std::nullopt;
}

std::string state_kind_name(StateKind kind) {
    switch (kind) {
    case StateKind::Noon: return "noon";
    case StateKind::UnbalancedNoon: return "unbalanced-noon";
    case StateKind::TwoComponent: return "two-component";
    case StateKind::SymmetricTwoComponent: return "symmetric";
    case StateKind::TwinFock: return "twin-fock";
    case StateKind::HollandBurnett: return "holland-burnett";
    case StateKind::Uniform: return "uniform";
    }
    return "?";
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - k + i);
        c /= static_cast<double>(i);
    }
    return c;
}

double branch_coefficient(int k, int l, int m, int n, const LossModel& loss) {
    if (!(0 <= l && l <= k && k <= n && 0 <= m && m <= n - k)) {
        throw ContractError("branch_coefficient: need 0 <= l <= k <= n and 0 <= m <= n-k");
    }
    return binomial(k, l) * binomial(n - k, m) *
           std::pow(loss.eta_a, k - l) * std::pow(1.0 - loss.eta_a, l) *
           std::pow(loss.eta_b, n - k - m) * std::pow(1.0 - loss.eta_b, m);
}

double BranchDecomposition::total_probability() const {
    double s = 0.0;
    for (const auto& b : branches) s += b.probability;
    return s;
}

BranchDecomposition decompose(const InputState& state, const LossModel& loss) {
    const int n = state.n();
    const auto& x = state.weights();
    BranchDecomposition out;
    for (int l = 0; l <= n; ++l) {
        for (int m = 0; m <= n - l; ++m) {
            double p = 0.0;
            for (int k = l; k <= n - m; ++k) {
                p += x[static_cast<size_t>(k)] * branch_coefficient(k, l, m, n, loss);
            }
            if (p < kBranchPruneThreshold) continue;
            LossBranch branch;
            branch.lost_a = l;
            branch.lost_b = m;
            branch.probability = p;
            branch.amplitudes.resize(static_cast<size_t>(n - l - m) + 1, 0.0);
            for (int k = l; k <= n - m; ++k) {
                double w = x[static_cast<size_t>(k)] * branch_coefficient(k, l, m, n, loss);
                branch.amplitudes[static_cast<size_t>(k - l)] = std::sqrt(w / p);
            }
            out.branches.push_back(std::move(branch));
        }
    }
    return out;
}

} // namespace qphase
