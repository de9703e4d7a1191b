#pragma once

#include <optional>
#include <vector>

#include "qphase/errors.hpp"

namespace qphase {

// Transmissivities of the fictitious beam splitters modelling photon loss in
// the two interferometer arms. Arm a is the phase-accumulating arm.
struct LossModel {
    double eta_a = 1.0;
    double eta_b = 1.0;

    LossModel(double ea, double eb);

    bool lossless() const { return eta_a == 1.0 && eta_b == 1.0; }
    bool one_arm() const { return eta_b == 1.0; }
};

// Two-mode pure state with definite total photon number n:
//   sum_k sqrt(x_k) |k, n-k>,  k = photons in arm a.
// Only the weights x_k = |alpha_k|^2 matter for the quantities computed here;
// amplitude phases are irrelevant. Weights must be nonnegative and sum to 1;
// sums within 1e-12 of 1 are renormalized on construction, anything further
// off is rejected.
class InputState {
public:
    InputState(int n, std::vector<double> weights);

    int n() const { return n_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int k) const { return weights_[static_cast<size_t>(k)]; }

private:
    int n_;
    std::vector<double> weights_;
};

enum class StateKind {
    Noon,                  // (|n,0> + |0,n>)/sqrt(2)
    UnbalancedNoon,        // sqrt(p)|0,n> + sqrt(1-p)|n,0>
    TwoComponent,          // sqrt(p)|m,n-m> + sqrt(1-p)|n,0>
    SymmetricTwoComponent, // (|m,n-m> + |n-m,m>)/sqrt(2)
    TwinFock,              // |n/2, n/2>
    HollandBurnett,        // |n/2,n/2> behind a 50:50 splitter (arm-state weights)
    Uniform,               // x_k = 1/(n+1), optimizer seed
};

struct PresetParams {
    std::optional<int> m;
    std::optional<double> p;
};

InputState preset_state(StateKind kind, int n, const PresetParams& params = {});

// Parses the CLI spelling of a preset ("noon", "twin-fock", ...).
std::optional<StateKind> parse_state_kind(const std::string& name);
std::string state_kind_name(StateKind kind);

// Binomial coefficient by multiplicative recurrence in double precision.
double binomial(int n, int k);

// Probability that a component with k photons in arm a (n-k in arm b) loses
// exactly l photons from arm a and m from arm b:
//   B^k_{lm} = C(k,l) C(n-k,m) eta_a^{k-l} (1-eta_a)^l eta_b^{n-k-m} (1-eta_b)^m.
// The eta^(k-l) (1-eta)^l form extends continuously to eta in {0,1} with 0^0=1.
double branch_coefficient(int k, int l, int m, int n, const LossModel& loss);

// One conditional pure state of the post-loss mixture: (lost_a, lost_b)
// photons gone, `amplitudes[j]` is the coefficient of |j, n'-j> with
// n' = n - lost_a - lost_b surviving photons.
struct LossBranch {
    int lost_a = 0;
    int lost_b = 0;
    double probability = 0.0;
    std::vector<double> amplitudes;
};

struct BranchDecomposition {
    std::vector<LossBranch> branches;

    double total_probability() const;
};

// Decomposes the state after the loss channel into normalized pure branches,
// one per (l,m) with l+m <= n. Branches with probability below 1e-15 are
// omitted; they contribute nothing at double precision and would produce 0/0
// amplitudes. Branch order is l-major, m-minor.
BranchDecomposition decompose(const InputState& state, const LossModel& loss);

} // namespace qphase
