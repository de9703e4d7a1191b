#include "qphase/qfi.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "qphase/branch_table.hpp"

namespace qphase {

namespace {

// Tiny negative bound values are cancellation residue of the two nearly-equal
// sums (e.g. single-Fock-component states, where the exact value is 0).
double clamp_residue(double value, int n) {
    if (value >= 0.0) return value;
    const double noise = 1e-8 * std::max(1.0, static_cast<double>(n) * n);
    if (value < -noise) {
        throw NumericError("QFI evaluation produced a negative value beyond rounding noise");
    }
    return 0.0;
}

} // namespace

std::string qfi_method_name(QfiMethod m) {
    switch (m) {
    case QfiMethod::Pure: return "pure";
    case QfiMethod::Bound: return "bound";
    case QfiMethod::OneArm: return "one-arm";
    case QfiMethod::Exact: return "exact";
    }
    return "?";
}

QfiResult qfi_pure(const InputState& state) {
    const auto& x = state.weights();
    double first = 0.0, second = 0.0;
    for (int k = 0; k <= state.n(); ++k) {
        first += k * x[static_cast<size_t>(k)];
        second += static_cast<double>(k) * k * x[static_cast<size_t>(k)];
    }
    return {clamp_residue(4.0 * (second - first * first), state.n()), QfiMethod::Pure};
}

QfiResult qfi_bound(const InputState& state, const LossModel& loss) {
    BranchTable table(state.n(), loss);
    return {clamp_residue(table.bound_value(state.weights()), state.n()), QfiMethod::Bound};
}

QfiResult qfi_one_arm(const InputState& state, double eta_a) {
    BranchTable table(state.n(), LossModel(eta_a, 1.0));
    return {clamp_residue(table.bound_value(state.weights()), state.n()), QfiMethod::OneArm};
}

QfiResult qfi_exact(const InputState& state, const LossModel& loss) {
    const int n = state.n();
    const auto& x = state.weights();
    BranchTable table(n, loss);

    // Branch vectors sorted into orthogonal sectors by surviving photon
    // number n' = n - l - m; branches with equal l+m overlap and share a
    // sector block.
    double fisher = 0.0;
    double trace = 0.0;
    std::vector<Eigen::MatrixXd> sectors(static_cast<size_t>(n) + 1);
    for (int s = 0; s <= n; ++s) {
        sectors[static_cast<size_t>(s)].setZero(n - s + 1, n - s + 1);
    }
    Eigen::VectorXd v;
    for (size_t b = 0; b < table.branch_count(); ++b) {
        const auto& br = table.branch(b);
        const int s = br.l + br.m;
        const int dim = n - s + 1;
        auto coeff = table.coefficients(b);
        v.setZero(dim);
        for (int i = 0; i < dim; ++i) {
            v[i] = std::sqrt(x[static_cast<size_t>(br.k_begin + i)] * coeff[static_cast<size_t>(i)]);
        }
        sectors[static_cast<size_t>(s)].selfadjointView<Eigen::Lower>().rankUpdate(v);
    }
    for (int s = 0; s <= n; ++s) {
        trace += sectors[static_cast<size_t>(s)].trace();
    }
    const double eigenvalue_floor = 1e-12 * trace;

    // Fixed sector order keeps the sum bit-identical however sectors are
    // scheduled.
    for (int s = 0; s <= n; ++s) {
        Eigen::MatrixXd& rho = sectors[static_cast<size_t>(s)];
        rho = rho.selfadjointView<Eigen::Lower>();
        const int dim = n - s + 1;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho);
        if (solver.info() != Eigen::Success) {
            throw NumericError("qfi_exact: eigensolver failed in sector " + std::to_string(s));
        }
        const Eigen::VectorXd& p = solver.eigenvalues();
        const Eigen::MatrixXd& vecs = solver.eigenvectors();
        // rho' = -i [n_a, rho]; element (k,k') of [n_a, rho] is (k-k') rho_kk',
        // so |<e_i|rho'|e_j>|^2 = (e_i^T A e_j)^2 with A real antisymmetric.
        Eigen::MatrixXd a(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                a(r, c) = static_cast<double>(r - c) * rho(r, c);
            }
        }
        Eigen::MatrixXd m = vecs.transpose() * a * vecs;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double denom = p[i] + p[j];
                if (denom <= eigenvalue_floor) continue;
                fisher += 2.0 * m(i, j) * m(i, j) / denom;
            }
        }
    }
    return {clamp_residue(fisher, n), QfiMethod::Exact};
}

std::vector<double> qfi_bound_gradient(const InputState& state, const LossModel& loss) {
    BranchTable table(state.n(), loss);
    std::vector<double> grad(static_cast<size_t>(state.n()) + 1);
    table.bound_gradient(state.weights(), grad);
    return grad;
}

} // namespace qphase
