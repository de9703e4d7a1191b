#include "qphase/branch_table.hpp"

#include <cmath>

namespace qphase {

namespace {
constexpr double kGradientPruneThreshold = 1e-15;
}

BranchTable::BranchTable(int n, const LossModel& loss) : n_(n), loss_(loss) {
    branches_.reserve(static_cast<size_t>(n + 1) * (n + 2) / 2);
    for (int l = 0; l <= n; ++l) {
        for (int m = 0; m <= n - l; ++m) {
            Branch br;
            br.l = l;
            br.m = m;
            br.k_begin = l;
            br.offset = coefficients_.size();
            for (int k = l; k <= n - m; ++k) {
                coefficients_.push_back(branch_coefficient(k, l, m, n, loss));
            }
            branches_.push_back(br);
        }
    }
}

void BranchTable::branch_sums(size_t b, std::span<const double> x,
                              double& p_out, double& s_out) const {
    const Branch& br = branches_[b];
    const double* coeff = coefficients_.data() + br.offset;
    const int size = branch_size(b);
    double p = 0.0, pc = 0.0;   // Kahan accumulators
    double s = 0.0, sc = 0.0;
    for (int i = 0; i < size; ++i) {
        const int k = br.k_begin + i;
        const double xb = x[static_cast<size_t>(k)] * coeff[i];
        double y = xb - pc;
        double t = p + y;
        pc = (t - p) - y;
        p = t;
        const double kxb = static_cast<double>(k) * xb;
        y = kxb - sc;
        t = s + y;
        sc = (t - s) - y;
        s = t;
    }
    p_out = p;
    s_out = s;
}

double BranchTable::bound_value(std::span<const double> x) const {
    double second_moment = 0.0;
    for (int k = 0; k <= n_; ++k) {
        second_moment += static_cast<double>(k) * k * x[static_cast<size_t>(k)];
    }
    double branch_term = 0.0;
    for (size_t b = 0; b < branches_.size(); ++b) {
        double p, s;
        branch_sums(b, x, p, s);
        if (p <= 0.0) continue;
        branch_term += s * s / p;
    }
    return 4.0 * (second_moment - branch_term);
}

void BranchTable::bound_gradient(std::span<const double> x, std::span<double> grad) const {
    for (int k = 0; k <= n_; ++k) {
        grad[static_cast<size_t>(k)] = 4.0 * static_cast<double>(k) * k;
    }
    for (size_t b = 0; b < branches_.size(); ++b) {
        double p, s;
        branch_sums(b, x, p, s);
        if (p < kGradientPruneThreshold) continue;
        const Branch& br = branches_[b];
        const double* coeff = coefficients_.data() + br.offset;
        const int size = branch_size(b);
        const double r = s / p;
        for (int i = 0; i < size; ++i) {
            const int k = br.k_begin + i;
            grad[static_cast<size_t>(k)] -= 4.0 * coeff[i] * (2.0 * k * r - r * r);
        }
    }
}

void BranchTable::ascent_gradient(std::span<const double> x, std::span<double> grad) const {
    for (int k = 0; k <= n_; ++k) grad[static_cast<size_t>(k)] = 0.0;
    for (size_t b = 0; b < branches_.size(); ++b) {
        double p, s;
        branch_sums(b, x, p, s);
        if (p <= 0.0) continue;
        const Branch& br = branches_[b];
        const double* coeff = coefficients_.data() + br.offset;
        const int size = branch_size(b);
        const double r = s / p;
        for (int i = 0; i < size; ++i) {
            const int k = br.k_begin + i;
            const double d = static_cast<double>(k) - r;
            grad[static_cast<size_t>(k)] += 4.0 * coeff[i] * d * d;
        }
    }
}

void BranchTable::support_hessian(std::span<const double> x, std::span<const int> support,
                                  std::span<double> hess) const {
    const size_t ns = support.size();
    for (double& h : hess) h = 0.0;
    std::vector<double> u(ns);
    for (size_t b = 0; b < branches_.size(); ++b) {
        double p, s;
        branch_sums(b, x, p, s);
        if (p <= 0.0) continue;
        const Branch& br = branches_[b];
        const double* coeff = coefficients_.data() + br.offset;
        const int k_end = n_ - br.m;
        const double r = s / p;
        bool any = false;
        for (size_t i = 0; i < ns; ++i) {
            const int k = support[i];
            if (k >= br.k_begin && k <= k_end) {
                u[i] = coeff[k - br.k_begin] * (static_cast<double>(k) - r);
                any = any || u[i] != 0.0;
            } else {
                u[i] = 0.0;
            }
        }
        if (!any) continue;
        const double w = 8.0 / p;
        for (size_t j = 0; j < ns; ++j) {
            if (u[j] == 0.0) continue;
            const double wuj = w * u[j];
            for (size_t i = 0; i < ns; ++i) {
                hess[j * ns + i] -= wuj * u[i];
            }
        }
    }
}

} // namespace qphase
