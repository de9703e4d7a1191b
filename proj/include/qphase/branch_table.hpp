#pragma once

#include <span>
#include <vector>

#include "qphase/states.hpp"

namespace qphase {

// Precomputed B^k_{lm} values for a fixed (n, loss), shared by the bound,
// gradient and exact-QFI evaluators so repeated evaluations at different
// weight vectors stay cheap. Branches are ordered l-major, m-minor, matching
// decompose(). Raw evaluators here do not validate the weight vector; they
// are the extension of the bound to arbitrary nonnegative coordinates that
// the finite-difference and optimizer code paths need.
class BranchTable {
public:
    struct Branch {
        int l = 0;
        int m = 0;
        int k_begin = 0;          // == l; weights index k runs k_begin..k_begin+size-1
        size_t offset = 0;        // into coefficients_
    };

    BranchTable(int n, const LossModel& loss);

    int n() const { return n_; }
    const LossModel& loss() const { return loss_; }
    size_t branch_count() const { return branches_.size(); }
    const Branch& branch(size_t b) const { return branches_[b]; }
    int branch_size(size_t b) const {
        return n_ - branches_[b].l - branches_[b].m + 1;
    }
    std::span<const double> coefficients(size_t b) const {
        return {coefficients_.data() + branches_[b].offset,
                static_cast<size_t>(branch_size(b))};
    }

    // P_lm = sum_k x_k B^k_{lm} and S_lm = sum_k x_k k B^k_{lm}, both with
    // compensated accumulation (the bound's outer terms nearly cancel at
    // large n, so P and S carry the precision budget).
    void branch_sums(size_t b, std::span<const double> x, double& p, double& s) const;

    // F̃_Q of Eq-(6) form: 4 (sum k^2 x_k - sum_lm S^2/P), zero-P terms skipped.
    double bound_value(std::span<const double> x) const;

    // Spec-form gradient d F̃/d x_k; branches with P < 1e-15 skipped. Valid in
    // the interior of the simplex.
    void bound_gradient(std::span<const double> x, std::span<double> grad) const;

    // One-sided ascent gradient 4 sum_{P_b>0} B_bk (k - S_b/P_b)^2. Equal to
    // bound_gradient at interior points (binomial completeness), but also the
    // correct one-sided derivative on the boundary where pruned branches
    // re-activate. The optimizer's stationarity test needs this form.
    void ascent_gradient(std::span<const double> x, std::span<double> grad) const;

    // Hessian restricted to `support` (column-major, size ns*ns). Inactive
    // branches have no support-coordinate coefficients, so no boundary
    // correction is needed here.
    void support_hessian(std::span<const double> x, std::span<const int> support,
                         std::span<double> hess) const;

private:
    int n_;
    LossModel loss_;
    std::vector<Branch> branches_;
    std::vector<double> coefficients_;
};

} // namespace qphase
