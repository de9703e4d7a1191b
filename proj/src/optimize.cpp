#include "qphase/optimize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "qphase/branch_table.hpp"
#include "qphase/simplex.hpp"

namespace qphase {

namespace {

constexpr double kIterateSnap = 1e-15;      // in-loop zero snap
constexpr double kReportSnap = 1e-12;       // snap applied to the reported optimum
constexpr double kArmijoSlope = 1e-4;
constexpr double kBacktrackFactor = 0.5;

void snap_small(std::vector<double>& x, double threshold) {
    for (double& v : x) {
        if (v < threshold) v = 0.0;
    }
}

std::vector<int> support_of(const std::vector<double>& x) {
    std::vector<int> sup;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) sup.push_back(static_cast<int>(i));
    }
    return sup;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Newton direction on the current face: maximize the local quadratic model
// subject to sum(d) = 0 on the support, d = 0 off it, with Levenberg
// regularization mu * diag-scale damping the near-singular Hessians these
// objectives produce. Returns false when the KKT solve is unusable.
bool newton_direction(const BranchTable& table, const std::vector<double>& x,
                      const std::vector<double>& grad, double mu,
                      std::vector<double>& direction) {
    const std::vector<int> sup = support_of(x);
    const size_t ns = sup.size();
    if (ns < 2) return false;
    std::vector<double> hess(ns * ns);
    table.support_hessian(x, sup, hess);
    double scale = 1.0;
    for (size_t i = 0; i < ns; ++i) {
        scale = std::max(scale, std::abs(hess[i * ns + i]));
    }
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ns) + 1,
                                                static_cast<Eigen::Index>(ns) + 1);
    for (size_t j = 0; j < ns; ++j) {
        for (size_t i = 0; i < ns; ++i) {
            kkt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hess[j * ns + i];
        }
        kkt(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) -= mu * scale;
        kkt(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(j)) = 1.0;
        kkt(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(ns)) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ns) + 1);
    for (size_t i = 0; i < ns; ++i) rhs[static_cast<Eigen::Index>(i)] = -grad[static_cast<size_t>(sup[i])];
    Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    if (!sol.allFinite()) return false;
    std::fill(direction.begin(), direction.end(), 0.0);
    for (size_t i = 0; i < ns; ++i) direction[static_cast<size_t>(sup[i])] = sol[static_cast<Eigen::Index>(i)];
    return true;
}

struct Evaluation {
    std::vector<double> x;
    double f = 0.0;
    std::vector<double> grad;
    double residual = 0.0;
};

void evaluate(const BranchTable& table, std::vector<double> x, Evaluation& ev) {
    ev.x = std::move(x);
    ev.f = table.bound_value(ev.x);
    ev.grad.resize(ev.x.size());
    table.ascent_gradient(ev.x, ev.grad);
    ev.residual = tangent_residual(ev.x, ev.grad);
}

} // namespace

OptimizationReport optimize(int n, const LossModel& loss, const OptimizeOptions& options) {
    if (n < 1) throw ContractError("optimize: n must be >= 1");
    if (!(options.tolerance > 0.0)) throw ContractError("optimize: tolerance must be positive");
    const size_t dim = static_cast<size_t>(n) + 1;
    BranchTable table(n, loss);

    std::vector<double> x0;
    if (options.start) {
        if (options.start->size() != dim) throw ContractError("optimize: start has wrong length");
        x0 = *options.start;
        project_simplex(x0);
        snap_small(x0, kIterateSnap);
    } else {
        x0.assign(dim, 1.0 / static_cast<double>(dim));
    }

    Evaluation cur;
    evaluate(table, std::move(x0), cur);

    int it = 0;
    bool converged = cur.residual < options.tolerance;
    std::vector<double> direction(dim), trial(dim);

    // Outer rounds alternate a monotone-ascent phase with a residual-polish
    // phase. The polish can park on a face whose off-face ascent directions
    // still carry gradient; the next ascent round escapes it, so rounds
    // repeat until neither phase moves the iterate.
    for (int round = 0; round < 60 && !converged && it < options.max_iter; ++round) {
        const std::vector<double> entry_point = cur.x;

        // --- ascent phase: LM-Newton candidates, BB projected-gradient fallback
        double bb_step = 1.0;
        double mu = 1e-10;
        while (it < options.max_iter && !converged) {
            ++it;
            bool moved = false;
            for (int attempt = 0; attempt < 12 && mu <= 1e16; ++attempt) {
                if (newton_direction(table, cur.x, cur.grad, mu, direction)) {
                    trial = cur.x;
                    for (size_t i = 0; i < dim; ++i) trial[i] += direction[i];
                    project_simplex(trial);
                    snap_small(trial, kIterateSnap);
                    const double f_trial = table.bound_value(trial);
                    std::vector<double> step(dim);
                    for (size_t i = 0; i < dim; ++i) step[i] = trial[i] - cur.x[i];
                    if (f_trial > cur.f + kArmijoSlope * std::max(dot(cur.grad, step), 0.0)) {
                        evaluate(table, std::move(trial), cur);
                        trial.resize(dim);
                        mu = std::max(mu * 0.2, 1e-12);
                        moved = true;
                        break;
                    }
                }
                mu *= 8.0;
            }
            if (moved) {
                converged = cur.residual < options.tolerance;
                continue;
            }
            // Projected gradient with Armijo backtracking from the BB step.
            double t = bb_step;
            bool accepted = false;
            while (t >= 1e-18) {
                trial = cur.x;
                for (size_t i = 0; i < dim; ++i) trial[i] += t * cur.grad[i];
                project_simplex(trial);
                snap_small(trial, kIterateSnap);
                if (trial != cur.x) {
                    const double f_trial = table.bound_value(trial);
                    std::vector<double> step(dim);
                    for (size_t i = 0; i < dim; ++i) step[i] = trial[i] - cur.x[i];
                    if (f_trial >= cur.f + kArmijoSlope * dot(cur.grad, step)) {
                        accepted = true;
                        break;
                    }
                }
                t *= kBacktrackFactor;
            }
            if (!accepted) break;  // no ascent representable at fp resolution
            Evaluation next;
            evaluate(table, std::move(trial), next);
            trial.resize(dim);
            // Barzilai-Borwein step for the next iteration.
            double ss = 0.0, sg = 0.0;
            for (size_t i = 0; i < dim; ++i) {
                const double si = next.x[i] - cur.x[i];
                ss += si * si;
                sg -= si * (next.grad[i] - cur.grad[i]);
            }
            bb_step = (sg > 1e-300 && std::isfinite(ss / sg)) ? ss / sg : t * 2.0;
            if (!(bb_step > 0.0) || !std::isfinite(bb_step)) bb_step = t * 2.0;
            cur = std::move(next);
            converged = cur.residual < options.tolerance;
        }
        if (converged || it >= options.max_iter) break;

        // --- polish phase: Newton steps accepted on residual decrease alone,
        // with the objective guarded against more-than-noise regressions.
        mu = 1e-12;
        while (it < options.max_iter && !converged) {
            ++it;
            bool improved = false;
            for (int attempt = 0; attempt < 16 && mu <= 1e16; ++attempt) {
                if (newton_direction(table, cur.x, cur.grad, mu, direction)) {
                    trial = cur.x;
                    for (size_t i = 0; i < dim; ++i) trial[i] += direction[i];
                    project_simplex(trial);
                    snap_small(trial, kIterateSnap);
                    Evaluation next;
                    evaluate(table, std::move(trial), next);
                    trial.resize(dim);
                    if (next.residual < 0.9 * cur.residual &&
                        next.f >= cur.f - 5e-14 * (1.0 + std::abs(cur.f))) {
                        cur = std::move(next);
                        mu = std::max(mu * 0.2, 1e-12);
                        improved = true;
                        break;
                    }
                }
                mu *= 8.0;
            }
            if (!improved) break;
            converged = cur.residual < options.tolerance;
        }
        if (cur.x == entry_point) break;  // full round without movement
    }

    // Snap sub-1e-12 weights to zero and renormalize, so reported optima are
    // sparse where the true optimum is sparse.
    std::vector<double> weights = cur.x;
    snap_small(weights, kReportSnap);
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (double& w : weights) w /= sum;

    OptimizationReport report{
        InputState(n, std::move(weights)),
        QfiResult{cur.f, loss.one_arm() ? QfiMethod::OneArm : QfiMethod::Bound},
        std::max(it, 1),
        converged,
        cur.residual,
        std::nullopt,
    };
    if (options.refine_exact && !loss.one_arm()) {
        report.refined_exact = qfi_exact(report.optimum, loss);
    }
    return report;
}

namespace {

// Golden-section maximization of a unimodal function on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (d - c > tol) {
        if (fc < fd) {
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

OptimizationReport optimize_two_component(int n, const LossModel& loss, TwoComponentForm form,
                                          const OptimizeOptions& options) {
    if (n < 1) throw ContractError("optimize_two_component: n must be >= 1");
    const size_t dim = static_cast<size_t>(n) + 1;
    BranchTable table(n, loss);
    int evals = 0;

    auto anchored_weights = [&](int m, double p) {
        std::vector<double> x(dim, 0.0);
        x[static_cast<size_t>(m)] += p;
        x[static_cast<size_t>(n)] += 1.0 - p;
        return x;
    };

    double best_f = -1.0;
    std::vector<double> best_x;
    if (form == TwoComponentForm::Anchored) {
        for (int m = 0; m <= n; ++m) {
            auto objective = [&](double p) {
                ++evals;
                return table.bound_value(anchored_weights(m, p));
            };
            double p = golden_max(objective, 0.0, 1.0, 1e-10);
            double fp = objective(p);
            // The maximum can sit on an endpoint of the p-interval.
            for (double edge : {0.0, 1.0}) {
                const double fe = objective(edge);
                if (fe > fp) {
                    p = edge;
                    fp = fe;
                }
            }
            if (fp > best_f) {
                best_f = fp;
                best_x = anchored_weights(m, p);
            }
        }
    } else {
        for (int m = 0; m <= n / 2; ++m) {
            std::vector<double> x(dim, 0.0);
            x[static_cast<size_t>(m)] += 0.5;
            x[static_cast<size_t>(n - m)] += 0.5;
            ++evals;
            const double fp = table.bound_value(x);
            if (fp > best_f) {
                best_f = fp;
                best_x = std::move(x);
            }
        }
    }

    OptimizationReport report{
        InputState(n, std::move(best_x)),
        QfiResult{std::max(best_f, 0.0), loss.one_arm() ? QfiMethod::OneArm : QfiMethod::Bound},
        evals,
        true,
        0.0,
        std::nullopt,
    };
    if (options.refine_exact && !loss.one_arm()) {
        report.refined_exact = qfi_exact(report.optimum, loss);
    }
    return report;
}

} // namespace qphase
