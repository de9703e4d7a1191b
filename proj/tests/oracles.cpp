#include "oracles.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qphase::oracles {

std::uint64_t exact_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 66) throw std::invalid_argument("exact_binomial: u64 range ends at n = 66");
    std::vector<std::uint64_t> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j >= 1; --j) row[static_cast<size_t>(j)] += row[static_cast<size_t>(j) - 1];
    }
    return row[static_cast<size_t>(k)];
}

double rational_branch_coefficient(int k, int l, int m, int n, long pa, long qa, long pb,
                                   long qb) {
    using boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;
    auto rational_pow = [](Rational base, int e) {
        Rational r = 1;
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    };
    const Rational ea(pa, qa), eb(pb, qb);
    Rational value = cpp_int(exact_binomial(k, l)) * cpp_int(exact_binomial(n - k, m));
    value *= rational_pow(ea, k - l);
    value *= rational_pow(Rational(1) - ea, l);
    value *= rational_pow(eb, n - k - m);
    value *= rational_pow(Rational(1) - eb, m);
    return value.convert_to<double>();
}

std::vector<double> fd_gradient(const BranchTable& table, const std::vector<double>& x,
                                double step) {
    std::vector<double> grad(x.size());
    std::vector<double> probe = x;
    for (size_t k = 0; k < x.size(); ++k) {
        probe[k] = x[k] + step;
        const double up = table.bound_value(probe);
        probe[k] = x[k] - step;
        const double down = table.bound_value(probe);
        probe[k] = x[k];
        grad[k] = (up - down) / (2.0 * step);
    }
    return grad;
}

double exact_qfi_at_phase(const InputState& state, const LossModel& loss, double phi) {
    using Complex = std::complex<double>;
    const int n = state.n();
    const BranchDecomposition decomposition = decompose(state, loss);

    double trace = 0.0;
    for (const auto& branch : decomposition.branches) trace += branch.probability;
    const double floor = 1e-12 * trace;

    double fisher = 0.0;
    for (int s = 0; s <= n; ++s) {
        const int dim = n - s + 1;
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        bool populated = false;
        for (const auto& branch : decomposition.branches) {
            if (branch.lost_a + branch.lost_b != s) continue;
            populated = true;
            Eigen::VectorXcd v(dim);
            for (int j = 0; j < dim; ++j) {
                v[j] = branch.amplitudes[static_cast<size_t>(j)] *
                       std::exp(Complex(0.0, -phi * j));
            }
            rho += branch.probability * (v * v.adjoint());
        }
        if (!populated) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
        const Eigen::VectorXd& p = solver.eigenvalues();
        const Eigen::MatrixXcd& vecs = solver.eigenvectors();
        Eigen::MatrixXcd deriv(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                deriv(r, c) = Complex(0.0, -(r - c)) * rho(r, c);
            }
        }
        const Eigen::MatrixXcd m = vecs.adjoint() * deriv * vecs;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double denom = p[i] + p[j];
                if (denom <= floor) continue;
                fisher += 2.0 * std::norm(m(i, j)) / denom;
            }
        }
    }
    return fisher;
}

double bound_via_decompose(const InputState& state, const LossModel& loss) {
    const BranchDecomposition decomposition = decompose(state, loss);
    double total = 0.0;
    for (const auto& branch : decomposition.branches) {
        double mean = 0.0, second = 0.0;
        for (size_t j = 0; j < branch.amplitudes.size(); ++j) {
            const double w = branch.amplitudes[j] * branch.amplitudes[j];
            mean += static_cast<double>(j) * w;
            second += static_cast<double>(j) * j * w;
        }
        total += 4.0 * branch.probability * (second - mean * mean);
    }
    return total;
}

double bound_long_double(const InputState& state, const LossModel& loss) {
    const int n = state.n();
    const auto& x = state.weights();
    const long double ea = loss.eta_a, eb = loss.eta_b;
    auto binom = [](int a, int b) {
        long double c = 1.0L;
        if (b > a - b) b = a - b;
        for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
        return c;
    };
    long double second = 0.0L;
    for (int k = 0; k <= n; ++k) second += static_cast<long double>(k) * k * x[static_cast<size_t>(k)];
    long double branch_term = 0.0L;
    for (int l = 0; l <= n; ++l) {
        for (int m = 0; m <= n - l; ++m) {
            long double p = 0.0L, s = 0.0L;
            for (int k = l; k <= n - m; ++k) {
                const long double b = binom(k, l) * binom(n - k, m) *
                                      std::pow(ea, static_cast<long double>(k - l)) *
                                      std::pow(1.0L - ea, static_cast<long double>(l)) *
                                      std::pow(eb, static_cast<long double>(n - k - m)) *
                                      std::pow(1.0L - eb, static_cast<long double>(m));
                p += x[static_cast<size_t>(k)] * b;
                s += x[static_cast<size_t>(k)] * k * b;
            }
            if (p > 0.0L) branch_term += s * s / p;
        }
    }
    return static_cast<double>(4.0L * (second - branch_term));
}

namespace {

// Shared per-(n, loss) data for the grid scan: which branches the slice
// coordinates k=0 and k=n touch, and their coefficients there.
struct GridContext {
    const BranchTable& table;
    double h;
    int n;
    std::vector<double> b0, bn;     // B^0_lm and B^n_lm per branch (0 outside support)
    std::vector<size_t> sliced;     // branches containing k=0 or k=n
    std::vector<size_t> constant;   // the rest; their term is fixed per slice

    GridContext(const BranchTable& t, double step) : table(t), h(step), n(t.n()) {
        const size_t nb = table.branch_count();
        b0.assign(nb, 0.0);
        bn.assign(nb, 0.0);
        for (size_t b = 0; b < nb; ++b) {
            const auto& br = table.branch(b);
            const auto coeff = table.coefficients(b);
            if (br.k_begin == 0) b0[b] = coeff[0];
            if (n - br.m == n) bn[b] = coeff[coeff.size() - 1];
            if (b0[b] != 0.0 || bn[b] != 0.0) {
                sliced.push_back(b);
            } else {
                constant.push_back(b);
            }
        }
    }
};

// Per-worker walker holding one preallocated frame per fixed coordinate, so
// descending and backtracking never allocates.
struct GridWalker {
    const GridContext& ctx;
    struct Frame {
        std::vector<double> p, s;
        double second = 0.0;
    };
    std::vector<Frame> frames;      // frames[d]: sums after fixing d coordinates

    explicit GridWalker(const GridContext& context) : ctx(context) {
        const size_t nb = ctx.table.branch_count();
        frames.resize(static_cast<size_t>(ctx.n));
        for (auto& f : frames) {
            f.p.assign(nb, 0.0);
            f.s.assign(nb, 0.0);
        }
    }

    // frames[depth] := frames[depth-1] plus weight on coordinate k.
    void fix(int depth, int k, double weight) {
        Frame& dst = frames[static_cast<size_t>(depth)];
        const Frame& src = frames[static_cast<size_t>(depth - 1)];
        dst.p = src.p;
        dst.s = src.s;
        dst.second = src.second + static_cast<double>(k) * k * weight;
        for (size_t b = 0; b < ctx.table.branch_count(); ++b) {
            const auto& br = ctx.table.branch(b);
            if (k < br.k_begin || k > ctx.n - br.m) continue;
            const double coeff = ctx.table.coefficients(b)[static_cast<size_t>(k - br.k_begin)];
            dst.p[b] += weight * coeff;
            dst.s[b] += weight * k * coeff;
        }
    }

    // Bound at x_n = i*h, x_0 = (rest-i)*h on top of frame `depth`.
    double value(const Frame& f, double constant_term, int i, int rest) const {
        const double xn = i * ctx.h;
        const double x0 = (rest - i) * ctx.h;
        double branch_term = constant_term;
        for (const size_t b : ctx.sliced) {
            const double p = f.p[b] + x0 * ctx.b0[b] + xn * ctx.bn[b];
            if (p <= 0.0) continue;
            const double s = f.s[b] + xn * static_cast<double>(ctx.n) * ctx.bn[b];
            branch_term += s * s / p;
        }
        return 4.0 * (f.second + xn * static_cast<double>(ctx.n) * ctx.n - branch_term);
    }

    // Exact maximum over i = 0..rest: the slice is an affine restriction of a
    // concave function, so the integer sequence is unimodal and ternary
    // search visits the true maximum.
    double slice_max(int depth, int rest) const {
        const Frame& f = frames[static_cast<size_t>(depth)];
        double constant_term = 0.0;
        for (const size_t b : ctx.constant) {
            if (f.p[b] > 0.0) constant_term += f.s[b] * f.s[b] / f.p[b];
        }
        int lo = 0, hi = rest;
        while (hi - lo > 2) {
            const int m1 = lo + (hi - lo) / 3;
            const int m2 = hi - (hi - lo) / 3;
            const double f1 = value(f, constant_term, m1, rest);
            const double f2 = value(f, constant_term, m2, rest);
            if (f1 < f2) {
                lo = m1 + 1;
            } else if (f1 > f2) {
                hi = m2 - 1;
            } else {
                lo = m1 + 1;
                hi = m2 - 1;
            }
        }
        double best = value(f, constant_term, lo, rest);
        for (int i = lo + 1; i <= hi; ++i) {
            best = std::max(best, value(f, constant_term, i, rest));
        }
        return best;
    }

    // Enumerate coordinates coord..n-1, then maximize the final slice.
    double walk(int depth, int coord, int rest) {
        if (coord == ctx.n) return slice_max(depth, rest);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= rest; ++i) {
            fix(depth + 1, coord, i * ctx.h);
            best = std::max(best, walk(depth + 1, coord + 1, rest - i));
        }
        return best;
    }
};

} // namespace

double grid_search_max(int n, const LossModel& loss, int steps, int jobs) {
    const BranchTable table(n, loss);
    const GridContext ctx(table, 1.0 / steps);
    if (n == 1) {
        GridWalker walker(ctx);
        return walker.slice_max(0, steps);
    }
    jobs = std::max(1, jobs);
    // Split the outermost fixed coordinate (x_1) across workers; max is an
    // order-independent reduction, so the result does not depend on jobs.
    std::vector<double> best_per_value(static_cast<size_t>(steps) + 1,
                                       -std::numeric_limits<double>::infinity());
    std::atomic<int> next{0};
    auto worker = [&]() {
        GridWalker walker(ctx);
        for (int i1 = next.fetch_add(1); i1 <= steps; i1 = next.fetch_add(1)) {
            walker.fix(1, 1, i1 * ctx.h);
            best_per_value[static_cast<size_t>(i1)] = walker.walk(1, 2, steps - i1);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const double v : best_per_value) best = std::max(best, v);
    return best;
}

double solve_chopping_constant() {
    auto f = [](double x) { return std::sqrt(x) * (std::log(x) - 1.0) - 1.0; };
    double lo = 2.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qphase::oracles
