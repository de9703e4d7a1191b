#include "qphase/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qphase {

void project_simplex(std::span<double> v) {
    const size_t n = v.size();
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double tau = u[0] - 1.0;
    for (size_t i = 0; i < n; ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            tau = t;
        } else {
            break;
        }
    }
    for (double& vi : v) {
        vi = std::max(vi - tau, 0.0);
    }
}

double tangent_residual(std::span<const double> x, std::span<const double> g) {
    const size_t n = x.size();
    // KKT for min ||d - g||^2 over the cone: d_i = g_i - mu on free
    // coordinates, max(0, g_i - mu) on active ones, with sum d = 0. The
    // correct mu is found by including active coordinates in descending
    // g-order while the running mean stays below the next threshold.
    std::vector<double> active;
    double sum = 0.0;
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0) {
            active.push_back(g[i]);
        } else {
            sum += g[i];
            ++count;
        }
    }
    std::sort(active.begin(), active.end(), std::greater<double>());
    double mu = 0.0;
    bool found = false;
    for (size_t j = 0; j <= active.size(); ++j) {
        const double cur = count > 0 ? sum / static_cast<double>(count) : 0.0;
        const double hi = j > 0 ? active[j - 1] : std::numeric_limits<double>::infinity();
        const double lo = j < active.size() ? active[j] : -std::numeric_limits<double>::infinity();
        if (lo <= cur && cur <= hi) {
            mu = cur;
            found = true;
            break;
        }
        if (j < active.size()) {
            sum += active[j];
            ++count;
        }
    }
    if (!found) {
        mu = count > 0 ? sum / static_cast<double>(count) : 0.0;
    }
    double norm2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = x[i] > 0.0 ? g[i] - mu : std::max(g[i] - mu, 0.0);
        norm2 += d * d;
    }
    return std::sqrt(norm2);
}

} // namespace qphase
