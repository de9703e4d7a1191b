#include "qphase/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qphase {

std::optional<StrategyKind> parse_strategy_kind(const std::string& name) {
    if (name == "heisenberg") return StrategyKind::Heisenberg;
    if (name == "sil") return StrategyKind::Sil;
    if (name == "noon") return StrategyKind::Noon;
    if (name == "unbalanced-noon") return StrategyKind::UnbalancedNoon;
    if (name == "chopping") return StrategyKind::Chopping;
    if (name == "optimal") return StrategyKind::Optimal;
    if (name == "two-component") return StrategyKind::TwoComponent;
    if (name == "twin-fock") return StrategyKind::TwinFock;
    return std::nullopt;
}

std::string strategy_kind_name(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Heisenberg: return "heisenberg";
    case StrategyKind::Sil: return "sil";
    case StrategyKind::Noon: return "noon";
    case StrategyKind::UnbalancedNoon: return "unbalanced-noon";
    case StrategyKind::Chopping: return "chopping";
    case StrategyKind::Optimal: return "optimal";
    case StrategyKind::TwoComponent: return "two-component";
    case StrategyKind::TwinFock: return "twin-fock";
    }
    return "?";
}

StrategySpec::StrategySpec(StrategyKind k, LossMode mode) : kind(k), loss_mode(mode) {
    if (kind == StrategyKind::UnbalancedNoon && loss_mode != LossMode::OneArm) {
        throw ContractError("unbalanced-noon is defined for one-arm loss only");
    }
}

StrategyValue strategy_precision(StrategyKind kind, int n, double eta, LossMode mode,
                                 const CurveOptions& options) {
    StrategySpec spec(kind, mode);  // validates kind/mode combination
    const LossModel loss(eta, mode == LossMode::OneArm ? 1.0 : eta);
    OptimizeOptions opt;
    opt.tolerance = options.tolerance;
    opt.max_iter = options.max_iter;
    opt.refine_exact = options.refine_exact;

    switch (spec.kind) {
    case StrategyKind::Heisenberg:
        return {heisenberg_limit(n)};
    case StrategyKind::Sil:
        return {sil(n, eta, mode)};
    case StrategyKind::Noon:
        return {noon_precision(n, eta, mode, true)};
    case StrategyKind::UnbalancedNoon:
        return {noon_precision(n, eta, mode, false)};
    case StrategyKind::Chopping:
        return {chopping(n, eta, mode).precision};
    case StrategyKind::Optimal: {
        const auto report = optimize(n, loss, opt);
        const QfiResult& q = report.refined_exact ? *report.refined_exact : report.qfi;
        return {q.precision(), report.converged};
    }
    case StrategyKind::TwoComponent: {
        const auto form = mode == LossMode::OneArm ? TwoComponentForm::Anchored
                                                   : TwoComponentForm::Symmetric;
        const auto report = optimize_two_component(n, loss, form, opt);
        const QfiResult& q = report.refined_exact ? *report.refined_exact : report.qfi;
        return {q.precision(), report.converged};
    }
    case StrategyKind::TwinFock: {
        const auto state = preset_state(StateKind::HollandBurnett, n);
        const auto q = options.refine_exact && mode == LossMode::BothArms
                           ? qfi_exact(state, loss)
                           : qfi_bound(state, loss);
        return {q.precision()};
    }
    }
    throw ContractError("unknown strategy kind");
}

PrecisionCurve precision_curve(const std::vector<StrategyKind>& strategies, int n_from,
                               int n_to, double eta, LossMode mode,
                               const CurveOptions& options) {
    if (strategies.empty()) throw ContractError("precision_curve: no strategies given");
    if (n_from < 1 || n_to < n_from) throw ContractError("precision_curve: bad n range");
    if (n_to > 100) throw ContractError("precision_curve: n range is limited to [1,100]");
    if (options.refine_exact && n_to > 60) {
        throw ContractError("precision_curve: exact refinement is limited to n <= 60");
    }
    for (StrategyKind kind : strategies) {
        StrategySpec check(kind, mode);
    }

    PrecisionCurve curve;
    curve.loss_mode = mode;
    curve.eta = eta;
    curve.strategies = strategies;
    curve.rows.resize(static_cast<size_t>(n_to - n_from) + 1);

    std::atomic<int> next{0};
    const int row_count = n_to - n_from + 1;
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < row_count; i = next.fetch_add(1)) {
            const int n = n_from + i;
            PrecisionCurve::Row row;
            row.n = n;
            for (StrategyKind kind : strategies) {
                const auto value = strategy_precision(kind, n, eta, mode, options);
                row.precision.push_back(value.precision);
                row.converged.push_back(value.converged);
            }
            curve.rows[static_cast<size_t>(i)] = std::move(row);
        }
    };

    int jobs = options.jobs > 0 ? options.jobs
                                : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, row_count);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return curve;
}

ScalingCurve differential_scaling(const PrecisionCurve& curve, StrategyKind strategy,
                                  int window) {
    if (window < 1) throw ContractError("differential_scaling: window must be >= 1");
    const auto it = std::find(curve.strategies.begin(), curve.strategies.end(), strategy);
    if (it == curve.strategies.end()) {
        throw ContractError("differential_scaling: strategy not present in curve");
    }
    const size_t column = static_cast<size_t>(it - curve.strategies.begin());

    ScalingCurve out;
    out.eta = curve.eta;
    out.loss_mode = curve.loss_mode;
    const int rows = static_cast<int>(curve.rows.size());
    for (int i = 0; i < rows; ++i) {
        const int lo = i - window, hi = i + window;
        if (lo < 0 || hi >= rows) continue;
        // Windows must be contiguous in n for the fit to mean anything.
        if (curve.rows[static_cast<size_t>(hi)].n - curve.rows[static_cast<size_t>(lo)].n != 2 * window) continue;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const int count = 2 * window + 1;
        for (int j = lo; j <= hi; ++j) {
            const auto& row = curve.rows[static_cast<size_t>(j)];
            const double lx = std::log(static_cast<double>(row.n));
            const double ly = std::log(row.precision[column]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        out.rows.push_back({curve.rows[static_cast<size_t>(i)].n, -slope});
    }
    return out;
}

} // namespace qphase
