#include "qphase/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qphase/optimize.hpp"
#include "qphase/qfi.hpp"
#include "qphase/scaling.hpp"
#include "qphase/states.hpp"
#include "qphase/strategies.hpp"

namespace qphase::cli {

namespace {

using nlohmann::json;

std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

LossMode parse_loss_mode(const std::string& name) {
    if (name == "both") return LossMode::BothArms;
    if (name == "one") return LossMode::OneArm;
    throw ContractError("--loss must be 'both' or 'one'");
}

// --loss both|one sets eta_b from eta_a; explicit --eta-a/--eta-b override.
struct EtaSpec {
    double eta = -1.0;
    std::string loss = "both";
    double eta_a = -1.0;
    double eta_b = -1.0;

    LossModel resolve() const {
        double ea = eta_a, eb = eta_b;
        if (ea < 0.0 && eta >= 0.0) ea = eta;
        if (eb < 0.0 && eta >= 0.0) {
            eb = parse_loss_mode(loss) == LossMode::OneArm ? 1.0 : eta;
        }
        if (ea < 0.0 || eb < 0.0) {
            throw ContractError("transmissivity missing: give --eta (with --loss) or --eta-a/--eta-b");
        }
        return LossModel(ea, eb);
    }
};

InputState resolve_state(const std::string& name, std::optional<int> m, std::optional<double> p,
                         const std::string& weight_csv, int n) {
    if (name == "custom") {
        if (weight_csv.empty()) throw ContractError("--state custom requires --weights");
        std::vector<double> w;
        for (const auto& tok : split_list(weight_csv)) w.push_back(std::stod(tok));
        return InputState(n, std::move(w));
    }
    const auto kind = parse_state_kind(name);
    if (!kind) throw ContractError("unknown state kind: " + name);
    PresetParams params;
    params.m = m;
    params.p = p;
    return preset_state(*kind, n, params);
}

void emit(const std::string& payload, const std::string& output_path, std::ostream& out) {
    if (output_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream file(output_path, std::ios::binary);
    if (!file) throw ContractError("cannot open output file: " + output_path);
    file << payload;
}

json sparse_weights(const InputState& state) {
    json obj = json::object();
    for (int k = 0; k <= state.n(); ++k) {
        if (state.weight(k) > 1e-9) obj[std::to_string(k)] = state.weight(k);
    }
    return obj;
}

// ---------------------------------------------------------------- commands

struct ComputeArgs {
    int n = 0;
    EtaSpec etas;
    std::string state = "noon";
    std::optional<int> m;
    std::optional<double> p;
    std::string weights;
    bool exact = true;
    std::string output;
};

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
    const LossModel loss = a.etas.resolve();
    const InputState state = resolve_state(a.state, a.m, a.p, a.weights, a.n);
    const QfiResult bound = qfi_bound(state, loss);

    json doc;
    doc["n"] = a.n;
    doc["eta_a"] = loss.eta_a;
    doc["eta_b"] = loss.eta_b;
    doc["state"] = a.state;
    doc["fq_bound"] = bound.value;
    doc["precision_bound"] = bound.precision_defined() ? json(bound.precision()) : json(nullptr);
    doc["precision_infinite"] = !bound.precision_defined();
    if (a.exact) {
        const QfiResult exact = qfi_exact(state, loss);
        doc["fq_exact"] = exact.value;
        doc["precision_exact"] =
            exact.precision_defined() ? json(exact.precision()) : json(nullptr);
        doc["gap_percent"] =
            bound.value > 0.0 ? 100.0 * (bound.value - exact.value) / bound.value : 0.0;
    }
    emit(doc.dump(2) + "\n", a.output, out);
    return kExitOk;
}

struct OptimizeArgs {
    int n = 0;
    EtaSpec etas;
    double tolerance = 1e-9;
    int max_iter = 10000;
    bool exact = true;
    std::string output;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
    const LossModel loss = a.etas.resolve();
    OptimizeOptions opt;
    opt.tolerance = a.tolerance;
    opt.max_iter = a.max_iter;
    opt.refine_exact = a.exact;
    const OptimizationReport report = optimize(a.n, loss, opt);

    json doc;
    doc["n"] = a.n;
    doc["eta_a"] = loss.eta_a;
    doc["eta_b"] = loss.eta_b;
    doc["fq"] = report.qfi.value;
    doc["method"] = qfi_method_name(report.qfi.method);
    doc["precision"] =
        report.qfi.precision_defined() ? json(report.qfi.precision()) : json(nullptr);
    doc["weights"] = sparse_weights(report.optimum);
    doc["converged"] = report.converged;
    doc["iterations"] = report.iterations;
    doc["residual"] = report.residual;
    if (report.refined_exact) {
        doc["fq_exact"] = report.refined_exact->value;
        doc["precision_exact"] = report.refined_exact->precision();
        doc["gap_percent"] =
            100.0 * (report.qfi.value - report.refined_exact->value) / report.qfi.value;
    }
    if (!report.converged) {
        err << "warning: optimizer did not reach tolerance " << a.tolerance << " (residual "
            << report.residual << ")\n";
    }
    emit(doc.dump(2) + "\n", a.output, out);
    return kExitOk;
}

struct SweepArgs {
    std::string axis = "n";
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    int n = 0;
    EtaSpec etas;
    std::string strategies;
    int exact = -1;  // -1 auto, 0 off, 1 on
    int jobs = 0;
    double tolerance = 1e-9;
    int max_iter = 10000;
    std::string output;
};

std::vector<StrategyKind> parse_strategies(const std::string& csv, LossMode mode) {
    std::vector<StrategyKind> kinds;
    for (const auto& name : split_list(csv)) {
        const auto kind = parse_strategy_kind(name);
        if (!kind) throw ContractError("unknown strategy: " + name);
        StrategySpec spec(*kind, mode);  // validates the combination
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw ContractError("--strategies must name at least one strategy");
    return kinds;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const LossMode mode = parse_loss_mode(a.etas.loss);
    const auto kinds = parse_strategies(a.strategies, mode);

    CurveOptions options;
    options.jobs = a.jobs;
    options.tolerance = a.tolerance;
    options.max_iter = a.max_iter;

    std::string csv;
    csv += a.axis;
    for (const auto kind : kinds) csv += "," + strategy_kind_name(kind);
    csv += "\n";

    std::vector<std::pair<std::string, std::string>> warnings;
    if (a.axis == "n") {
        if (a.etas.eta < 0.0) throw ContractError("sweep over n requires --eta");
        const int n_from = static_cast<int>(a.from);
        const int n_to = static_cast<int>(a.to);
        options.refine_exact = a.exact == -1
                                   ? (mode == LossMode::BothArms && n_to <= 60)
                                   : a.exact == 1;
        const PrecisionCurve curve =
            precision_curve(kinds, n_from, n_to, a.etas.eta, mode, options);
        for (const auto& row : curve.rows) {
            csv += std::to_string(row.n);
            for (size_t c = 0; c < row.precision.size(); ++c) {
                csv += "," + format_sig12(row.precision[c]);
                if (!row.converged[c]) {
                    warnings.emplace_back(std::to_string(row.n),
                                          strategy_kind_name(kinds[c]));
                }
            }
            csv += "\n";
        }
    } else if (a.axis == "eta") {
        if (a.n < 1) throw ContractError("sweep over eta requires --n");
        if (a.steps < 2) throw ContractError("sweep over eta requires --steps >= 2");
        options.refine_exact = a.exact == -1 ? (mode == LossMode::BothArms && a.n <= 60)
                                             : a.exact == 1;
        for (int i = 0; i < a.steps; ++i) {
            const double eta =
                a.from + (a.to - a.from) * static_cast<double>(i) / (a.steps - 1);
            csv += format_sig12(eta);
            for (const auto kind : kinds) {
                const auto value = strategy_precision(kind, a.n, eta, mode, options);
                csv += "," + format_sig12(value.precision);
                if (!value.converged) {
                    warnings.emplace_back(format_sig12(eta), strategy_kind_name(kind));
                }
            }
            csv += "\n";
        }
    } else {
        throw ContractError("--axis must be 'n' or 'eta'");
    }

    for (const auto& [axis_value, strategy] : warnings) {
        err << "warning: " << strategy << " row " << a.axis << "=" << axis_value
            << " did not reach optimizer tolerance\n";
    }
    emit(csv, a.output, out);
    return kExitOk;
}

struct ScalingArgs {
    std::string etas_csv;
    EtaSpec etas;
    int n_max = 0;
    int n_min = 1;
    int window = 4;
    std::string strategy = "optimal";
    int jobs = 0;
    double tolerance = 1e-9;
    int max_iter = 10000;
    std::string output;
};

int cmd_scaling(const ScalingArgs& a, std::ostream& out, std::ostream& err) {
    const LossMode mode = parse_loss_mode(a.etas.loss);
    const auto kind = parse_strategy_kind(a.strategy);
    if (!kind) throw ContractError("unknown strategy: " + a.strategy);
    if (a.n_max < 1) throw ContractError("scaling requires --n-max");
    if (a.etas_csv.empty()) throw ContractError("scaling requires --eta");

    CurveOptions options;
    options.jobs = a.jobs;
    options.tolerance = a.tolerance;
    options.max_iter = a.max_iter;
    options.refine_exact = false;  // scaling curves are bound-based

    std::string csv = "n,eta,s\n";
    for (const auto& eta_tok : split_list(a.etas_csv)) {
        const double eta = std::stod(eta_tok);
        const PrecisionCurve curve =
            precision_curve({*kind}, a.n_min, a.n_max, eta, mode, options);
        for (size_t r = 0; r < curve.rows.size(); ++r) {
            if (!curve.rows[r].converged[0]) {
                err << "warning: " << a.strategy << " row n=" << curve.rows[r].n
                    << " eta=" << format_sig12(eta)
                    << " did not reach optimizer tolerance\n";
            }
        }
        const ScalingCurve scaling = differential_scaling(curve, *kind, a.window);
        for (const auto& row : scaling.rows) {
            csv += std::to_string(row.n) + "," + format_sig12(eta) + "," +
                   format_sig12(row.s) + "\n";
        }
    }
    emit(csv, a.output, out);
    return kExitOk;
}

// ------------------------------------------------------- config-file merge

const char* const kCommandNames[] = {"compute", "optimize", "sweep", "scaling"};

bool is_command_token(const std::string& tok) {
    for (const char* name : kCommandNames) {
        if (tok == name) return true;
    }
    return false;
}

// Merges --config JSON into argv form. Explicit flags win: a config key is
// appended only when the matching --flag is absent from the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string config_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    std::ifstream file(config_path);
    if (!file) throw ContractError("cannot read config file: " + config_path);
    json doc;
    try {
        file >> doc;
    } catch (const json::exception& e) {
        throw ContractError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ContractError("config file must hold a JSON object");

    bool has_command = false;
    for (const auto& tok : args) {
        if (is_command_token(tok)) has_command = true;
    }
    std::vector<std::string> merged;
    merged.reserve(args.size() + 2 * doc.size());
    if (!has_command) {
        if (!doc.contains("command")) {
            throw ContractError("no command given (on the command line or in the config)");
        }
        merged.push_back(doc.at("command").get<std::string>());
    }
    merged.insert(merged.end(), args.begin(), args.end());

    for (const auto& [key, value] : doc.items()) {
        if (key == "command") continue;
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& tok : args) {
            if (tok == flag || tok.rfind(flag + "=", 0) == 0) present = true;
        }
        if (present) continue;
        if (value.is_boolean()) {
            merged.push_back(value.get<bool>() ? flag : "--no-" + key);
        } else if (value.is_string()) {
            merged.push_back(flag + "=" + value.get<std::string>());
        } else if (value.is_array()) {
            std::string csv;
            for (const auto& item : value) {
                if (!csv.empty()) csv += ",";
                csv += item.is_string() ? item.get<std::string>() : item.dump();
            }
            merged.push_back(flag + "=" + csv);
        } else {
            merged.push_back(flag + "=" + value.dump());
        }
    }
    return merged;
}

void add_eta_options(CLI::App* cmd, EtaSpec& etas) {
    cmd->add_option("--eta", etas.eta, "transmissivity shorthand, combined with --loss");
    cmd->add_option("--loss", etas.loss, "loss mode: both | one")
        ->check(CLI::IsMember({"both", "one"}));
    cmd->add_option("--eta-a", etas.eta_a, "arm-a transmissivity (overrides --eta)");
    cmd->add_option("--eta-b", etas.eta_b, "arm-b transmissivity (overrides --loss shorthand)");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> raw_args(argv + 1, argv + argc);

    try {
        std::vector<std::string> args = merge_config(std::move(raw_args));

        CLI::App app{"Quantum Fisher information and optimal states for lossy two-mode interferometry"};
        app.require_subcommand(0, 1);
        std::string config_path;
        app.add_option("--config", config_path, "JSON config file; explicit flags win");

        ComputeArgs compute_args;
        auto* compute = app.add_subcommand("compute", "QFI of a given input state");
        compute->add_option("--n", compute_args.n, "total photon number")->required();
        add_eta_options(compute, compute_args.etas);
        compute->add_option("--state", compute_args.state,
                            "noon | unbalanced-noon | two-component | symmetric | twin-fock | "
                            "holland-burnett | uniform | custom");
        int compute_m = -1;
        double compute_p = -1.0;
        auto* opt_m = compute->add_option("--m", compute_m, "preset parameter m");
        auto* opt_p = compute->add_option("--p", compute_p, "preset parameter p");
        compute->add_option("--weights", compute_args.weights,
                            "comma-separated weights for --state custom");
        compute->add_flag("--exact,!--no-exact", compute_args.exact,
                          "also evaluate the exact mixed-state QFI");
        compute->add_option("--output", compute_args.output, "write JSON here instead of stdout");

        OptimizeArgs optimize_args;
        auto* optimize_cmd = app.add_subcommand("optimize", "globally optimal input state");
        optimize_cmd->add_option("--n", optimize_args.n, "total photon number")->required();
        add_eta_options(optimize_cmd, optimize_args.etas);
        optimize_cmd->add_option("--tolerance", optimize_args.tolerance,
                                 "projected-gradient stopping tolerance");
        optimize_cmd->add_option("--max-iter", optimize_args.max_iter, "iteration cap");
        optimize_cmd->add_flag("--exact,!--no-exact", optimize_args.exact,
                               "evaluate exact QFI at the optimum (eta_b < 1)");
        optimize_cmd->add_option("--output", optimize_args.output,
                                 "write JSON here instead of stdout");

        SweepArgs sweep_args;
        auto* sweep = app.add_subcommand("sweep", "precision table over n or eta");
        sweep->add_option("--axis", sweep_args.axis, "n | eta")->required();
        sweep->add_option("--from", sweep_args.from, "axis start")->required();
        sweep->add_option("--to", sweep_args.to, "axis end")->required();
        sweep->add_option("--steps", sweep_args.steps, "number of eta points");
        sweep->add_option("--n", sweep_args.n, "photon number for eta sweeps");
        add_eta_options(sweep, sweep_args.etas);
        sweep->add_option("--strategies", sweep_args.strategies,
                          "comma list: heisenberg,sil,noon,unbalanced-noon,chopping,optimal,"
                          "two-component,twin-fock")
            ->required();
        bool sweep_exact = false;
        auto* sweep_exact_opt =
            sweep->add_flag("--exact,!--no-exact", sweep_exact,
                            "force exact refinement of optimizer-backed columns on or off");
        sweep->add_option("--jobs", sweep_args.jobs, "worker threads (0 = hardware)")
            ->envname("QFI_JOBS");
        sweep->add_option("--tolerance", sweep_args.tolerance, "optimizer tolerance");
        sweep->add_option("--max-iter", sweep_args.max_iter, "optimizer iteration cap");
        sweep->add_option("--output", sweep_args.output, "write CSV here instead of stdout");

        ScalingArgs scaling_args;
        auto* scaling = app.add_subcommand("scaling", "differential scaling table");
        scaling->add_option("--eta", scaling_args.etas_csv, "comma list of transmissivities")
            ->required();
        scaling->add_option("--loss", scaling_args.etas.loss, "loss mode: both | one")
            ->check(CLI::IsMember({"both", "one"}));
        scaling->add_option("--n-max", scaling_args.n_max, "largest photon number")->required();
        scaling->add_option("--n-min", scaling_args.n_min, "smallest photon number");
        scaling->add_option("--window", scaling_args.window, "half-width of the log-log fit");
        scaling->add_option("--strategy", scaling_args.strategy, "strategy to fit");
        scaling->add_option("--jobs", scaling_args.jobs, "worker threads (0 = hardware)")
            ->envname("QFI_JOBS");
        scaling->add_option("--tolerance", scaling_args.tolerance, "optimizer tolerance");
        scaling->add_option("--max-iter", scaling_args.max_iter, "optimizer iteration cap");
        scaling->add_option("--output", scaling_args.output, "write CSV here instead of stdout");

        std::vector<const char*> cargs;
        cargs.push_back("qphase");
        for (const auto& a : args) cargs.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {
                // --help and friends
                out << app.help();
                return kExitOk;
            }
            err << "error: " << e.what() << "\n";
            return kExitConfigError;
        }

        if (compute->parsed()) {
            if (opt_m->count() > 0) compute_args.m = compute_m;
            if (opt_p->count() > 0) compute_args.p = compute_p;
            return cmd_compute(compute_args, out);
        }
        if (optimize_cmd->parsed()) return cmd_optimize(optimize_args, out, err);
        if (sweep->parsed()) {
            if (sweep_exact_opt->count() > 0) sweep_args.exact = sweep_exact ? 1 : 0;
            return cmd_sweep(sweep_args, out, err);
        }
        if (scaling->parsed()) return cmd_scaling(scaling_args, out, err);
        err << app.help();
        return kExitConfigError;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace qphase::cli
