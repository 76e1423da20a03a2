#include "pulsekit/design.hpp"
#include "pulsekit/evolution.hpp"
#include "pulsekit/functionals.hpp"
#include "pulsekit/pulse.hpp"
#include "pulsekit/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;         // usage, IO, parse, design failure
constexpr int kExitVerification = 2;  // a verification ran and came out false

struct Options {
    std::string pulse_file;
    std::string family;
    int n = 1;
    double tau_p = 0.0;
    bool tau_p_set = false;
    double tau_s = 0.0;
    bool tau_s_set = false;
    double epsilon = pulsekit::kDefaultEpsilon;
    double tol = 1e-9;
    std::string out;
    std::string model = "default";
    std::string sweep = "joint";
    double shrink = 0.5;
    int steps = 6;
    bool gnuplot = false;
    double require_slope = 0.0;
    bool require_slope_set = false;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

pulsekit::SystemModel load_model(const Options& opt) {
    if (opt.model == "default") return pulsekit::default_model(opt.epsilon);
    std::ifstream in(opt.model);
    if (!in) throw std::runtime_error("cannot open model file '" + opt.model + "'");
    return pulsekit::parse_model_file(in, opt.epsilon);
}

// tau_p precedence: explicit flag, else the model's natural short-pulse
// scale when a model is in play, else 1.
double resolve_tau_p(const Options& opt, const pulsekit::SystemModel* model) {
    if (opt.tau_p_set) return opt.tau_p;
    if (model != nullptr) return pulsekit::default_tau_p(*model);
    return 1.0;
}

pulsekit::DesignedPulse load_pulse_file(const Options& opt) {
    std::ifstream in(opt.pulse_file);
    if (!in) throw std::runtime_error("cannot open pulse file '" + opt.pulse_file + "'");
    pulsekit::PulseFileContents contents = pulsekit::parse_pulse_file(in);
    if (opt.tau_s_set) contents.tau_s = opt.tau_s;
    return pulsekit::to_designed(contents);
}

// Builds the pulse from --pulse or --family. For the asymmetric family the
// built-in verification must pass; a failure is reported and mapped to the
// verification exit code by the caller.
pulsekit::DesignedPulse resolve_pulse(const Options& opt, double tau_p) {
    if (!opt.pulse_file.empty()) return load_pulse_file(opt);
    if (opt.family.empty()) throw std::runtime_error("need --pulse or --family");
    if (opt.family == "symmetric") return pulsekit::design_symmetric_pi(tau_p);
    pulsekit::AsymmetricDesign design = pulsekit::design_asymmetric_pi(tau_p, opt.n);
    if (!design.verification.ok)
        throw std::runtime_error(
            "asymmetric design verification failed: eta_tau = (" +
            pulsekit::format_double(design.verification.eta1) + ", " +
            pulsekit::format_double(design.verification.eta2) + "), tol = " +
            pulsekit::format_double(design.verification.tol));
    return design.pulse;
}

int run_design(const Options& opt) {
    const double tau_p = resolve_tau_p(opt, nullptr);
    if (opt.family == "symmetric") {
        write_output(opt.out, pulsekit::serialize_pulse_file(pulsekit::design_symmetric_pi(tau_p)));
        return kExitOk;
    }
    const pulsekit::AsymmetricDesign design = pulsekit::design_asymmetric_pi(tau_p, opt.n);
    if (!design.verification.ok) {
        std::cerr << "error: asymmetric design verification failed: eta_tau = ("
                  << pulsekit::format_double(design.verification.eta1) << ", "
                  << pulsekit::format_double(design.verification.eta2) << "), tol = "
                  << pulsekit::format_double(design.verification.tol) << "\n";
        return kExitVerification;
    }
    write_output(opt.out, pulsekit::serialize_pulse_file(design.pulse));
    return kExitOk;
}

int run_budget(const Options& opt) {
    const double tau_p = resolve_tau_p(opt, nullptr);
    const pulsekit::DesignedPulse pulse = resolve_pulse(opt, tau_p);
    const pulsekit::ErrorBudget budget = pulsekit::compute_budget(pulse, opt.epsilon);
    write_output(opt.out, pulsekit::budget_csv(budget));
    return kExitOk;
}

int run_simulate(const Options& opt) {
    const pulsekit::SystemModel model = load_model(opt);
    const double tau_p = resolve_tau_p(opt, &model);
    const pulsekit::DesignedPulse pulse = resolve_pulse(opt, tau_p);
    const pulsekit::OperatorMatrix u = pulsekit::propagate(model, pulse);
    const pulsekit::OperatorMatrix target = pulsekit::ideal_target(model, pulse);
    const pulsekit::OperatorMatrix delta = pulsekit::control_frame_error(model, pulse);
    const pulsekit::OperatorMatrix eta = pulsekit::assemble_eta(model, pulse);
    std::string csv = "metric,value\n";
    csv += "u_vs_target," + pulsekit::format_g17(pulsekit::operator_norm(u - target)) + "\n";
    csv += "control_frame_error," + pulsekit::format_g17(pulsekit::operator_norm(delta)) + "\n";
    csv += "eta_prediction," + pulsekit::format_g17(pulsekit::operator_norm(eta)) + "\n";
    csv += "residual," + pulsekit::format_g17(pulsekit::operator_norm(delta - eta)) + "\n";
    write_output(opt.out, csv);
    return kExitOk;
}

int run_scaling(const Options& opt) {
    const pulsekit::SystemModel model = load_model(opt);
    const double tau_p = resolve_tau_p(opt, &model);
    const pulsekit::DesignedPulse pulse = resolve_pulse(opt, tau_p);
    const pulsekit::SweepKind kind = opt.sweep == "duration"
                                         ? pulsekit::SweepKind::duration_target
                                         : pulsekit::SweepKind::joint_residual;
    const pulsekit::ScalingSeries series =
        pulsekit::scaling_sweep(model, pulse, opt.shrink, opt.steps, kind);
    write_output(opt.out, pulsekit::scaling_csv(series));
    if (opt.gnuplot) {
        if (opt.out.empty() || opt.out == "-")
            throw std::runtime_error("--gnuplot needs --out so the script can name the CSV");
        write_output(opt.out + ".gp", pulsekit::scaling_gnuplot(opt.out));
    }
    if (opt.require_slope_set && series.slope < opt.require_slope) {
        std::cerr << "error: fitted slope " << pulsekit::format_double(series.slope)
                  << " below required " << pulsekit::format_double(opt.require_slope) << "\n";
        return kExitVerification;
    }
    return kExitOk;
}

int run_table1(const Options& opt) {
    const double tau_p = resolve_tau_p(opt, nullptr);
    const pulsekit::Table1Report report = pulsekit::table1_report(tau_p, opt.n, opt.tol);
    write_output(opt.out, report.text);
    return report.matches_expected ? kExitOk : kExitVerification;
}

void add_pulse_source(CLI::App* cmd, Options& opt, bool family_only = false) {
    auto* family = cmd->add_option("--family", opt.family, "builtin family")
                       ->check(CLI::IsMember({"symmetric", "asymmetric"}));
    cmd->add_option("--n", opt.n, "asymmetric family index (n >= 1)")
        ->check(CLI::PositiveNumber);
    if (family_only) {
        family->required();
        return;
    }
    auto* pulse = cmd->add_option("--pulse", opt.pulse_file, "pulse file to load");
    pulse->excludes(family);
    family->excludes(pulse);
    cmd->add_option("--tau-s", opt.tau_s, "override the placement instant tau_s")
        ->each([&opt](const std::string&) { opt.tau_s_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shaped control pulses: error functionals, design, and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value config file; flags take precedence");

    Options opt;
    const auto mark_tau_p = [&opt](const std::string&) { opt.tau_p_set = true; };

    CLI::App* design = app.add_subcommand("design", "emit an optimized pulse file");
    add_pulse_source(design, opt, /*family_only=*/true);
    design->add_option("--tau-p", opt.tau_p, "pulse duration (default 1)")->each(mark_tau_p);
    design->add_option("--out", opt.out, "output path (default stdout)");

    CLI::App* budget = app.add_subcommand("budget", "emit the ten error functionals as CSV");
    add_pulse_source(budget, opt);
    budget->add_option("--tau-p", opt.tau_p, "family duration (default 1)")->each(mark_tau_p);
    budget->add_option("--epsilon", opt.epsilon, "direction error strength (default 1e-3)");
    budget->add_option("--out", opt.out, "output path (default stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "brute-force one pulse against a model");
    add_pulse_source(simulate, opt);
    simulate->add_option("--tau-p", opt.tau_p, "family duration (default: model scale)")
        ->each(mark_tau_p);
    simulate->add_option("--epsilon", opt.epsilon, "direction error strength (default 1e-3)");
    simulate->add_option("--model", opt.model, "'default' or a matrix file");
    simulate->add_option("--out", opt.out, "output path (default stdout)");

    CLI::App* scaling = app.add_subcommand("scaling", "emit a shrink-sweep deviation series");
    add_pulse_source(scaling, opt);
    scaling->add_option("--tau-p", opt.tau_p, "family duration (default: model scale)")
        ->each(mark_tau_p);
    scaling->add_option("--epsilon", opt.epsilon, "direction error strength (default 1e-3)");
    scaling->add_option("--model", opt.model, "'default' or a matrix file");
    scaling->add_option("--sweep", opt.sweep, "sweep kind (default joint)")
        ->check(CLI::IsMember({"duration", "joint"}));
    scaling->add_option("--shrink", opt.shrink, "per-step shrink factor (default 0.5)");
    scaling->add_option("--steps", opt.steps, "number of sweep steps (default 6)");
    scaling->add_flag("--gnuplot", opt.gnuplot, "also write <out>.gp plot script");
    scaling->add_option("--require-slope", opt.require_slope, "fail if fitted slope is below")
        ->each([&opt](const std::string&) { opt.require_slope_set = true; });
    scaling->add_option("--out", opt.out, "output path (default stdout)");

    CLI::App* table1 = app.add_subcommand("table1", "classify all ten functionals for SP and AP");
    table1->add_option("--tau-p", opt.tau_p, "pulse duration (default 1)")->each(mark_tau_p);
    table1->add_option("--n", opt.n, "asymmetric family index (default 1)")
        ->check(CLI::PositiveNumber);
    table1->add_option("--tol", opt.tol, "zero threshold, scaled by max(1, tau_p)");
    table1->add_option("--out", opt.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (design->parsed()) return run_design(opt);
        if (budget->parsed()) return run_budget(opt);
        if (simulate->parsed()) return run_simulate(opt);
        if (scaling->parsed()) return run_scaling(opt);
        if (table1->parsed()) return run_table1(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::cerr << "error: no subcommand\n";
    return kExitError;
}
