#include "pulsekit/report.hpp"

#include "pulsekit/design.hpp"

#include <array>
#include <charconv>
#include <cstddef>

namespace pulsekit {

std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_g17(double value) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string budget_csv(const ErrorBudget& budget) {
    std::string out;
    for (std::size_t i = 0; i < kFunctionalNames.size(); ++i) {
        if (i > 0) out += ',';
        out += kFunctionalNames[i];
    }
    out += '\n';
    const std::array<double, 10> vals = budget.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i > 0) out += ',';
        out += format_g17(vals[i]);
    }
    out += '\n';
    return out;
}

std::string scaling_csv(const ScalingSeries& series) {
    std::string out = "k,param,deviation\n";
    for (const ScalingSample& s : series.samples) {
        out += std::to_string(s.k);
        out += ',';
        out += format_g17(s.param);
        out += ',';
        out += format_g17(s.deviation);
        out += '\n';
    }
    out += "# slope = " + format_g17(series.slope) + "\n";
    out += "# residual = " + format_g17(series.fit_residual) + "\n";
    return out;
}

std::string scaling_gnuplot(const std::string& csv_path) {
    std::string out;
    out += "set datafile separator ','\n";
    out += "set logscale xy\n";
    out += "set xlabel 'param'\n";
    out += "set ylabel 'deviation'\n";
    out += "set key left top\n";
    out += "plot '" + csv_path + "' every ::1 using 2:3 with linespoints title 'deviation'\n";
    return out;
}

namespace {

struct RowSpec {
    const char* name;
    bool sp_zero;
    bool ap_zero;
    const char* note;
};

constexpr std::array<RowSpec, 10> kExpectedRows = {{
    {"eta_tau_1", true, true, "first-order design conditions"},
    {"eta_tau_2", true, true, "first-order design conditions"},
    {"eta_eps0_1", true, true, "any shape"},
    {"eta_eps0_2", false, false, "-"},
    {"eta_eps0_3", false, false, "-"},
    {"eta_eps0_4", true, true, "pi pulse"},
    {"eta_eps1_1", true, false, "vanishing first moment (symmetric only)"},
    {"eta_eps1_2", true, true, "pi pulse"},
    {"eta_eps1_3", true, true, "first-order design conditions"},
    {"eta_eps1_4", true, true, "first-order design conditions"},
}};

std::string cell(TermFlag flag) {
    return flag == TermFlag::zero ? "=0" : "!=0";
}

}  // namespace

Table1Report table1_report(double tau_p, int n, double tol) {
    const DesignedPulse sp = design_symmetric_pi(tau_p);
    const AsymmetricDesign ap = design_asymmetric_pi(tau_p, n);

    const BudgetClassification cs = classify_budget(compute_budget(sp, 1.0), tol);
    const BudgetClassification ca = classify_budget(compute_budget(ap.pulse, 1.0), tol);

    Table1Report report;
    report.matches_expected = ap.verification.ok;
    std::string& t = report.text;
    t += "# zero/nonzero classification of the ten error functionals\n";
    t += "# SP: designed symmetric pi pulse, AP: asymmetric family member n = " +
         std::to_string(n) + "\n";
    t += "# tau_p = " + format_double(tau_p) + ", threshold = " + format_double(cs.threshold) +
         "\n";
    t += "functional   SP    AP    zero when\n";
    for (std::size_t i = 0; i < kExpectedRows.size(); ++i) {
        const RowSpec& row = kExpectedRows[i];
        const std::string sp_cell = cell(cs.flags[i]);
        const std::string ap_cell = cell(ca.flags[i]);
        std::string line = row.name;
        line.resize(13, ' ');
        line += sp_cell;
        line.resize(13 + 6, ' ');
        line += ap_cell;
        line.resize(13 + 12, ' ');
        line += row.note;
        t += line + "\n";
        const bool sp_ok = (cs.flags[i] == TermFlag::zero) == row.sp_zero;
        const bool ap_ok = (ca.flags[i] == TermFlag::zero) == row.ap_zero;
        if (!sp_ok || !ap_ok) report.matches_expected = false;
    }
    t += report.matches_expected ? "classification: as expected\n"
                                 : "classification: MISMATCH against the expected pattern\n";
    return report;
}

}  // namespace pulsekit
