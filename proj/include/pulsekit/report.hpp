#pragma once

#include "pulsekit/evolution.hpp"
#include "pulsekit/functionals.hpp"

#include <string>

namespace pulsekit {

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double value);

/// 17 significant digits, general format.
std::string format_g17(double value);

/// Header row of the ten functional names, then one row of epsilon
/// coefficients at 17 significant digits.
std::string budget_csv(const ErrorBudget& budget);

/// "k,param,deviation" rows followed by "# slope = ..." and
/// "# residual = ..." footer comments.
std::string scaling_csv(const ScalingSeries& series);

/// Companion gnuplot script plotting deviation against param from the CSV.
std::string scaling_gnuplot(const std::string& csv_path);

struct Table1Report {
    std::string text;
    bool matches_expected;
};

/// Zero/nonzero classification of all ten functionals for the designed
/// symmetric pulse (SP) and asymmetric family member n (AP), rendered as a
/// plain-text table and checked against the expected pattern:
/// rows 1-2 and 9-10 zero for both, rows 3, 6, 8 zero for both, rows 4-5
/// nonzero for both, row 7 zero for SP only.
Table1Report table1_report(double tau_p, int n, double tol);

}  // namespace pulsekit
