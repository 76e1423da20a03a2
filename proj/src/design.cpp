#include "pulsekit/design.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace pulsekit {

DesignError::DesignError(const std::string& message) : std::runtime_error(message) {}

FirstOrderReport verify_first_order(const DesignedPulse& pulse, double tol) {
    if (!std::isfinite(tol) || !(tol > 0.0))
        throw std::invalid_argument("verify_first_order: tol must be positive");
    const EtaTau et = eta_tau(pulse);
    FirstOrderReport report;
    report.eta1 = et.eta1;
    report.eta2 = et.eta2;
    report.tol = tol;
    report.rotation_angle = rotation_angle(pulse.shape());
    report.degenerate_angle = std::abs(report.rotation_angle) < 1e-12;
    report.ok = std::abs(et.eta1) <= tol && std::abs(et.eta2) <= tol;
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

// eta_tau_1 of the unit-duration symmetric shape with switch fraction x and
// a_max pinned to rotate by pi; eta_tau_2 is identically zero for this
// family (tau_s at the symmetry center), so the design is one-dimensional.
double symmetric_eta1_unit(double x) {
    const double a = std::numbers::pi / (2.0 * (1.0 - 4.0 * x));
    const DesignedPulse p(make_symmetric(1.0, x, a), 0.5, std::numbers::pi);
    return eta_tau(p).eta1;
}

}  // namespace

DesignedPulse design_symmetric_pi(double tau_p) {
    if (!std::isfinite(tau_p) || !(tau_p > 0.0))
        throw std::invalid_argument("design_symmetric_pi: tau_p must be positive");

    // Scan x = tau_1 / tau_p over (0, 1/4) for the first sign change of
    // eta_tau_1, then bisect. The solve runs at unit duration; the root is
    // scale-covariant, so the result is rescaled afterwards.
    constexpr double x_lo = 1e-6;
    constexpr double x_hi = 0.25 - 1e-6;
    constexpr int n_scan = 4096;

    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    bool bracketed = false;
    double prev_x = x_lo;
    double prev_f = symmetric_eta1_unit(x_lo);
    for (int i = 1; i <= n_scan && !bracketed; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / n_scan;
        const double f = symmetric_eta1_unit(x);
        if (prev_f == 0.0) {
            lo = hi = prev_x;
            bracketed = true;
            break;
        }
        if (f == 0.0) {
            lo = hi = x;
            bracketed = true;
            break;
        }
        if (std::signbit(f) != std::signbit(prev_f)) {
            lo = prev_x;
            hi = x;
            f_lo = prev_f;
            bracketed = true;
            break;
        }
        prev_x = x;
        prev_f = f;
    }
    if (!bracketed)
        throw DesignError("design_symmetric_pi: no sign change of eta_tau_1 for tau_1/tau_p in (" +
                          fmt(x_lo) + ", " + fmt(x_hi) + "); f(" + fmt(x_lo) + ") = " +
                          fmt(symmetric_eta1_unit(x_lo)) + ", f(" + fmt(x_hi) + ") = " +
                          fmt(symmetric_eta1_unit(x_hi)) + " over " + std::to_string(n_scan) +
                          " scan points");

    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = symmetric_eta1_unit(mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double x_root = 0.5 * (lo + hi);

    const double tau_1 = x_root * tau_p;
    const double a_max = std::numbers::pi / (2.0 * tau_p * (1.0 - 4.0 * x_root));
    PulseShape shape = make_symmetric(tau_p, tau_1, a_max);
    const double tau_s = 0.5 * shape.total_duration();
    return DesignedPulse(std::move(shape), tau_s, std::numbers::pi);
}

AsymmetricDesign design_asymmetric_pi(double tau_p, int n) {
    DesignedPulse pulse = asymmetric_family(n, tau_p);
    const double tol = 1e-9 * std::max(1.0, tau_p);
    FirstOrderReport report = verify_first_order(pulse, tol);
    return {std::move(pulse), report};
}

}  // namespace pulsekit
