#pragma once

#include "pulsekit/functionals.hpp"
#include "pulsekit/pulse.hpp"

#include <stdexcept>
#include <string>

namespace pulsekit {

class DesignError : public std::runtime_error {
public:
    explicit DesignError(const std::string& message);
};

/// Outcome of checking the first-order duration-error conditions
/// eta_tau = (0, 0) against an absolute tolerance.
struct FirstOrderReport {
    bool ok;
    double eta1;
    double eta2;
    double tol;
    double rotation_angle;
    bool degenerate_angle;  // |rotation_angle| too small for the check to mean much
};

FirstOrderReport verify_first_order(const DesignedPulse& pulse, double tol);

/// Symmetric pi pulse with both duration-error functionals nulled.
///
/// Solves for the switch fraction x = tau_1 / tau_p at unit duration, with
/// a_max pinned by the pi-pulse condition a_max = pi / (2 tau_p (1 - 4 x)),
/// then rescales. eta2 vanishes identically for the symmetric shape with
/// tau_s = tau_p / 2, so the solve is one-dimensional in eta1: a sign-change
/// scan over x in (0, 1/4) followed by bisection. The smallest root is
/// returned (x ~ 1/7, a_max tau_p ~ 7 pi / 6). Throws DesignError, with the
/// scan endpoints quoted, if no bracket is found.
DesignedPulse design_symmetric_pi(double tau_p);

struct AsymmetricDesign {
    DesignedPulse pulse;
    FirstOrderReport verification;
};

/// Member n of the asymmetric pi-pulse family, verified: eta_tau is checked
/// to vanish within 1e-9 * max(1, tau_p) before the pulse is returned.
AsymmetricDesign design_asymmetric_pi(double tau_p, int n);

}  // namespace pulsekit
