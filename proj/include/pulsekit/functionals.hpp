#pragma once

#include "pulsekit/pulse.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace pulsekit {

/// Duration-error pair:
///   eta1 = int_0^{tau_p} (t - tau_s) V(t) sin(phi_minus - psi(t)) dt
///   eta2 = int_0^{tau_p} (t - tau_s) V(t) cos(phi_minus - psi(t)) dt
struct EtaTau {
    double eta1;
    double eta2;
};

/// Four-entry direction-error group (either the zeroth-moment or the
/// first-moment family); entries carry the supplied epsilon factor.
struct EtaQuad {
    double eta1;
    double eta2;
    double eta3;
    double eta4;
};

/// Closed-form duration-error functionals. Exact per segment: on a segment
/// of amplitude a the integrand's phase is linear in t, so each segment
/// contributes elementary sin/cos antiderivatives. No quadrature.
EtaTau eta_tau(const DesignedPulse& pulse);

/// Zeroth-moment direction-error functionals, scaled by epsilon:
///   eta1 = eps int V sin(phi_minus - psi),  eta2 = eps int V cos(...),
///   eta3 = eps sin(phi_plus) phi_plus,      eta4 = eps cos(phi_plus) phi_plus.
EtaQuad eta_eps0(const DesignedPulse& pulse, double epsilon);

/// First-moment direction-error functionals, scaled by epsilon:
///   eta1 = eps sin(phi_plus) m1,  eta2 = eps cos(phi_plus) m1,
///   eta3 = eps * eta_tau.eta1,    eta4 = eps * eta_tau.eta2,
/// with m1 = int (t - tau_s) V dt. Entries 3 and 4 reuse the eta_tau code
/// path, so they match it bit for bit.
EtaQuad eta_eps1(const DesignedPulse& pulse, double epsilon);

/// int_0^{tau_p} (t - tau_s) V(t) dt, exact per segment.
double first_moment(const DesignedPulse& pulse);

inline constexpr std::array<const char*, 10> kFunctionalNames = {
    "eta_tau_1",  "eta_tau_2",  "eta_eps0_1", "eta_eps0_2", "eta_eps0_3",
    "eta_eps0_4", "eta_eps1_1", "eta_eps1_2", "eta_eps1_3", "eta_eps1_4",
};

enum class Functional {
    eta_tau_1,
    eta_tau_2,
    eta_eps0_1,
    eta_eps0_2,
    eta_eps0_3,
    eta_eps0_4,
    eta_eps1_1,
    eta_eps1_2,
    eta_eps1_3,
    eta_eps1_4,
};

/// All ten functionals for one pulse. Direction-error entries are stored as
/// coefficients of epsilon (the epsilon = 1 values); tau_p and epsilon ride
/// along so downstream consumers can rescale.
struct ErrorBudget {
    double tau_p;
    double epsilon;
    double eta_tau_1;
    double eta_tau_2;
    double eta_eps0_1;
    double eta_eps0_2;
    double eta_eps0_3;
    double eta_eps0_4;
    double eta_eps1_1;
    double eta_eps1_2;
    double eta_eps1_3;
    double eta_eps1_4;

    std::array<double, 10> values() const;
};

ErrorBudget compute_budget(const DesignedPulse& pulse, double epsilon);

/// Literal first-moment expression for the two-segment asymmetric geometry:
///   a_max (tau_1^2 - tau_p^2 / 2 - 2 tau_1 tau_s + tau_p tau_s).
double eta1_asym_closed_form(double tau_p, double tau_1, double tau_s, double a_max);

class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& message);
};

/// Independent check of the closed forms: evaluates the selected functional
/// by adaptive Simpson quadrature over each inter-switch interval, phases
/// taken from cumulative_phase. Absolute tolerance 1e-11; throws OracleError
/// if the evaluation budget is exhausted before convergence.
double quadrature_oracle(const DesignedPulse& pulse, Functional which, double epsilon);

enum class TermFlag { zero, nonzero };

struct BudgetClassification {
    std::array<TermFlag, 10> flags;
    double threshold;  // the absolute threshold actually applied
};

/// Flags each epsilon-coefficient as zero/nonzero against
/// tol * max(1, tau_p).
BudgetClassification classify_budget(const ErrorBudget& budget, double tol = 1e-9);

}  // namespace pulsekit
