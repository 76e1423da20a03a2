#pragma once

#include "pulsekit/operators.hpp"
#include "pulsekit/pulse.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pulsekit {

/// Small Hilbert-space test system: drift H, kick axis Omega, and the
/// direction-error operator Omega' entering the control as
/// V(t) (Omega + epsilon Omega').
struct SystemModel {
    OperatorMatrix hamiltonian;
    InvolutionOperator kick;
    OperatorMatrix kick_tilt;
    double epsilon;

    SystemModel(OperatorMatrix h, InvolutionOperator omega, OperatorMatrix omega_prime,
                double eps);

    Eigen::Index dimension() const { return hamiltonian.rows(); }
};

inline constexpr double kDefaultEpsilon = 1e-3;

/// Fixed 8-dimensional three-qubit model: sigma_z drift terms and weak
/// transverse couplings on the bath qubits, kick sigma_x on qubit one,
/// tilt (sigma_y + sigma_z) on qubit one.
SystemModel default_model(double epsilon = kDefaultEpsilon);

/// 1e-2 / ||H||, the duration scale at which the pulse is short against the
/// drift.
double default_tau_p(const SystemModel& model);

/// Model file: three matrix blocks (H, Omega, Omega') concatenated. Each
/// block is one line with the dimension d followed by d lines of d
/// whitespace-separated complex entries "a+bi". '#' lines and blank lines
/// are ignored. epsilon is supplied by the caller, not the file.
SystemModel parse_model_file(std::istream& in, double epsilon);

std::complex<double> parse_complex(const std::string& token);

/// Exact segment-by-segment propagator for
///   i dU/dt = [H + V(t) (Omega + eps Omega')] U,  U(0) = 1,
/// i.e. U = prod_k exp(-i G_k h_k) with later segments applied on the left.
OperatorMatrix propagate(const SystemModel& model, const DesignedPulse& pulse);

/// P_Omega = cos(phi_plus) 1 - i sin(phi_plus) Omega, the instantaneous kick
/// the pulse approximates.
OperatorMatrix ideal_kick(const SystemModel& model, const DesignedPulse& pulse);

/// exp(-i H (tau_p - tau_s)) P_Omega exp(-i H tau_s): free drift with the
/// ideal kick inserted at tau_s.
OperatorMatrix ideal_target(const SystemModel& model, const DesignedPulse& pulse);

/// delta P_Omega = exp(+i H (tau_p - tau_s)) U exp(+i H tau_s) - P_Omega,
/// the pulse error in the drift frame anchored at tau_s.
OperatorMatrix control_frame_error(const SystemModel& model, const DesignedPulse& pulse);

/// Leading-order prediction for control_frame_error, assembled from the ten
/// functionals and the Omega-split parts of H and Omega'.
OperatorMatrix assemble_eta(const SystemModel& model, const DesignedPulse& pulse);

struct ScalingSample {
    int k;
    double param;
    double deviation;
};

struct ScalingFit {
    double slope;
    double residual;  // max |log deviation - fit| over the samples
};

/// Least-squares slope of log(deviation) against log(param). Requires at
/// least four samples, all with positive param and deviation; otherwise
/// throws std::invalid_argument naming the defect.
ScalingFit fit_scaling(const std::vector<ScalingSample>& samples);

struct ScalingSeries {
    std::vector<ScalingSample> samples;
    double slope;
    double fit_residual;
};

enum class SweepKind {
    /// epsilon = 0; deviation = ||U - ideal_target|| against param = tau_p.
    duration_target,
    /// tau_p and epsilon shrink together; deviation =
    /// ||control_frame_error - assemble_eta|| against param = tau_p.
    joint_residual,
};

/// Geometric shrink sweep: step k rescales the pulse duration (and for
/// joint_residual also epsilon) by shrink^k, k = 0 .. steps-1.
ScalingSeries scaling_sweep(const SystemModel& model, const DesignedPulse& pulse,
                            double shrink, int steps, SweepKind kind);

struct LeadingOrderReport {
    ScalingSeries series;
    double required_slope;
    bool ok;
};

/// Verdict on whether control_frame_error - assemble_eta shrinks at second
/// order under the joint sweep (slope >= 1.85 required).
LeadingOrderReport leading_order_agreement(const SystemModel& model,
                                           const DesignedPulse& pulse,
                                           double shrink = 0.5, int steps = 6);

}  // namespace pulsekit
