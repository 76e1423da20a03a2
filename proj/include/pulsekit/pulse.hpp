#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pulsekit {

struct Segment {
    double duration;   // > 0
    double amplitude;  // signed angular frequency
};

/// Piecewise-constant pulse amplitude profile V(t) on [0, tau_p].
///
/// V is right-continuous at switch points; the value at t = tau_p is taken
/// from the last segment. Segment boundaries and the running integral of V
/// are precomputed exactly (plain summation, no quadrature).
class PulseShape {
public:
    explicit PulseShape(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }
    double total_duration() const { return boundaries_.back(); }

    /// Boundaries 0 = b_0 < b_1 < ... < b_n = tau_p.
    const std::vector<double>& boundaries() const { return boundaries_; }
    /// Running integral of V at each boundary (areas_[k] = int_0^{b_k} V).
    const std::vector<double>& boundary_areas() const { return areas_; }

    double value_at(double t) const;    // right-continuous limit
    double value_left(double t) const;  // left-continuous limit, t > 0

    /// Index of the segment owning t under right-continuity.
    std::size_t segment_index_at(double t) const;

private:
    std::vector<Segment> segments_;
    std::vector<double> boundaries_;
    std::vector<double> areas_;
};

/// int_0^t V(s) ds, exact piecewise-linear accumulation. Throws
/// std::domain_error for t outside [0, tau_p].
double cumulative_phase(const PulseShape& shape, double t);

/// Total rotation angle of the pulse, defined as 2 * int_0^{tau_p} V(s) ds.
/// Under this convention a pi pulse has int V dt = pi/2 (phi_plus = pi/2).
double rotation_angle(const PulseShape& shape);

/// True iff V(t) = V(tau_p - t) within tol, checked at segment midpoints and
/// at switch points (right limit against the mirrored left limit).
bool is_symmetric(const PulseShape& shape, double tol);

struct PhasePair {
    double phi_plus;   // int_{tau_s}^{tau_p} V + int_0^{tau_s} V = int_0^{tau_p} V
    double phi_minus;  // int_{tau_s}^{tau_p} V - int_0^{tau_s} V
};

/// A pulse shape bundled with the placement instant tau_s of the ideal kick
/// it stands in for, and the intended total rotation angle (= 2 phi_plus).
/// Construction validates 0 <= tau_s <= tau_p and that the shape's rotation
/// angle matches intended_angle to 1e-10.
class DesignedPulse {
public:
    DesignedPulse(PulseShape shape, double tau_s, double intended_angle);

    const PulseShape& shape() const { return shape_; }
    double tau_s() const { return tau_s_; }
    double intended_angle() const { return intended_angle_; }
    double total_duration() const { return shape_.total_duration(); }

private:
    PulseShape shape_;
    double tau_s_;
    double intended_angle_;
};

PhasePair phase_pair(const DesignedPulse& pulse);

/// psi(t) = 2 * int_{tau_s}^{t} V(s) ds
double psi(const DesignedPulse& pulse, double t);

/// Three-segment symmetric shape: -a_max on [0, tau_1) and (tau_p - tau_1,
/// tau_p], +a_max in between. Requires 0 < tau_1 < tau_p / 2 and a_max > 0.
/// Rotation angle is 2 a_max (tau_p - 4 tau_1).
PulseShape make_symmetric(double tau_p, double tau_1, double a_max);

/// Two-segment asymmetric shape: +a_max on [0, tau_1), -a_max on
/// [tau_1, tau_p]. Requires 0 < tau_1 < tau_p and a_max > 0. Rotation angle
/// is 2 a_max (2 tau_1 - tau_p).
PulseShape make_asymmetric(double tau_p, double tau_1, double a_max);

/// The n-indexed asymmetric pi-pulse family:
///   tau_1 = (2n+1) tau_p / (4n),  a_max = pi n / tau_p,
///   tau_s = tau_p [1/2 + (-1)^n / (2 n pi)].
/// Every member rotates by exactly pi. Requires n >= 1.
DesignedPulse asymmetric_family(int n, double tau_p);

/// Time-dilated copy: durations and tau_s scale by factor, amplitudes by
/// 1/factor, so all accumulated phases (and the rotation angle) stay put.
DesignedPulse rescale_duration(const DesignedPulse& pulse, double factor);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Result of parsing a pulse file: the shape plus the optional
/// "tau_s <value>" and "angle <value>" header lines.
struct PulseFileContents {
    PulseShape shape;
    std::optional<double> tau_s;
    std::optional<double> angle;
};

/// Pulse file format: UTF-8 text, one segment per line as
/// "<duration> <amplitude>"; lines beginning with '#' and blank lines are
/// ignored; optional header lines "tau_s <value>" and "angle <value>".
/// Errors name the offending line number.
PulseFileContents parse_pulse_file(std::istream& in);
PulseFileContents parse_pulse_text(const std::string& text);

/// Missing tau_s defaults to tau_p / 2; missing angle defaults to the
/// shape's own rotation angle.
DesignedPulse to_designed(const PulseFileContents& contents);

std::string serialize_pulse_file(const DesignedPulse& pulse);

}  // namespace pulsekit
