#include "pulsekit/pulse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <utility>

namespace pulsekit {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double_token(std::string_view tok, double& out) {
    const char* last = tok.data() + tok.size();
    auto res = std::from_chars(tok.data(), last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) toks.push_back(s.substr(i, j - i));
        i = j;
    }
    return toks;
}

}  // namespace

PulseShape::PulseShape(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("pulse shape needs at least one segment");
    boundaries_.reserve(segments_.size() + 1);
    areas_.reserve(segments_.size() + 1);
    boundaries_.push_back(0.0);
    areas_.push_back(0.0);
    for (const Segment& s : segments_) {
        if (!std::isfinite(s.duration) || !(s.duration > 0.0))
            throw std::invalid_argument("segment duration must be positive and finite");
        if (!std::isfinite(s.amplitude))
            throw std::invalid_argument("segment amplitude must be finite");
        boundaries_.push_back(boundaries_.back() + s.duration);
        areas_.push_back(areas_.back() + s.duration * s.amplitude);
    }
}

std::size_t PulseShape::segment_index_at(double t) const {
    if (!(t >= 0.0) || !(t <= total_duration()))
        throw std::domain_error("time " + fmt(t) + " outside [0, " + fmt(total_duration()) + "]");
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - boundaries_.begin()) - 1;
    if (idx >= segments_.size()) idx = segments_.size() - 1;  // t == tau_p
    return idx;
}

double PulseShape::value_at(double t) const {
    return segments_[segment_index_at(t)].amplitude;
}

double PulseShape::value_left(double t) const {
    if (!(t > 0.0) || !(t <= total_duration()))
        throw std::domain_error("left limit needs t in (0, tau_p], got " + fmt(t));
    auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - boundaries_.begin());
    return segments_[j - 1].amplitude;
}

double cumulative_phase(const PulseShape& shape, double t) {
    const std::size_t k = shape.segment_index_at(t);
    return shape.boundary_areas()[k] +
           shape.segments()[k].amplitude * (t - shape.boundaries()[k]);
}

double rotation_angle(const PulseShape& shape) {
    return 2.0 * shape.boundary_areas().back();
}

bool is_symmetric(const PulseShape& shape, double tol) {
    const double tp = shape.total_duration();
    const auto& b = shape.boundaries();
    const std::size_t n = shape.segment_count();
    for (std::size_t k = 0; k < n; ++k) {
        const double tm = 0.5 * (b[k] + b[k + 1]);
        if (std::abs(shape.value_at(tm) - shape.value_at(tp - tm)) > tol) return false;
    }
    // Right limit at each switch against the mirrored left limit. The mirror
    // tp - b_i is snapped onto a boundary it lands within an ulp of, so the
    // comparison cannot slip to the wrong side of the mirrored switch.
    const double snap = 1e-9 * std::max(1.0, tp);
    for (std::size_t i = 1; i < n; ++i) {
        double m = tp - b[i];
        auto it = std::lower_bound(b.begin(), b.end(), m);
        if (it != b.end() && std::abs(*it - m) <= snap) m = *it;
        else if (it != b.begin() && std::abs(*(it - 1) - m) <= snap) m = *(it - 1);
        const double mirrored = m > 0.0 ? shape.value_left(m) : shape.value_at(0.0);
        if (std::abs(shape.value_at(b[i]) - mirrored) > tol) return false;
    }
    return true;
}

DesignedPulse::DesignedPulse(PulseShape shape, double tau_s, double intended_angle)
    : shape_(std::move(shape)), tau_s_(tau_s), intended_angle_(intended_angle) {
    if (!std::isfinite(tau_s_) || tau_s_ < 0.0 || tau_s_ > shape_.total_duration())
        throw std::invalid_argument("tau_s " + fmt(tau_s_) + " must lie in [0, " +
                                    fmt(shape_.total_duration()) + "]");
    if (!std::isfinite(intended_angle_))
        throw std::invalid_argument("intended angle must be finite");
    const double actual = rotation_angle(shape_);
    if (std::abs(actual - intended_angle_) > 1e-10)
        throw std::invalid_argument("shape rotation angle " + fmt(actual) +
                                    " does not match intended angle " + fmt(intended_angle_));
}

PhasePair phase_pair(const DesignedPulse& pulse) {
    const double lam_total = pulse.shape().boundary_areas().back();
    const double lam_s = cumulative_phase(pulse.shape(), pulse.tau_s());
    return {lam_total, lam_total - 2.0 * lam_s};
}

double psi(const DesignedPulse& pulse, double t) {
    return 2.0 * (cumulative_phase(pulse.shape(), t) -
                  cumulative_phase(pulse.shape(), pulse.tau_s()));
}

PulseShape make_symmetric(double tau_p, double tau_1, double a_max) {
    if (!std::isfinite(tau_p) || !(tau_p > 0.0))
        throw std::invalid_argument("make_symmetric: tau_p must be positive");
    if (!std::isfinite(tau_1) || !(tau_1 > 0.0) || !(2.0 * tau_1 < tau_p))
        throw std::invalid_argument("make_symmetric: need 0 < tau_1 < tau_p / 2");
    if (!std::isfinite(a_max) || !(a_max > 0.0))
        throw std::invalid_argument("make_symmetric: a_max must be positive");
    return PulseShape({{tau_1, -a_max}, {tau_p - 2.0 * tau_1, a_max}, {tau_1, -a_max}});
}

PulseShape make_asymmetric(double tau_p, double tau_1, double a_max) {
    if (!std::isfinite(tau_p) || !(tau_p > 0.0))
        throw std::invalid_argument("make_asymmetric: tau_p must be positive");
    if (!std::isfinite(tau_1) || !(tau_1 > 0.0) || !(tau_1 < tau_p))
        throw std::invalid_argument("make_asymmetric: need 0 < tau_1 < tau_p");
    if (!std::isfinite(a_max) || !(a_max > 0.0))
        throw std::invalid_argument("make_asymmetric: a_max must be positive");
    return PulseShape({{tau_1, a_max}, {tau_p - tau_1, -a_max}});
}

DesignedPulse asymmetric_family(int n, double tau_p) {
    if (n < 1) throw std::invalid_argument("asymmetric_family: n must be >= 1");
    if (!std::isfinite(tau_p) || !(tau_p > 0.0))
        throw std::invalid_argument("asymmetric_family: tau_p must be positive");
    constexpr double pi = 3.141592653589793238462643383279502884;
    const double nn = static_cast<double>(n);
    const double tau_1 = (2.0 * nn + 1.0) * tau_p / (4.0 * nn);
    const double a_max = pi * nn / tau_p;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double tau_s = tau_p * (0.5 + sign / (2.0 * nn * pi));
    return DesignedPulse(make_asymmetric(tau_p, tau_1, a_max), tau_s, pi);
}

DesignedPulse rescale_duration(const DesignedPulse& pulse, double factor) {
    if (!std::isfinite(factor) || !(factor > 0.0))
        throw std::invalid_argument("rescale_duration: factor must be positive");
    std::vector<Segment> segs = pulse.shape().segments();
    for (Segment& s : segs) {
        s.duration *= factor;
        s.amplitude /= factor;
    }
    PulseShape shape(std::move(segs));
    const double tau_s = std::min(pulse.tau_s() * factor, shape.total_duration());
    return DesignedPulse(std::move(shape), tau_s, pulse.intended_angle());
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

PulseFileContents parse_pulse_file(std::istream& in) {
    std::vector<Segment> segs;
    std::optional<double> tau_s;
    std::optional<double> angle;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto toks = split_ws(sv);
        if (toks[0] == "tau_s" || toks[0] == "angle") {
            if (toks.size() != 2)
                throw ParseError(lineno, "expected '" + std::string(toks[0]) + " <value>'");
            double v;
            if (!parse_double_token(toks[1], v))
                throw ParseError(lineno, "bad number '" + std::string(toks[1]) + "'");
            auto& slot = toks[0] == "tau_s" ? tau_s : angle;
            if (slot.has_value())
                throw ParseError(lineno, "duplicate '" + std::string(toks[0]) + "' header");
            slot = v;
            continue;
        }
        if (toks.size() != 2) throw ParseError(lineno, "expected '<duration> <amplitude>'");
        double d;
        double a;
        if (!parse_double_token(toks[0], d) || !parse_double_token(toks[1], a))
            throw ParseError(lineno, "bad number in segment line");
        if (!(d > 0.0)) throw ParseError(lineno, "segment duration must be positive");
        segs.push_back({d, a});
    }
    if (segs.empty()) throw ParseError(lineno, "no segments in pulse file");
    return {PulseShape(std::move(segs)), tau_s, angle};
}

PulseFileContents parse_pulse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_pulse_file(in);
}

DesignedPulse to_designed(const PulseFileContents& contents) {
    const double tp = contents.shape.total_duration();
    const double ts = contents.tau_s.value_or(0.5 * tp);
    const double ang = contents.angle.value_or(rotation_angle(contents.shape));
    return DesignedPulse(contents.shape, ts, ang);
}

std::string serialize_pulse_file(const DesignedPulse& pulse) {
    std::string out;
    out += "tau_s " + fmt(pulse.tau_s()) + "\n";
    out += "angle " + fmt(pulse.intended_angle()) + "\n";
    for (const Segment& s : pulse.shape().segments())
        out += fmt(s.duration) + " " + fmt(s.amplitude) + "\n";
    return out;
}

}  // namespace pulsekit
