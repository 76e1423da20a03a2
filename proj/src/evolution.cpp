#include "pulsekit/evolution.hpp"

#include "pulsekit/functionals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

namespace pulsekit {

namespace {

const std::complex<double> kI(0.0, 1.0);

}  // namespace

SystemModel::SystemModel(OperatorMatrix h, InvolutionOperator omega, OperatorMatrix omega_prime,
                         double eps)
    : hamiltonian(std::move(h)), kick(std::move(omega)), kick_tilt(std::move(omega_prime)),
      epsilon(eps) {
    if (hamiltonian.rows() != hamiltonian.cols() || kick_tilt.rows() != kick_tilt.cols())
        throw std::invalid_argument("SystemModel: matrices must be square");
    if (hamiltonian.rows() != kick.dimension() || kick_tilt.rows() != kick.dimension())
        throw std::invalid_argument("SystemModel: dimension mismatch between H, Omega, Omega'");
    if (!is_hermitian(hamiltonian, 1e-10))
        throw std::invalid_argument("SystemModel: H is not Hermitian");
    if (!is_hermitian(kick_tilt, 1e-10))
        throw std::invalid_argument("SystemModel: Omega' is not Hermitian");
    if (!std::isfinite(epsilon))
        throw std::invalid_argument("SystemModel: epsilon must be finite");
}

SystemModel default_model(double epsilon) {
    const OperatorMatrix sx = pauli_x();
    const OperatorMatrix sy = pauli_y();
    const OperatorMatrix sz = pauli_z();
    const OperatorMatrix id = identity_op(2);
    const OperatorMatrix h = 0.5 * kron(sz, kron(id, id)) + 0.3 * kron(sz, kron(sz, id)) +
                             0.2 * kron(sz, kron(id, sz)) + 0.15 * kron(id, kron(sx, id)) +
                             0.15 * kron(id, kron(id, sx));
    OperatorMatrix omega = kron(sx, kron(id, id));
    OperatorMatrix tilt = kron(sy + sz, kron(id, id));
    return SystemModel(h, InvolutionOperator(std::move(omega)), std::move(tilt), epsilon);
}

double default_tau_p(const SystemModel& model) {
    return 1e-2 / operator_norm(model.hamiltonian);
}

std::complex<double> parse_complex(const std::string& token) {
    const auto bad = [&]() -> std::complex<double> {
        throw std::invalid_argument("bad complex entry '" + token + "'");
    };
    const char* first = token.data();
    const char* last = token.data() + token.size();
    double v1 = 0.0;
    auto res = std::from_chars(first, last, v1);
    if (res.ec != std::errc() || !std::isfinite(v1)) return bad();
    if (res.ptr == last) return {v1, 0.0};
    std::string_view rest(res.ptr, static_cast<std::size_t>(last - res.ptr));
    if (rest == "i") return {0.0, v1};
    if (rest.front() == '+') rest.remove_prefix(1);
    double v2 = 0.0;
    auto res2 = std::from_chars(rest.data(), rest.data() + rest.size(), v2);
    if (res2.ec != std::errc() || !std::isfinite(v2)) return bad();
    std::string_view tail(res2.ptr, static_cast<std::size_t>(rest.data() + rest.size() - res2.ptr));
    if (tail != "i") return bad();
    return {v1, v2};
}

namespace {

// Pulls the next non-comment, non-blank line; tracks line numbers for errors.
bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        if (start == line.size()) continue;
        if (line[start] == '#') continue;
        return true;
    }
    return false;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

OperatorMatrix parse_matrix_block(std::istream& in, std::size_t& lineno, const char* name) {
    std::string line;
    if (!next_content_line(in, line, lineno))
        throw ParseError(std::max<std::size_t>(lineno, 1),
                         std::string("missing dimension line for ") + name);
    const auto dim_toks = tokenize(line);
    if (dim_toks.size() != 1)
        throw ParseError(lineno, std::string("expected a single dimension for ") + name);
    int d = 0;
    auto res = std::from_chars(dim_toks[0].data(), dim_toks[0].data() + dim_toks[0].size(), d);
    if (res.ec != std::errc() || res.ptr != dim_toks[0].data() + dim_toks[0].size() || d < 1 ||
        d > kMaxDimension)
        throw ParseError(lineno, "bad dimension '" + dim_toks[0] + "' for " + name);
    OperatorMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
        if (!next_content_line(in, line, lineno))
            throw ParseError(lineno, std::string("truncated matrix ") + name);
        const auto toks = tokenize(line);
        if (toks.size() != static_cast<std::size_t>(d))
            throw ParseError(lineno, "expected " + std::to_string(d) + " entries in row " +
                                         std::to_string(r + 1) + " of " + name);
        for (int c = 0; c < d; ++c) {
            try {
                m(r, c) = parse_complex(toks[c]);
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
        }
    }
    return m;
}

}  // namespace

SystemModel parse_model_file(std::istream& in, double epsilon) {
    std::size_t lineno = 0;
    OperatorMatrix h = parse_matrix_block(in, lineno, "H");
    OperatorMatrix omega = parse_matrix_block(in, lineno, "Omega");
    OperatorMatrix tilt = parse_matrix_block(in, lineno, "Omega'");
    std::string line;
    if (next_content_line(in, line, lineno))
        throw ParseError(lineno, "unexpected content after the three matrix blocks");
    return SystemModel(std::move(h), InvolutionOperator(std::move(omega)), std::move(tilt),
                       epsilon);
}

OperatorMatrix propagate(const SystemModel& model, const DesignedPulse& pulse) {
    OperatorMatrix u = identity_op(model.dimension());
    for (const Segment& seg : pulse.shape().segments()) {
        const OperatorMatrix g = model.hamiltonian +
                                 seg.amplitude * (model.kick.matrix() +
                                                  model.epsilon * model.kick_tilt);
        u = hermitian_propagator(g, seg.duration) * u;
    }
    return u;
}

OperatorMatrix ideal_kick(const SystemModel& model, const DesignedPulse& pulse) {
    const double phi_plus = phase_pair(pulse).phi_plus;
    return std::cos(phi_plus) * identity_op(model.dimension()) -
           kI * std::sin(phi_plus) * model.kick.matrix();
}

OperatorMatrix ideal_target(const SystemModel& model, const DesignedPulse& pulse) {
    const double tau_s = pulse.tau_s();
    const double tail = pulse.total_duration() - tau_s;
    return hermitian_propagator(model.hamiltonian, tail) * ideal_kick(model, pulse) *
           hermitian_propagator(model.hamiltonian, tau_s);
}

OperatorMatrix control_frame_error(const SystemModel& model, const DesignedPulse& pulse) {
    const double tau_s = pulse.tau_s();
    const double tail = pulse.total_duration() - tau_s;
    const OperatorMatrix u = propagate(model, pulse);
    return hermitian_propagator(model.hamiltonian, -tail) * u *
           hermitian_propagator(model.hamiltonian, -tau_s) -
           ideal_kick(model, pulse);
}

OperatorMatrix assemble_eta(const SystemModel& model, const DesignedPulse& pulse) {
    const InvolutionSplit h_split = split_by_involution(model.hamiltonian, model.kick);
    const InvolutionSplit w_split = split_by_involution(model.kick_tilt, model.kick);
    const OperatorMatrix& omega = model.kick.matrix();
    const OperatorMatrix& ha = h_split.anti;
    const OperatorMatrix& hc = h_split.comm;
    const OperatorMatrix& wa = w_split.anti;
    const OperatorMatrix& wc = w_split.comm;

    const EtaTau tau = eta_tau(pulse);
    const EtaQuad e0 = eta_eps0(pulse, model.epsilon);
    const EtaQuad e1 = eta_eps1(pulse, model.epsilon);

    OperatorMatrix eta = kI * 2.0 * ha * tau.eta1 + 2.0 * (ha * omega) * tau.eta2;

    eta += -(omega * wa) * e0.eta1 - kI * wa * e0.eta2 - (omega * wc) * e0.eta3 -
           kI * wc * e0.eta4;

    const OperatorMatrix mixed = (ha * wa - wa * ha) + (hc * wc - wc * hc);
    const OperatorMatrix cross = ha * wc + hc * wa;
    eta += -kI * (omega * mixed) * e1.eta1 + mixed * e1.eta2 -
           kI * (omega * (2.0 * cross)) * e1.eta3 + (2.0 * cross) * e1.eta4;
    return eta;
}

ScalingFit fit_scaling(const std::vector<ScalingSample>& samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("fit_scaling: need at least 4 samples, got " +
                                    std::to_string(samples.size()));
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::vector<double> lx(samples.size());
    std::vector<double> ly(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].param > 0.0) || !(samples[i].deviation > 0.0) ||
            !std::isfinite(samples[i].param) || !std::isfinite(samples[i].deviation))
            throw std::invalid_argument(
                "fit_scaling: degenerate fit, sample " + std::to_string(i) +
                " has non-positive param or deviation");
        lx[i] = std::log(samples[i].param);
        ly[i] = std::log(samples[i].deviation);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(samples.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_scaling: degenerate fit, params coincide");
    ScalingFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    fit.residual = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        fit.residual = std::max(fit.residual, std::abs(ly[i] - (fit.slope * lx[i] + intercept)));
    return fit;
}

ScalingSeries scaling_sweep(const SystemModel& model, const DesignedPulse& pulse, double shrink,
                            int steps, SweepKind kind) {
    if (!std::isfinite(shrink) || !(shrink > 0.0) || !(shrink < 1.0))
        throw std::invalid_argument("scaling_sweep: shrink must lie in (0, 1)");
    if (steps < 4) throw std::invalid_argument("scaling_sweep: need at least 4 steps");
    std::vector<ScalingSample> samples;
    samples.reserve(static_cast<std::size_t>(steps));
    double scale = 1.0;
    for (int k = 0; k < steps; ++k) {
        const DesignedPulse scaled = rescale_duration(pulse, scale);
        double dev = 0.0;
        if (kind == SweepKind::duration_target) {
            const SystemModel frozen(model.hamiltonian, model.kick, model.kick_tilt, 0.0);
            dev = operator_norm(propagate(frozen, scaled) - ideal_target(frozen, scaled));
        } else {
            const SystemModel shrunk(model.hamiltonian, model.kick, model.kick_tilt,
                                     model.epsilon * scale);
            dev = operator_norm(control_frame_error(shrunk, scaled) -
                                assemble_eta(shrunk, scaled));
        }
        samples.push_back({k, scaled.total_duration(), dev});
        scale *= shrink;
    }
    const ScalingFit fit = fit_scaling(samples);
    return {std::move(samples), fit.slope, fit.residual};
}

LeadingOrderReport leading_order_agreement(const SystemModel& model, const DesignedPulse& pulse,
                                           double shrink, int steps) {
    LeadingOrderReport report;
    report.series = scaling_sweep(model, pulse, shrink, steps, SweepKind::joint_residual);
    report.required_slope = 1.85;
    report.ok = report.series.slope >= report.required_slope;
    return report;
}

}  // namespace pulsekit
