#include "pulsekit/functionals.hpp"

#include <cmath>
#include <cstdint>
#include <functional>

namespace pulsekit {

namespace {

// On a segment [u, u+h] with amplitude a the integrand phase is
// theta(t) = theta0 + beta (t - u), theta0 = phi_plus - 2 Lambda(u),
// beta = -2a. With z = beta h the four elementary integrals reduce to
//   int_0^h cos(beta x) dx      = h K1,   int_0^h sin(beta x) dx      = h K2,
//   int_0^h x cos(beta x) dx    = h^2 K3, int_0^h x sin(beta x) dx    = h^2 K4.
// Near z = 0 the closed forms cancel catastrophically, so a short Taylor
// series takes over below |z| = 1e-2 (worst-case truncation ~1e-15 there).
struct TrigKernels {
    double k1;
    double k2;
    double k3;
    double k4;
};

TrigKernels trig_kernels(double z) {
    TrigKernels k;
    if (std::abs(z) < 1e-2) {
        const double z2 = z * z;
        k.k1 = 1.0 - (z2 / 6.0) * (1.0 - (z2 / 20.0) * (1.0 - z2 / 42.0));
        k.k2 = (z / 2.0) * (1.0 - (z2 / 12.0) * (1.0 - z2 / 30.0));
        k.k3 = 0.5 - (z2 / 8.0) * (1.0 - (z2 / 18.0) * (1.0 - z2 / 40.0));
        k.k4 = (z / 3.0) * (1.0 - (z2 / 10.0) * (1.0 - (z2 / 28.0) * (1.0 - z2 / 54.0)));
        return k;
    }
    const double s = std::sin(z);
    const double half = std::sin(0.5 * z);
    const double one_minus_cos = 2.0 * half * half;
    const double c = std::cos(z);
    k.k1 = s / z;
    k.k2 = one_minus_cos / z;
    k.k3 = (z * s - one_minus_cos) / (z * z);
    k.k4 = (s - z * c) / (z * z);
    return k;
}

struct SegmentSums {
    double eta1 = 0.0;    // int (t - tau_s) V sin(phi_minus - psi)
    double eta2 = 0.0;    // int (t - tau_s) V cos(phi_minus - psi)
    double v_sin = 0.0;   // int V sin(phi_minus - psi)
    double v_cos = 0.0;   // int V cos(phi_minus - psi)
    double moment = 0.0;  // int (t - tau_s) V
};

// Single exact pass over the segments. Uses the identity
// phi_minus - psi(t) = phi_plus - 2 Lambda(t), which removes tau_s from the
// phase and leaves it only in the (t - tau_s) weights.
SegmentSums accumulate(const DesignedPulse& pulse) {
    const PulseShape& shape = pulse.shape();
    const double phi_plus = shape.boundary_areas().back();
    const double tau_s = pulse.tau_s();
    SegmentSums out;
    for (std::size_t k = 0; k < shape.segment_count(); ++k) {
        const double a = shape.segments()[k].amplitude;
        const double h = shape.segments()[k].duration;
        const double u = shape.boundaries()[k];
        const double theta0 = phi_plus - 2.0 * shape.boundary_areas()[k];
        const TrigKernels kr = trig_kernels(-2.0 * a * h);
        const double s0 = std::sin(theta0);
        const double c0 = std::cos(theta0);
        const double int_cos0 = h * kr.k1;
        const double int_sin0 = h * kr.k2;
        const double int_x_cos0 = h * h * kr.k3;
        const double int_x_sin0 = h * h * kr.k4;
        const double int_sin = s0 * int_cos0 + c0 * int_sin0;
        const double int_cos = c0 * int_cos0 - s0 * int_sin0;
        const double int_x_sin = s0 * int_x_cos0 + c0 * int_x_sin0;
        const double int_x_cos = c0 * int_x_cos0 - s0 * int_x_sin0;
        const double off = u - tau_s;
        out.eta1 += a * (off * int_sin + int_x_sin);
        out.eta2 += a * (off * int_cos + int_x_cos);
        out.v_sin += a * int_sin;
        out.v_cos += a * int_cos;
        out.moment += a * h * (off + 0.5 * h);
    }
    return out;
}

}  // namespace

EtaTau eta_tau(const DesignedPulse& pulse) {
    const SegmentSums s = accumulate(pulse);
    return {s.eta1, s.eta2};
}

EtaQuad eta_eps0(const DesignedPulse& pulse, double epsilon) {
    const SegmentSums s = accumulate(pulse);
    const double phi_plus = phase_pair(pulse).phi_plus;
    return {epsilon * s.v_sin, epsilon * s.v_cos, epsilon * std::sin(phi_plus) * phi_plus,
            epsilon * std::cos(phi_plus) * phi_plus};
}

EtaQuad eta_eps1(const DesignedPulse& pulse, double epsilon) {
    const EtaTau tau = eta_tau(pulse);
    const double phi_plus = phase_pair(pulse).phi_plus;
    const double m1 = first_moment(pulse);
    return {epsilon * std::sin(phi_plus) * m1, epsilon * std::cos(phi_plus) * m1,
            epsilon * tau.eta1, epsilon * tau.eta2};
}

double first_moment(const DesignedPulse& pulse) {
    return accumulate(pulse).moment;
}

std::array<double, 10> ErrorBudget::values() const {
    return {eta_tau_1,  eta_tau_2,  eta_eps0_1, eta_eps0_2, eta_eps0_3,
            eta_eps0_4, eta_eps1_1, eta_eps1_2, eta_eps1_3, eta_eps1_4};
}

ErrorBudget compute_budget(const DesignedPulse& pulse, double epsilon) {
    if (!std::isfinite(epsilon)) throw std::invalid_argument("budget: epsilon must be finite");
    const EtaTau tau = eta_tau(pulse);
    const EtaQuad e0 = eta_eps0(pulse, 1.0);
    const EtaQuad e1 = eta_eps1(pulse, 1.0);
    ErrorBudget b;
    b.tau_p = pulse.total_duration();
    b.epsilon = epsilon;
    b.eta_tau_1 = tau.eta1;
    b.eta_tau_2 = tau.eta2;
    b.eta_eps0_1 = e0.eta1;
    b.eta_eps0_2 = e0.eta2;
    b.eta_eps0_3 = e0.eta3;
    b.eta_eps0_4 = e0.eta4;
    b.eta_eps1_1 = e1.eta1;
    b.eta_eps1_2 = e1.eta2;
    b.eta_eps1_3 = e1.eta3;
    b.eta_eps1_4 = e1.eta4;
    return b;
}

double eta1_asym_closed_form(double tau_p, double tau_1, double tau_s, double a_max) {
    return a_max * (tau_1 * tau_1 - tau_p * tau_p / 2.0 - 2.0 * tau_1 * tau_s + tau_p * tau_s);
}

OracleError::OracleError(const std::string& message) : std::runtime_error(message) {}

namespace {

constexpr double kOracleTol = 1e-11;
constexpr int kOracleMaxDepth = 48;
constexpr std::int64_t kOracleBudget = 20'000'000;

struct SimpsonState {
    std::int64_t evals = 0;
};

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
                        double fmid, double fhi, double whole, double tol, int depth,
                        SimpsonState& state) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    state.evals += 2;
    if (state.evals > kOracleBudget)
        throw OracleError("quadrature_oracle: evaluation budget exhausted");
    const double flmid = f(lmid);
    const double frmid = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    const double delta = left + right - whole;
    if (depth >= kOracleMaxDepth)
        throw OracleError("quadrature_oracle: recursion depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, lo, mid, flo, flmid, fmid, left, 0.5 * tol, depth + 1, state) +
           adaptive_simpson(f, mid, hi, fmid, frmid, fhi, right, 0.5 * tol, depth + 1, state);
}

double integrate_segments(const DesignedPulse& pulse,
                          const std::function<double(double, double)>& integrand) {
    const PulseShape& shape = pulse.shape();
    SimpsonState state;
    const double tol_per_segment = kOracleTol / static_cast<double>(shape.segment_count());
    double total = 0.0;
    for (std::size_t k = 0; k < shape.segment_count(); ++k) {
        const double lo = shape.boundaries()[k];
        const double hi = shape.boundaries()[k + 1];
        const double a = shape.segments()[k].amplitude;
        const auto f = [&](double t) { return integrand(t, a); };
        const double mid = 0.5 * (lo + hi);
        state.evals += 3;
        const double flo = f(lo);
        const double fmid = f(mid);
        const double fhi = f(hi);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol_per_segment, 0, state);
    }
    return total;
}

}  // namespace

double quadrature_oracle(const DesignedPulse& pulse, Functional which, double epsilon) {
    // Phases come from cumulative_phase via phi_minus - psi(t), a different
    // route than the closed forms' per-segment prefix angles.
    const PhasePair pp = phase_pair(pulse);
    const double tau_s = pulse.tau_s();
    const auto phase = [&](double t) { return pp.phi_minus - psi(pulse, t); };
    const auto weighted_sin = [&](double t, double a) {
        return (t - tau_s) * a * std::sin(phase(t));
    };
    const auto weighted_cos = [&](double t, double a) {
        return (t - tau_s) * a * std::cos(phase(t));
    };
    const auto bare_sin = [&](double t, double a) { return a * std::sin(phase(t)); };
    const auto bare_cos = [&](double t, double a) { return a * std::cos(phase(t)); };
    const auto bare = [](double, double a) { return a; };
    const auto weighted = [&](double t, double a) { return (t - tau_s) * a; };
    switch (which) {
        case Functional::eta_tau_1:
            return integrate_segments(pulse, weighted_sin);
        case Functional::eta_tau_2:
            return integrate_segments(pulse, weighted_cos);
        case Functional::eta_eps0_1:
            return epsilon * integrate_segments(pulse, bare_sin);
        case Functional::eta_eps0_2:
            return epsilon * integrate_segments(pulse, bare_cos);
        case Functional::eta_eps0_3: {
            const double phi = integrate_segments(pulse, bare);
            return epsilon * std::sin(phi) * phi;
        }
        case Functional::eta_eps0_4: {
            const double phi = integrate_segments(pulse, bare);
            return epsilon * std::cos(phi) * phi;
        }
        case Functional::eta_eps1_1: {
            const double phi = integrate_segments(pulse, bare);
            return epsilon * std::sin(phi) * integrate_segments(pulse, weighted);
        }
        case Functional::eta_eps1_2: {
            const double phi = integrate_segments(pulse, bare);
            return epsilon * std::cos(phi) * integrate_segments(pulse, weighted);
        }
        case Functional::eta_eps1_3:
            return epsilon * integrate_segments(pulse, weighted_sin);
        case Functional::eta_eps1_4:
            return epsilon * integrate_segments(pulse, weighted_cos);
    }
    throw std::invalid_argument("quadrature_oracle: unknown functional");
}

BudgetClassification classify_budget(const ErrorBudget& budget, double tol) {
    if (!std::isfinite(tol) || !(tol > 0.0))
        throw std::invalid_argument("classify_budget: tol must be positive");
    BudgetClassification out;
    out.threshold = tol * std::max(1.0, budget.tau_p);
    const std::array<double, 10> vals = budget.values();
    for (std::size_t i = 0; i < vals.size(); ++i)
        out.flags[i] = std::abs(vals[i]) <= out.threshold ? TermFlag::zero : TermFlag::nonzero;
    return out;
}

}  // namespace pulsekit
