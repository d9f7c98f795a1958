#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include "qpol/errors.hpp"
#include "qpol/fock.hpp"
#include "qpol/quadrature.hpp"
#include "qpol/states.hpp"

namespace qpol {

inline constexpr double kUnpolarizedQ = 1.0 / (4.0 * std::numbers::pi);
inline constexpr double kQClip = 1e-12;

/// SU(2) coherent state |n, theta, phi>: amplitude
/// C(n,m)^{1/2} sin^{n-m}(theta/2) cos^m(theta/2) e^{-i m phi} on |m>|n-m>.
inline FockVector su2_state(int n, double theta, double phi) {
    if (n < 0) throw InvalidArgument("su2_state: n must be >= 0");
    FockVector v(n);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    for (int m = 0; m <= n; ++m) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
        const double mag = std::exp(0.5 * log_binom) * std::pow(s, n - m) * std::pow(c, m);
        v(m, n - m) = std::polar(mag, -m * phi);
    }
    return v;
}

/// Polar form of a complex amplitude.
struct Polar {
    double r;
    double arg;
    explicit Polar(complex z) : r(std::abs(z)), arg(r > 0 ? std::arg(z) : 0.0) {}
};

/// Q of |alpha, beta>: e^{-(|a|^2+|b|^2)} (1+z) e^z / 4pi with
/// z = [|a|c cos(pa+phi) + |b|s cos pb]^2 + [|a|c sin(pa+phi) + |b|s sin pb]^2.
inline double q_coherent(const TwoModeCoherent& st, double theta, double phi) {
    const Polar a(st.alpha), b(st.beta);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const double x = a.r * c * std::cos(a.arg + phi) + b.r * s * std::cos(b.arg);
    const double y = a.r * c * std::sin(a.arg + phi) + b.r * s * std::sin(b.arg);
    const double z = x * x + y * y;
    return (1.0 + z) * std::exp(z - st.mean_photons()) / (4.0 * std::numbers::pi);
}

namespace detail {

inline double z_term(const Polar& a, const Polar& b, double c, double s, double phi) {
    const double x = a.r * c * std::cos(a.arg + phi) + b.r * s * std::cos(b.arg);
    const double y = a.r * c * std::sin(a.arg + phi) + b.r * s * std::sin(b.arg);
    return x * x + y * y;
}

// (1 + z) e^{z - shift}, complex z
inline complex weighted_exp(complex z, double shift) { return (1.0 + z) * std::exp(z - shift); }

}  // namespace detail

/// Q of N(|alpha,beta> + |eps,lambda>). The two conjugate interference terms
/// are combined as 2 Re[(1 + z12) e^{z12}].
inline double q_superposition(const CatSuperposition& cs, double theta, double phi) {
    const auto& A = cs.first();
    const auto& B = cs.second();
    const Polar a(A.alpha), b(A.beta), e(B.alpha), l(B.beta);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const double z1 = detail::z_term(a, b, c, s, phi);
    const double z2 = detail::z_term(e, l, c, s, phi);
    const complex z12 = a.r * e.r * c * c * std::polar(1.0, a.arg - e.arg) +
                        b.r * l.r * s * s * std::polar(1.0, b.arg - l.arg) +
                        0.5 * std::sin(theta) *
                            (a.r * l.r * std::polar(1.0, a.arg - l.arg + phi) +
                             b.r * e.r * std::polar(1.0, b.arg - e.arg - phi));
    const double nA = A.mean_photons(), nB = B.mean_photons();
    const double sum = (1.0 + z1) * std::exp(z1 - nA) + (1.0 + z2) * std::exp(z2 - nB) +
                       2.0 * detail::weighted_exp(z12, 0.5 * (nA + nB)).real();
    return cs.norm2() * sum / (4.0 * std::numbers::pi);
}

/// Special forms for psi1, psi2, psi3. For psi1 the interference exponent is
/// z12 = ab + sin(theta)/2 (a^2 e^{i phi} + b^2 e^{-i phi}), the value the
/// general superposition form gives for these labels.
inline double q_named(const NamedState& k, double theta, double phi) {
    const double a = k.alpha, b = k.beta, a2 = a * a, b2 = b * b;
    const double c2 = std::pow(std::cos(0.5 * theta), 2), s2 = std::pow(std::sin(0.5 * theta), 2);
    const double st = std::sin(theta), cp = std::cos(phi);
    const double N2 = k.norm() * k.norm();
    constexpr double four_pi = 4.0 * std::numbers::pi;
    switch (k.kind) {
        case NamedKind::psi1: {
            const double shift = a2 + b2;
            const double z1 = a2 * c2 + b2 * s2 + a * b * st * cp;
            const double z2 = b2 * c2 + a2 * s2 + a * b * st * cp;
            const complex z12 = a * b + 0.5 * st * (a2 * std::polar(1.0, phi) + b2 * std::polar(1.0, -phi));
            return N2 / four_pi *
                   ((1 + z1) * std::exp(z1 - shift) + (1 + z2) * std::exp(z2 - shift) +
                    2.0 * detail::weighted_exp(z12, shift).real());
        }
        case NamedKind::psi2: {
            const double z1 = a2 * (1 + st * cp);
            const double z12 = -z1;
            return N2 / (2.0 * std::numbers::pi) *
                   ((1 + z1) * std::exp(z1 - 2 * a2) + (1 + z12) * std::exp(z12 - 2 * a2));
        }
        case NamedKind::psi3: {
            const double z1 = a2 * c2, z2 = a2 * s2;
            const complex z12 = a2 * 0.5 * st * std::polar(1.0, phi);
            return N2 / four_pi *
                   ((1 + z1) * std::exp(z1 - a2) + (1 + z2) * std::exp(z2 - a2) +
                    2.0 * detail::weighted_exp(z12, a2).real());
        }
    }
    return 0.0;
}

/// psi1 special form exactly as printed, with the real interference exponent
/// z12 = |a||b| (1 + sin(theta) cos(phi)). Kept for the arbitration report.
inline double q_psi1_printed(double alpha, double beta, double theta, double phi) {
    const double a = std::abs(alpha), b = std::abs(beta), a2 = a * a, b2 = b * b;
    const double c2 = std::pow(std::cos(0.5 * theta), 2), s2 = std::pow(std::sin(0.5 * theta), 2);
    const double sc = std::sin(theta) * std::cos(phi);
    const double z1 = a2 * c2 + b2 * s2 + a * b * sc;
    const double z2 = b2 * c2 + a2 * s2 + a * b * sc;
    const double z12 = a * b * (1 + sc);
    const double N2 = NamedState::psi1(alpha, beta).norm() * NamedState::psi1(alpha, beta).norm();
    const double shift = a2 + b2;
    return N2 / (4.0 * std::numbers::pi) *
           ((1 + z1) * std::exp(z1 - shift) + (1 + z2) * std::exp(z2 - shift) + 2 * (1 + z12) * std::exp(z12 - shift));
}

/// A Q function on the sphere together with a tag naming where it came from.
/// Rounding negatives down to -1e-12 are returned as 0.
class QSampler {
public:
    using Fn = std::function<double(double, double)>;

    QSampler(std::string tag, Fn fn) : tag_(std::move(tag)), fn_(std::move(fn)) {}

    double operator()(double theta, double phi) const {
        const double q = fn_(theta, phi);
        if (q < 0.0) {
            if (q < -kQClip)
                throw ConsistencyError("Q function negative (" + std::to_string(q) + ") for sampler " + tag_);
            return 0.0;
        }
        return q;
    }

    const std::string& tag() const { return tag_; }

private:
    std::string tag_;
    Fn fn_;
};

inline QSampler coherent_sampler(const TwoModeCoherent& s) {
    return {"coherent", [s](double t, double p) { return q_coherent(s, t, p); }};
}

inline QSampler superposition_sampler(const CatSuperposition& c) {
    return {"superposition", [c](double t, double p) { return q_superposition(c, t, p); }};
}

inline QSampler named_sampler(const NamedState& k) {
    return {std::string("named:") + to_string(k.kind), [k](double t, double p) { return q_named(k, t, p); }};
}

inline QSampler unpolarized_sampler() {
    return {"unpolarized", [](double, double) { return kUnpolarizedQ; }};
}

struct DegreeOfPolarization {
    double distance = 0.0;  // D
    double degree = 0.0;    // P = D / (1 + D)

    static DegreeOfPolarization from_distance(double d) { return {d, d / (1.0 + d)}; }
};

inline constexpr double kNormalizationCheck = 1e-6;

inline double q_integral(const QSampler& q, const SphereGrid& grid) {
    return grid.integrate([&](double t, double p) { return q(t, p); });
}

/// D = 4 pi int (Q - 1/4pi)^2 dOmega on the grid, P = D / (1 + D).
/// Throws UnnormalizedSampler when the grid integral of Q is off by more than 1e-6.
inline DegreeOfPolarization degree_of_polarization(const QSampler& q, const SphereGrid& grid) {
    double total = 0.0, dist = 0.0;
    for (const auto& t : grid.theta_nodes()) {
        double ring = 0.0, ring_d = 0.0;
        for (int j = 0; j < grid.phi_count(); ++j) {
            const double v = q(t.theta, grid.phi(j));
            ring += v;
            ring_d += (v - kUnpolarizedQ) * (v - kUnpolarizedQ);
        }
        total += t.weight * ring;
        dist += t.weight * ring_d;
    }
    total *= grid.phi_weight();
    dist *= grid.phi_weight();
    if (std::abs(total - 1.0) > kNormalizationCheck)
        throw UnnormalizedSampler("Q sampler '" + q.tag() + "' integrates to " + std::to_string(total) +
                                  "; raise the cutoff or the grid resolution");
    return DegreeOfPolarization::from_distance(4.0 * std::numbers::pi * dist);
}

/// Closed-form P of |alpha, 0> as a function of nbar = |alpha|^2.
inline double dop_h_analytic(double nbar) {
    if (nbar < 0.0) throw InvalidArgument("dop_h_analytic: nbar must be >= 0");
    // 0/0 at the origin; P ~ nbar^2 / 3 + O(nbar^3)
    if (nbar < 1e-8) return 0.0;
    return 1.0 - 4.0 * nbar / (1.0 + 2.0 * nbar * (1.0 + nbar) - std::exp(-2.0 * nbar));
}

/// |<x, y|alpha, beta>|^2 with x = (a + a^dagger)/2: independent Gaussians of
/// variance 1/4 centred on (Re alpha, Re beta).
inline double amplitude_density(const TwoModeCoherent& s, double x, double y) {
    const double dx = x - s.alpha.real(), dy = y - s.beta.real();
    return 2.0 / std::numbers::pi * std::exp(-2.0 * (dx * dx + dy * dy));
}

inline std::pair<double, double> amplitude_means(const TwoModeCoherent& s) { return {s.alpha.real(), s.beta.real()}; }

}  // namespace qpol
