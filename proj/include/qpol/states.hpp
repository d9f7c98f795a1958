#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qpol/errors.hpp"

namespace qpol {

using complex = std::complex<double>;

/// Two-mode coherent state |alpha, beta>; mode 1 is horizontal, mode 2 vertical.
struct TwoModeCoherent {
    complex alpha{};
    complex beta{};

    double mean_photons() const { return std::norm(alpha) + std::norm(beta); }

    friend bool operator==(const TwoModeCoherent&, const TwoModeCoherent&) = default;
};

/// Single-mode overlap <a|b> = exp(-(|a|^2 + |b|^2)/2 + a* b).
inline complex coherent_overlap(complex a, complex b) {
    return std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b);
}

/// Two-mode overlap <A|B>. For the superposition terms this is the
/// interference factor delta = exp[a* e + b* l - (|a|^2+|b|^2+|e|^2+|l|^2)/2].
inline complex overlap(const TwoModeCoherent& a, const TwoModeCoherent& b) {
    return std::exp(std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta -
                    0.5 * (a.mean_photons() + b.mean_photons()));
}

inline constexpr double kDegenerateThreshold = 1e-12;

/// N for N(|A> + |B>), from |N|^-2 = 2 + 2 Re<A|B>.
inline double norm_constant(const TwoModeCoherent& a, const TwoModeCoherent& b) {
    const double inv = 2.0 + 2.0 * overlap(a, b).real();
    if (inv < kDegenerateThreshold)
        throw DegenerateSuperposition("superposition terms cancel: |N|^-2 = " + std::to_string(inv));
    return 1.0 / std::sqrt(inv);
}

/// Equal-weight, plus-sign superposition N(|A> + |B>). Immutable.
class CatSuperposition {
public:
    CatSuperposition(TwoModeCoherent a, TwoModeCoherent b)
        : first_(a), second_(b), delta_(overlap(a, b)), norm_(norm_constant(a, b)) {}

    const TwoModeCoherent& first() const { return first_; }
    const TwoModeCoherent& second() const { return second_; }
    /// <first|second>
    complex delta() const { return delta_; }
    double norm() const { return norm_; }
    double norm2() const { return norm_ * norm_; }

    /// Largest |amplitude|^2 carried by either mode of either term.
    double max_mode_photons() const {
        return std::max({std::norm(first_.alpha), std::norm(first_.beta), std::norm(second_.alpha),
                         std::norm(second_.beta)});
    }
    double max_total_photons() const { return std::max(first_.mean_photons(), second_.mean_photons()); }

private:
    TwoModeCoherent first_;
    TwoModeCoherent second_;
    complex delta_;
    double norm_;
};

enum class NamedKind { psi1, psi2, psi3 };

inline const char* to_string(NamedKind k) {
    switch (k) {
        case NamedKind::psi1: return "psi1";
        case NamedKind::psi2: return "psi2";
        case NamedKind::psi3: return "psi3";
    }
    return "?";
}

/// psi1 = N1(|a,b> + |b,a>), psi2 = N2(|-a,-a> + |a,a>), psi3 = N3(|a,0> + |0,a>)
/// with real a, b (b is ignored by psi2 and psi3).
struct NamedState {
    NamedKind kind = NamedKind::psi1;
    double alpha = 0.0;
    double beta = 0.0;

    static NamedState psi1(double a, double b) { return {NamedKind::psi1, a, b}; }
    static NamedState psi2(double a) { return {NamedKind::psi2, a, 0.0}; }
    static NamedState psi3(double a) { return {NamedKind::psi3, a, 0.0}; }

    /// Validating constructor for amplitudes that arrive as complex numbers.
    static NamedState make(NamedKind kind, complex a, complex b = {}) {
        if (a.imag() != 0.0 || b.imag() != 0.0)
            throw NonRealParameter(std::string(to_string(kind)) + " requires real amplitudes");
        return {kind, a.real(), kind == NamedKind::psi1 ? b.real() : 0.0};
    }

    /// The closed-form interference factors delta_1, delta_2, delta_3.
    double delta() const {
        switch (kind) {
            case NamedKind::psi1: return std::exp(2 * alpha * beta - (alpha * alpha + beta * beta));
            case NamedKind::psi2: return std::exp(-4 * alpha * alpha);
            case NamedKind::psi3: return std::exp(-alpha * alpha);
        }
        return 0.0;
    }

    /// N1, N2, N3 in closed form.
    double norm() const { return 1.0 / std::sqrt(2.0 * (1.0 + delta())); }

    TwoModeCoherent first() const {
        switch (kind) {
            case NamedKind::psi1: return {alpha, beta};
            case NamedKind::psi2: return {-alpha, -alpha};
            case NamedKind::psi3: return {alpha, 0.0};
        }
        return {};
    }

    TwoModeCoherent second() const {
        switch (kind) {
            case NamedKind::psi1: return {beta, alpha};
            case NamedKind::psi2: return {alpha, alpha};
            case NamedKind::psi3: return {0.0, alpha};
        }
        return {};
    }
};

inline CatSuperposition make_named_state(const NamedState& k) { return {k.first(), k.second()}; }

/// Compensator C(phi) = exp(i phi S1 / 2): |a, b> -> |a e^{i phi/2}, b e^{-i phi/2}>.
inline TwoModeCoherent phase_shift(const TwoModeCoherent& s, double phi) {
    const complex half = std::polar(1.0, 0.5 * phi);
    return {s.alpha * half, s.beta * std::conj(half)};
}

/// Rotator R(theta) = exp(i theta S3): |a, b> -> |b sin + a cos, b cos - a sin>.
inline TwoModeCoherent rotate(const TwoModeCoherent& s, double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    return {s.beta * sn + s.alpha * c, s.beta * c - s.alpha * sn};
}

/// Angles of the compensator-rotator-compensator device C(phi2) R(theta) C(phi1).
struct CrcParams {
    double phi1 = 0.0;
    double theta = 0.0;
    double phi2 = 0.0;
};

inline TwoModeCoherent crc_transform(const TwoModeCoherent& s, const CrcParams& p) {
    return phase_shift(rotate(phase_shift(s, p.phi1), p.theta), p.phi2);
}

inline CatSuperposition crc_transform(const TwoModeCoherent& a, const TwoModeCoherent& b, const CrcParams& p) {
    return {crc_transform(a, p), crc_transform(b, p)};
}

inline CatSuperposition crc_transform(const CatSuperposition& c, const CrcParams& p) {
    return crc_transform(c.first(), c.second(), p);
}

}  // namespace qpol
