#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qpol/errors.hpp"
#include "qpol/states.hpp"

namespace qpol {

inline constexpr double kVarianceClip = 1e-10;

/// First and second moments of S0..S3 and the variances V_i = <S_i^2> - <S_i>^2.
struct StokesMoments {
    std::array<double, 4> mean{};
    std::array<double, 4> second{};
    std::array<double, 4> var{};

    /// Builds variances from moments. Cancellation noise down to -1e-10 is
    /// clipped to zero with a warning; anything lower is an error.
    static StokesMoments from_moments(const std::array<double, 4>& mean, const std::array<double, 4>& second) {
        StokesMoments m{mean, second, {}};
        for (int i = 0; i < 4; ++i) {
            double v = second[i] - mean[i] * mean[i];
            if (v < 0.0) {
                if (v < -kVarianceClip)
                    throw ConsistencyError("negative variance V" + std::to_string(i) + " = " + std::to_string(v));
                warn("clipping variance V" + std::to_string(i) + " = " + std::to_string(v) + " to 0");
                v = 0.0;
            }
            m.var[i] = v;
        }
        return m;
    }

    /// No validation: printed closed forms are allowed to violate V >= 0.
    static StokesMoments from_variances(const std::array<double, 4>& mean, const std::array<double, 4>& var) {
        StokesMoments m{mean, {}, var};
        for (int i = 0; i < 4; ++i) m.second[i] = var[i] + mean[i] * mean[i];
        return m;
    }
};

namespace detail {

// Normal-ordered matrix elements <A|O|B> / <A|B> for O in {S0..S3} and
// {S0^2..S3^2}, with a_k^dagger -> conj(A_k) and a_k -> B_k. For A == B these
// are the coherent-state moments; for A != B they are the bracketed
// interference terms multiplying delta.
struct StokesKernel {
    std::array<complex, 4> first;
    std::array<complex, 4> second;
};

inline StokesKernel stokes_kernel(const TwoModeCoherent& A, const TwoModeCoherent& B) {
    const complex a = std::conj(A.alpha), b = std::conj(A.beta);  // bra labels
    const complex e = B.alpha, l = B.beta;                          // ket labels
    const complex n = a * e + b * l;
    const complex s1 = a * e - b * l;
    const complex s2 = a * l + b * e;
    const complex s3 = complex(0, 1) * (b * e - a * l);
    const complex s3n = b * e - a * l;
    return {
        {n, s1, s2, s3},
        {n * n + n, s1 * s1 + n, s2 * s2 + n, n - s3n * s3n},
    };
}

}  // namespace detail

/// Moments of |alpha, beta>. All three variances equal |alpha|^2 + |beta|^2.
inline StokesMoments stokes_coherent(const TwoModeCoherent& s) {
    const double na = std::norm(s.alpha), nb = std::norm(s.beta), n = na + nb;
    const complex ab = std::conj(s.alpha) * s.beta;  // alpha* beta
    const double m1 = na - nb;
    const double m2 = 2.0 * ab.real();
    const double m3 = (complex(0, 1) * (s.alpha * std::conj(s.beta) - ab)).real();
    const double cross = 2.0 * (ab * ab).real();  // (a*b)^2 + (ab*)^2
    return StokesMoments::from_moments({n, m1, m2, m3}, {n * n + n, m1 * m1 + n, cross + n + 2 * na * nb,
                                                         -cross + n + 2 * na * nb});
}

/// Moments of N(|alpha,beta> + |eps,lambda>). Every interference bracket
/// [X + X*] delta is paired as X delta + X* delta*, which keeps the result
/// real for complex labels and reduces to the printed forms for real ones.
inline StokesMoments stokes_superposition(const CatSuperposition& c) {
    const auto kA = detail::stokes_kernel(c.first(), c.first());
    const auto kB = detail::stokes_kernel(c.second(), c.second());
    const auto kX = detail::stokes_kernel(c.first(), c.second());
    const complex d = c.delta();
    std::array<double, 4> mean{}, second{};
    for (int i = 0; i < 4; ++i) {
        mean[i] = c.norm2() * (kA.first[i].real() + kB.first[i].real() + 2.0 * (kX.first[i] * d).real());
        second[i] = c.norm2() * (kA.second[i].real() + kB.second[i].real() + 2.0 * (kX.second[i] * d).real());
    }
    return StokesMoments::from_moments(mean, second);
}

/// Literal transcription: the whole interference bracket multiplies delta
/// and the real part is kept. Differs from stokes_superposition only when
/// delta is complex. Exposed for the arbitration report.
inline StokesMoments stokes_superposition_literal(const CatSuperposition& c) {
    const auto kA = detail::stokes_kernel(c.first(), c.first());
    const auto kB = detail::stokes_kernel(c.second(), c.second());
    const auto kX = detail::stokes_kernel(c.first(), c.second());
    const complex d = c.delta();
    std::array<double, 4> mean{}, second{};
    for (int i = 0; i < 4; ++i) {
        mean[i] = c.norm2() * (kA.first[i].real() + kB.first[i].real() +
                               ((kX.first[i] + std::conj(kX.first[i])) * d).real());
        second[i] = c.norm2() * (kA.second[i].real() + kB.second[i].real() +
                                 ((kX.second[i] + std::conj(kX.second[i])) * d).real());
    }
    return StokesMoments::from_variances(mean, {second[0] - mean[0] * mean[0], second[1] - mean[1] * mean[1],
                                                second[2] - mean[2] * mean[2], second[3] - mean[3] * mean[3]});
}

/// Two ways to close the unbalanced braces in the printed V2 of psi1 and psi2.
/// inner: the "- k [..]^2" term sits inside the outer prefactor k.
/// outer: the outer prefactor multiplies only the first bracket.
enum class PrintedReading { inner, outer };

/// Printed closed forms for psi1, psi2, psi3, evaluated as written.
/// Index 0 is not printed and is taken from stokes_superposition.
/// Variances are passed through unvalidated.
inline StokesMoments stokes_named(const NamedState& k, PrintedReading reading = PrintedReading::inner) {
    const double a = k.alpha, b = k.beta;
    const double a2 = a * a, b2 = b * b;
    const double d = k.delta();
    const double N2 = k.norm() * k.norm();
    const auto base = stokes_superposition(make_named_state(k));

    std::array<double, 4> mean{base.mean[0], 0.0, 0.0, 0.0};
    std::array<double, 4> var{base.var[0], 0.0, 0.0, 0.0};
    switch (k.kind) {
        case NamedKind::psi1: {
            const double s2 = 2 * a * b + (a2 + b2) * d;
            mean[2] = 2 * N2 * s2;
            var[1] = 2 * N2 * (a2 + b2 + 2 * a * b * d + (a2 - b2) * (a2 - b2));
            const double first = 2 * a * b * (2 * a * b + d) + (a2 + b2) * (1 + (a2 + b2) * d);
            var[2] = reading == PrintedReading::inner ? 2 * N2 * (first - 2 * N2 * s2 * s2)
                                                      : 2 * N2 * first - 2 * N2 * s2 * s2;
            var[3] = 2 * N2 * (4 * a * b * (1 + a * b) - (a2 * a2 + b2 * b2) * d);
            break;
        }
        case NamedKind::psi2: {
            const double pre = 4 * N2 * a2;
            mean[2] = pre * (1 + d);
            var[1] = pre * (1 - d);
            const double first = (1 + 2 * a2) - (1 - 2 * a2) * d;
            var[2] = reading == PrintedReading::inner ? pre * (first - pre * (1 + d) * (1 + d))
                                                      : pre * first - pre * (1 + d) * (1 + d);
            var[3] = pre * (1 - d);
            break;
        }
        case NamedKind::psi3: {
            const double pre = 2 * N2 * a2;
            mean[2] = pre * d;
            var[1] = pre * (1 + a2);
            var[2] = pre * (1 + a2 * (1 - 2 * N2 * d) * d);
            var[3] = pre * (1 - a2 * d);
            break;
        }
    }
    return StokesMoments::from_variances(mean, var);
}

}  // namespace qpol
