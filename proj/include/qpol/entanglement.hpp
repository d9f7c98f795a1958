#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "qpol/errors.hpp"
#include "qpol/states.hpp"

namespace qpol {

class ConcurrenceValue {
public:
    static constexpr double kSlack = 1e-12;

    explicit ConcurrenceValue(double v) {
        if (!(v <= 1.0 + kSlack) || v < -kSlack)
            throw ConsistencyError("concurrence out of range: " + std::to_string(v));
        value_ = std::clamp(v, 0.0, 1.0);
    }

    double value() const { return value_; }
    operator double() const { return value_; }

private:
    double value_ = 0.0;
};

/// C = sqrt((1 - |<a|e>|^2)(1 - |<l|b>|^2)) / (1 + Re{<a|e><b|l>})
/// for N(|a, b> + |e, l>).
inline ConcurrenceValue concurrence_general(const CatSuperposition& c) {
    const complex p1 = coherent_overlap(c.first().alpha, c.second().alpha);
    const complex p2 = coherent_overlap(c.first().beta, c.second().beta);
    // 1 - |<a|e>|^2 = -expm1(-|a - e|^2), exact near a = e
    const double num = std::sqrt(std::expm1(-std::norm(c.first().alpha - c.second().alpha)) *
                                 std::expm1(-std::norm(c.first().beta - c.second().beta)));
    return ConcurrenceValue(num / (1.0 + (p1 * p2).real()));
}

/// C1, C2, C3: each of the form (1 - e^{-x}) / (1 + e^{-x}) = tanh(x / 2)
/// with x = |a - b|^2, 4|a|^2, |a|^2 respectively.
inline ConcurrenceValue concurrence_named(const NamedState& k) {
    double x = 0.0;
    switch (k.kind) {
        case NamedKind::psi1: x = (k.alpha - k.beta) * (k.alpha - k.beta); break;
        case NamedKind::psi2: x = 4.0 * k.alpha * k.alpha; break;
        case NamedKind::psi3: x = k.alpha * k.alpha; break;
    }
    const double e = std::exp(-x);
    return ConcurrenceValue((1.0 - e) / (1.0 + e));
}

inline constexpr double kRadicandClip = 1e-12;
inline constexpr double kRadicandError = 1e-9;

/// Concurrence of psi1(alpha, beta) after C(phi2) R(theta) C(phi1); independent of phi2.
inline ConcurrenceValue concurrence_after_crc(double alpha, double beta, double theta, double phi1) {
    const double x = (alpha - beta) * (alpha - beta);
    const double e = std::exp(-x);
    const double s = std::sin(2.0 * theta) * std::cos(phi1);
    // 1 + e^2 - 2e cosh(xs) = (1 - e^{-x(1-s)})(1 - e^{-x(1+s)}); the product form avoids cancellation near s = 1
    double rad = std::expm1(-x * (1.0 - s)) * std::expm1(-x * (1.0 + s));
    if (rad < 0.0) {
        if (rad < -kRadicandError) throw NegativeRadicand("concurrence radicand " + std::to_string(rad));
        if (rad < -kRadicandClip) warn("concurrence radicand " + std::to_string(rad) + " clipped to 0");
        rad = 0.0;
    }
    return ConcurrenceValue(std::sqrt(rad) / (1.0 + e));
}

}  // namespace qpol
