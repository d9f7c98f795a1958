#pragma once

// Brute-force ground truth in the truncated number basis. Nothing here uses
// the closed forms of stokes.hpp, polarization.hpp or entanglement.hpp; states
// are expanded in |n1>|n2>, operators are built from the mode operators, and
// every quantity is a direct sum or matrix product.

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qpol/entanglement.hpp"
#include "qpol/errors.hpp"
#include "qpol/fock.hpp"
#include "qpol/polarization.hpp"
#include "qpol/states.hpp"
#include "qpol/stokes.hpp"

namespace qpol {

namespace detail {

// e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff
inline Eigen::VectorXcd poisson_amplitudes(complex a, int cutoff) {
    Eigen::VectorXcd c(cutoff + 1);
    c[0] = std::exp(-0.5 * std::norm(a));
    for (int n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * a / std::sqrt(static_cast<double>(n));
    return c;
}

inline FockVector product_state(const TwoModeCoherent& s, int cutoff) {
    const auto c1 = poisson_amplitudes(s.alpha, cutoff);
    const auto c2 = poisson_amplitudes(s.beta, cutoff);
    FockVector v(cutoff);
    for (int n1 = 0; n1 <= cutoff; ++n1)
        for (int n2 = 0; n2 <= cutoff; ++n2) v(n1, n2) = c1[n1] * c2[n2];
    return v;
}

inline void check_tail(const TwoModeCoherent& s, int cutoff) {
    const double t1 = poisson_tail(std::norm(s.alpha), cutoff);
    const double t2 = poisson_tail(std::norm(s.beta), cutoff);
    const double tail = t1 + t2 - t1 * t2;
    if (tail >= kTailTolerance)
        throw CutoffTooSmall("cutoff " + std::to_string(cutoff) + " leaves tail mass " + std::to_string(tail) +
                             "; need at least " + std::to_string(recommended_cutoff(s)));
}

// sqrt(C(n, m)) for n < size, from Pascal's triangle
class SqrtBinomials {
public:
    static constexpr int kMaxN = 400;

    static const SqrtBinomials& instance() {
        static const SqrtBinomials table;
        return table;
    }

    double operator()(int n, int m) const { return rows_[n][m]; }

private:
    SqrtBinomials() : rows_(kMaxN + 1) {
        std::vector<double> prev{1.0};
        for (int n = 0; n <= kMaxN; ++n) {
            std::vector<double> row(n + 1, 1.0);
            for (int m = 1; m < n; ++m) row[m] = prev[m - 1] + prev[m];
            rows_[n].resize(n + 1);
            for (int m = 0; m <= n; ++m) rows_[n][m] = std::sqrt(row[m]);
            prev = std::move(row);
        }
    }

    std::vector<std::vector<double>> rows_;
};

}  // namespace detail

/// |alpha, beta> in the number basis, renormalized after truncation.
inline FockVector encode_coherent(const TwoModeCoherent& s, int cutoff) {
    detail::check_tail(s, cutoff);
    auto v = detail::product_state(s, cutoff);
    const double n = v.norm();
    if (std::abs(n - 1.0) >= 1e-10) throw ConsistencyError("coherent encoding renormalization " + std::to_string(n));
    v.amplitudes() /= n;
    return v;
}

inline FockVector encode_coherent(const TwoModeCoherent& s) { return encode_coherent(s, recommended_cutoff(s)); }

/// N (|A> + |B>) using the closed-form N. The result's norm is checked
/// against 1, which validates norm_constant independently.
inline FockVector encode_superposition(const CatSuperposition& c, int cutoff) {
    detail::check_tail(c.first(), cutoff);
    detail::check_tail(c.second(), cutoff);
    auto v = detail::product_state(c.first(), cutoff);
    v.amplitudes() += detail::product_state(c.second(), cutoff).amplitudes();
    v.amplitudes() *= c.norm();
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-9)
        throw ConsistencyError("superposition encoding has norm " + std::to_string(n) + " instead of 1");
    return v;
}

inline FockVector encode_superposition(const CatSuperposition& c) {
    return encode_superposition(c, recommended_cutoff(c));
}

/// Annihilation operator of mode 1 or 2.
inline FockOperator annihilation(int cutoff, int mode) {
    if (mode != 1 && mode != 2) throw InvalidArgument("mode must be 1 or 2");
    const auto side = FockVector::side(cutoff);
    std::vector<Eigen::Triplet<complex>> t;
    for (int n1 = 0; n1 <= cutoff; ++n1)
        for (int n2 = 0; n2 <= cutoff; ++n2) {
            const int n = mode == 1 ? n1 : n2;
            if (n == 0) continue;
            const auto from = static_cast<Eigen::Index>(n1) * side + n2;
            const auto to = mode == 1 ? from - side : from - 1;
            t.emplace_back(to, from, std::sqrt(static_cast<double>(n)));
        }
    FockOperator::Matrix m(side * side, side * side);
    m.setFromTriplets(t.begin(), t.end());
    return {cutoff, std::move(m)};
}

/// S0..S3 assembled from the mode operators.
struct StokesMatrices {
    std::array<FockOperator, 4> s;

    explicit StokesMatrices(int cutoff) : s(build(cutoff)) {}

    const FockOperator& operator[](int i) const { return s[i]; }

private:
    static std::array<FockOperator, 4> build(int cutoff) {
        if (cutoff < 1) throw InvalidArgument("stokes_matrices: cutoff must be >= 1");
        const auto a1 = annihilation(cutoff, 1), a2 = annihilation(cutoff, 2);
        const auto c1 = a1.adjoint(), c2 = a2.adjoint();
        const complex i(0, 1);
        return {c1 * a1 + c2 * a2, c1 * a1 - c2 * a2, c1 * a2 + c2 * a1, i * (c2 * a1 - c1 * a2)};
    }
};

/// Cached per cutoff; safe to call concurrently.
inline std::shared_ptr<const StokesMatrices> stokes_matrices(int cutoff) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const StokesMatrices>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[cutoff];
    if (!slot) slot = std::make_shared<const StokesMatrices>(cutoff);
    return slot;
}

inline complex inner(const FockVector& u, const FockVector& v) { return u.amplitudes().dot(v.amplitudes()); }

/// <v|op|v> / <v|v>
inline complex expectation(const FockOperator& op, const FockVector& v) {
    return inner(v, op * v) / v.amplitudes().squaredNorm();
}

inline double fidelity(const FockVector& u, const FockVector& v) {
    return std::norm(inner(u, v)) / (u.amplitudes().squaredNorm() * v.amplitudes().squaredNorm());
}

inline constexpr double kImagWarn = 1e-10;
inline constexpr double kImagError = 1e-8;

namespace detail {

inline double real_expectation(complex value, const char* what) {
    const double residue = std::abs(value.imag());
    if (residue > kImagError)
        throw NonHermitianExpectation(std::string(what) + " has imaginary part " + std::to_string(value.imag()));
    if (residue > kImagWarn) warn(std::string(what) + " imaginary residue " + std::to_string(value.imag()));
    return value.real();
}

}  // namespace detail

/// Stokes moments as quadratic forms of the Stokes matrices.
inline StokesMoments oracle_stokes(const FockVector& v) {
    const auto S = stokes_matrices(v.cutoff());
    std::array<double, 4> mean{}, second{};
    const char* names[] = {"<S0>", "<S1>", "<S2>", "<S3>"};
    const char* names2[] = {"<S0^2>", "<S1^2>", "<S2^2>", "<S3^2>"};
    for (int i = 0; i < 4; ++i) {
        const auto sv = (*S)[i] * v;
        mean[i] = detail::real_expectation(inner(v, sv) / v.amplitudes().squaredNorm(), names[i]);
        second[i] =
            detail::real_expectation(inner(v, (*S)[i] * sv) / v.amplitudes().squaredNorm(), names2[i]);
    }
    return StokesMoments::from_moments(mean, second);
}

/// exp(i t H) v by Taylor series on sub-steps of size |t| ||H||_1 <= 1.
inline FockVector evolve(const FockOperator& H, double t, const FockVector& v) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * H.norm1())));
    const complex dt(0, t / steps);
    Eigen::VectorXcd x = v.amplitudes();
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd term = x, sum = x;
        for (int k = 1; k < 80; ++k) {
            term = (dt / static_cast<double>(k)) * (H.matrix() * term);
            sum += term;
            if (term.norm() < 1e-17 * sum.norm()) break;
        }
        x = std::move(sum);
    }
    return {v.cutoff(), std::move(x)};
}

/// Q(theta, phi) = sum_n (n+1)/4pi |<n, theta, phi|v>|^2, stopping once the
/// photon-number weight left above n is below 1e-12 of the total.
inline double q_fock(const FockVector& v, double theta, double phi) {
    const int nmax = v.cutoff();
    const auto w = v.photon_number_weights();
    double total = 0.0;
    for (double x : w) total += x;
    int top = 2 * nmax;
    double tail = 0.0;
    while (top > 0 && tail + w[top] < kTailTolerance * total) tail += w[top--];
    if (top > detail::SqrtBinomials::kMaxN) throw InvalidArgument("q_fock: cutoff too large");

    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    std::vector<double> cp(top + 1), sp(top + 1);
    cp[0] = sp[0] = 1.0;
    for (int k = 1; k <= top; ++k) {
        cp[k] = cp[k - 1] * c;
        sp[k] = sp[k - 1] * s;
    }
    std::vector<complex> phase(nmax + 1);
    for (int m = 0; m <= nmax; ++m) phase[m] = std::polar(1.0, m * phi);

    const auto& binom = detail::SqrtBinomials::instance();
    double q = 0.0;
    for (int n = 0; n <= top; ++n) {
        complex amp = 0.0;
        for (int m = std::max(0, n - nmax); m <= std::min(n, nmax); ++m)
            amp += binom(n, m) * sp[n - m] * cp[m] * phase[m] * v(m, n - m);
        q += (n + 1) * std::norm(amp);
    }
    return q / (4.0 * std::numbers::pi);
}

inline QSampler fock_sampler(FockVector v) {
    auto shared = std::make_shared<const FockVector>(std::move(v));
    return {"fock-oracle", [shared](double t, double p) { return q_fock(*shared, t, p); }};
}

/// Reduced state of mode 1, Tr_2 |v><v|, normalized to unit trace.
inline Eigen::MatrixXcd reduced_density_mode1(const FockVector& v) {
    const auto M = v.matrix();
    Eigen::MatrixXcd rho = M * M.adjoint();
    return rho / rho.trace().real();
}

inline double purity(const FockVector& v) { return reduced_density_mode1(v).squaredNorm(); }

/// 1 - Tr rho_1^2, accumulated as 2 sum_{i<j, k<l} |M_ik M_jl - M_il M_jk|^2 / |M|^4.
/// The sum of non-negative 2x2 minors keeps relative accuracy when the state is
/// nearly a product, where 1 - purity would cancel to rounding.
inline double linear_entropy(const FockVector& v) {
    const auto M = v.matrix();
    const Eigen::Index n = M.rows();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) {
                const complex mik = M(i, k), mjk = M(j, k);
                if (mik == 0.0 && mjk == 0.0) continue;
                for (Eigen::Index l = k + 1; l < n; ++l) acc += std::norm(mik * M(j, l) - M(i, l) * mjk);
            }
    const double n2 = v.amplitudes().squaredNorm();
    return 2.0 * acc / (n2 * n2);
}

/// I-concurrence sqrt(2 (1 - Tr rho_1^2)).
inline ConcurrenceValue purity_concurrence(const FockVector& v) {
    return ConcurrenceValue(std::sqrt(std::max(0.0, 2.0 * linear_entropy(v))));
}

/// x_k = (a_k + a_k^dagger) / 2
inline FockOperator amplitude_operator(int cutoff, int mode) {
    const auto a = annihilation(cutoff, mode);
    return complex(0.5) * (a + a.adjoint());
}

inline std::pair<double, double> oracle_amplitude_means(const FockVector& v) {
    return {detail::real_expectation(expectation(amplitude_operator(v.cutoff(), 1), v), "<x>"),
            detail::real_expectation(expectation(amplitude_operator(v.cutoff(), 2), v), "<y>")};
}

namespace detail {

// <x|n> for the x = (a + a^dagger)/2 convention: 2^{1/4} phi_n(sqrt(2) x),
// phi_n the Hermite functions of X = (a + a^dagger)/sqrt(2).
inline Eigen::VectorXd amplitude_eigenfunctions(double x, int cutoff) {
    Eigen::VectorXd h(cutoff + 1);
    const double X = std::sqrt(2.0) * x;
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * X * X);
    if (cutoff >= 1) h[1] = std::sqrt(2.0) * X * h[0];
    for (int n = 1; n < cutoff; ++n)
        h[n + 1] = std::sqrt(2.0 / (n + 1)) * X * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
    return h * std::pow(2.0, 0.25);
}

}  // namespace detail

/// |<x, y|v>|^2 from the Hermite-function expansion of v. Works for any
/// encoded state, superpositions included.
inline double amplitude_density_fock(const FockVector& v, double x, double y) {
    const auto hx = detail::amplitude_eigenfunctions(x, v.cutoff());
    const auto hy = detail::amplitude_eigenfunctions(y, v.cutoff());
    const complex psi = hx.cast<complex>().transpose() * v.matrix() * hy.cast<complex>();
    return std::norm(psi) / v.amplitudes().squaredNorm();
}

/// rho = sum_n p_n / (n+1) sum_k |k, n-k><k, n-k|, kept for total photon
/// number n <= cutoff so that every block is complete.
class UnpolarizedDensity {
public:
    UnpolarizedDensity(std::vector<double> p, int cutoff) : cutoff_(cutoff) {
        if (cutoff < 0) throw InvalidArgument("UnpolarizedDensity: cutoff must be >= 0");
        for (double x : p)
            if (!(x >= 0.0)) throw InvalidArgument("UnpolarizedDensity: p_n must be non-negative");
        if (static_cast<int>(p.size()) > cutoff + 1) p.resize(cutoff + 1);
        p_ = std::move(p);
    }

    int cutoff() const { return cutoff_; }
    const std::vector<double>& distribution() const { return p_; }

    /// 1 - sum of the retained p_n.
    double tail() const {
        double s = 0.0;
        for (double x : p_) s += x;
        return 1.0 - s;
    }

    double element(int n1, int n2) const {
        const int n = n1 + n2;
        return n < static_cast<int>(p_.size()) ? p_[n] / (n + 1) : 0.0;
    }

    FockOperator matrix() const {
        const auto side = FockVector::side(cutoff_);
        std::vector<Eigen::Triplet<complex>> t;
        for (int n1 = 0; n1 <= cutoff_; ++n1)
            for (int n2 = 0; n2 <= cutoff_; ++n2)
                if (const double e = element(n1, n2); e != 0.0) t.emplace_back(n1 * side + n2, n1 * side + n2, e);
        FockOperator::Matrix m(side * side, side * side);
        m.setFromTriplets(t.begin(), t.end());
        return {cutoff_, std::move(m)};
    }

    double trace() const {
        double s = 0.0;
        for (int n1 = 0; n1 <= cutoff_; ++n1)
            for (int n2 = 0; n2 <= cutoff_; ++n2) s += element(n1, n2);
        return s;
    }

    /// Frobenius norm of [rho, op].
    double commutator_norm(const FockOperator& op) const {
        const auto rho = matrix();
        return (rho * op - op * rho).norm();
    }

    /// Q from the projector sum, using only the diagonal of rho.
    double q(double theta, double phi) const {
        (void)phi;  // rho is diagonal in the number basis
        const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
        const auto& binom = detail::SqrtBinomials::instance();
        double q = 0.0;
        for (int n = 0; n < static_cast<int>(p_.size()); ++n) {
            double proj = 0.0;
            for (int m = 0; m <= n; ++m) {
                const double amp = binom(n, m) * std::pow(s, n - m) * std::pow(c, m);
                proj += element(m, n - m) * amp * amp;
            }
            q += (n + 1) * proj;
        }
        return q / (4.0 * std::numbers::pi);
    }

private:
    int cutoff_;
    std::vector<double> p_;
};

inline UnpolarizedDensity unpolarized_fixture(std::vector<double> p, int cutoff) { return {std::move(p), cutoff}; }

inline QSampler density_sampler(const UnpolarizedDensity& rho) {
    return {"unpolarized-fixture", [rho](double t, double p) { return rho.q(t, p); }};
}

}  // namespace qpol
