#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qpol/errors.hpp"
#include "qpol/states.hpp"

namespace qpol {

inline constexpr double kTailTolerance = 1e-12;

/// P(n > nmax) for a Poisson distribution with the given mean.
inline double poisson_tail(double mean, int nmax) {
    if (mean <= 0.0) return 0.0;
    int n = nmax + 1;
    double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    double sum = 0.0;
    while (term > 0.0) {
        sum += term;
        ++n;
        term *= mean / n;
        if (n > mean && term < sum * 1e-18) break;
    }
    return sum;
}

/// Per-mode cutoff n_max = ceil(m + 8 sqrt(m) + 20) for per-mode mean photon
/// number m, raised if needed until the Poisson tail is below 1e-12.
inline int recommended_cutoff(double m) {
    int n = static_cast<int>(std::ceil(m + 8.0 * std::sqrt(m) + 20.0));
    while (poisson_tail(m, n) >= kTailTolerance) ++n;
    return n;
}

inline int recommended_cutoff(const TwoModeCoherent& s) {
    return recommended_cutoff(std::max(std::norm(s.alpha), std::norm(s.beta)));
}

inline int recommended_cutoff(const CatSuperposition& c) { return recommended_cutoff(c.max_mode_photons()); }

using RowMatrixXcd = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Two-mode state truncated to 0 <= n1, n2 <= cutoff. Amplitudes are stored
/// row-major in (n1, n2).
class FockVector {
public:
    explicit FockVector(int cutoff) : cutoff_(cutoff), amps_(Eigen::VectorXcd::Zero(side(cutoff) * side(cutoff))) {}

    FockVector(int cutoff, Eigen::VectorXcd amps) : cutoff_(cutoff), amps_(std::move(amps)) {
        if (amps_.size() != side(cutoff) * side(cutoff))
            throw InvalidArgument("FockVector: amplitude count does not match cutoff");
    }

    int cutoff() const { return cutoff_; }
    Eigen::Index dim() const { return amps_.size(); }
    Eigen::Index index(int n1, int n2) const { return static_cast<Eigen::Index>(n1) * side(cutoff_) + n2; }

    complex operator()(int n1, int n2) const { return amps_[index(n1, n2)]; }
    complex& operator()(int n1, int n2) { return amps_[index(n1, n2)]; }

    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Eigen::VectorXcd& amplitudes() { return amps_; }

    double norm() const { return amps_.norm(); }

    /// M(n1, n2); the reduced state of mode 1 is M M^dagger.
    Eigen::Map<const RowMatrixXcd> matrix() const {
        return {amps_.data(), side(cutoff_), side(cutoff_)};
    }

    /// Probability per total photon number n1 + n2 (length 2 cutoff + 1).
    std::vector<double> photon_number_weights() const {
        std::vector<double> w(2 * cutoff_ + 1, 0.0);
        for (int n1 = 0; n1 <= cutoff_; ++n1)
            for (int n2 = 0; n2 <= cutoff_; ++n2) w[n1 + n2] += std::norm((*this)(n1, n2));
        return w;
    }

    static Eigen::Index side(int cutoff) { return static_cast<Eigen::Index>(cutoff) + 1; }

private:
    int cutoff_;
    Eigen::VectorXcd amps_;
};

/// Operator on the truncated two-mode space.
class FockOperator {
public:
    using Matrix = Eigen::SparseMatrix<complex>;

    FockOperator(int cutoff, Matrix m) : cutoff_(cutoff), m_(std::move(m)) {}

    int cutoff() const { return cutoff_; }
    const Matrix& matrix() const { return m_; }

    FockVector operator*(const FockVector& v) const {
        check(v.cutoff());
        return {cutoff_, Eigen::VectorXcd(m_ * v.amplitudes())};
    }

    FockOperator operator*(const FockOperator& o) const {
        check(o.cutoff_);
        return {cutoff_, Matrix(m_ * o.m_)};
    }
    FockOperator operator+(const FockOperator& o) const {
        check(o.cutoff_);
        return {cutoff_, Matrix(m_ + o.m_)};
    }
    FockOperator operator-(const FockOperator& o) const {
        check(o.cutoff_);
        return {cutoff_, Matrix(m_ - o.m_)};
    }
    friend FockOperator operator*(complex s, const FockOperator& o) { return {o.cutoff_, Matrix(s * o.m_)}; }

    FockOperator adjoint() const { return {cutoff_, Matrix(m_.adjoint())}; }

    /// Frobenius norm.
    double norm() const { return m_.norm(); }

    /// Maximum absolute column sum.
    double norm1() const {
        double best = 0.0;
        for (int k = 0; k < m_.outerSize(); ++k) {
            double col = 0.0;
            for (Matrix::InnerIterator it(m_, k); it; ++it) col += std::abs(it.value());
            best = std::max(best, col);
        }
        return best;
    }

private:
    void check(int other) const {
        if (other != cutoff_) throw InvalidArgument("FockOperator: cutoff mismatch");
    }

    int cutoff_;
    Matrix m_;
};

}  // namespace qpol
