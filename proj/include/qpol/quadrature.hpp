#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qpol {

struct QuadNode {
    double x;
    double w;
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
inline std::vector<QuadNode> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::vector<QuadNode> nodes(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = {-z, w};
        nodes[n - 1 - i] = {z, w};
    }
    if (n % 2 == 1) nodes[n / 2].x = 0.0;
    return nodes;
}

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times the
/// periodic trapezoid in phi. integrate(f) approximates
/// int_0^{2pi} int_0^pi f(theta, phi) sin(theta) dtheta dphi.
class SphereGrid {
public:
    static constexpr int kDefaultTheta = 64;
    static constexpr int kDefaultPhi = 128;
    static constexpr double kThetaPerPhoton = 2.0;
    static constexpr double kPhiPerPhoton = 4.0;

    struct ThetaNode {
        double theta;
        double weight;
    };

    explicit SphereGrid(int theta_nodes = kDefaultTheta, int phi_nodes = kDefaultPhi) : phi_count_(phi_nodes) {
        if (theta_nodes < 1 || phi_nodes < 1) throw std::invalid_argument("SphereGrid: node counts must be positive");
        for (const auto& q : gauss_legendre(theta_nodes)) theta_.push_back({std::acos(q.x), q.w});
    }

    /// Q sharpens with optical power, so node counts grow as
    /// ceil(c (1 + nbar)) above the 64 x 128 floor.
    static SphereGrid for_photon_number(double nbar, int min_theta = kDefaultTheta, int min_phi = kDefaultPhi) {
        const int t = std::max(min_theta, static_cast<int>(std::ceil(kThetaPerPhoton * (1.0 + nbar))));
        const int p = std::max(min_phi, static_cast<int>(std::ceil(kPhiPerPhoton * (1.0 + nbar))));
        return SphereGrid(t, p);
    }

    const std::vector<ThetaNode>& theta_nodes() const { return theta_; }
    int phi_count() const { return phi_count_; }
    double phi(int j) const { return 2.0 * std::numbers::pi * j / phi_count_; }
    double phi_weight() const { return 2.0 * std::numbers::pi / phi_count_; }

    template <class F>
    double integrate(F&& f) const {
        double total = 0.0;
        for (const auto& t : theta_) {
            double ring = 0.0;
            for (int j = 0; j < phi_count_; ++j) ring += f(t.theta, phi(j));
            total += t.weight * ring;
        }
        return total * phi_weight();
    }

private:
    std::vector<ThetaNode> theta_;
    int phi_count_;
};

}  // namespace qpol
