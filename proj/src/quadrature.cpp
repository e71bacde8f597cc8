#include "sporadic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sporadic/error.hpp"

namespace sporadic {

double integrate_piecewise(const Integrand& f, double lo, double hi,
                           std::span<const double> breakpoints, double abs_tolerance) {
    if (!(lo < hi)) {
        return 0.0;
    }
    std::vector<double> cuts{lo};
    for (const double b : breakpoints) {
        if (b > lo && b < hi) {
            cuts.push_back(b);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // tanh-sinh clusters nodes at the piece ends, where the singularities were placed
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double piece_tol = abs_tolerance / static_cast<double>(cuts.size());
        double error = 0.0;
        double l1 = 0.0;
        const double lo_k = cuts[k];
        const double hi_k = cuts[k + 1];
        const double mid = 0.5 * (lo_k + hi_k);
        // two-argument form: xc is the (signed) distance to the nearer end
        auto node = [&](double x, double xc) {
            const double gap = std::abs(xc);
            QuadraturePoint p{x, lo_k, hi_k, x - lo_k, hi_k - x};
            if (x < mid) {
                p.left_gap = gap;
            } else {
                p.right_gap = gap;
            }
            return f(p);
        };
        const double value = integrator.integrate(node, lo_k, hi_k, piece_tol * 1e-2, &error, &l1);
        if (!std::isfinite(value) || error > piece_tol) {
            throw NumericError("quadrature did not converge on [" + std::to_string(cuts[k]) + ", " +
                               std::to_string(cuts[k + 1]) + "], error estimate " +
                               std::to_string(error));
        }
        total += value;
    }
    return total;
}

double integrate_law(const SingleSiteLaw& law, const Integrand& g,
                     std::span<const double> breakpoints, double abs_tolerance) {
    const double density = law.density_bound();
    return integrate_piecewise([&](const QuadraturePoint& p) { return density * g(p); }, law.support_min(),
                               law.support_max(), breakpoints, abs_tolerance);
}

double inverse_moment(const SingleSiteLaw& law, std::complex<double> alpha, double s,
                      double abs_tolerance) {
    const double split = alpha.real();
    return integrate_law(
        law, [&](const QuadraturePoint& p) { return std::pow(p.distance(alpha), -s); },
        std::span<const double>(&split, 1), abs_tolerance);
}

}  // namespace sporadic
