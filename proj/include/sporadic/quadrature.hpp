#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>

#include "sporadic/disorder.hpp"

namespace sporadic {

/// Quadrature node inside one piece [lo, hi]. The gaps to both piece ends are
/// exact, so |x - a| stays accurate right next to a breakpoint a.
struct QuadraturePoint {
    double x;
    double lo, hi;
    double left_gap;   // x - lo
    double right_gap;  // hi - x

    double distance(double a) const {
        if (a == lo) return left_gap;
        if (a == hi) return right_gap;
        return x > a ? x - a : a - x;
    }
    double distance(std::complex<double> a) const {
        return std::hypot(distance(a.real()), a.imag());
    }
};

using Integrand = std::function<double(const QuadraturePoint&)>;

/// Adaptive integral of f over [lo, hi], split at every breakpoint inside the interval
/// so that integrable endpoint singularities (|x - a|^-s) sit on piece boundaries.
/// Throws NumericError if the error estimate stays above abs_tolerance.
double integrate_piecewise(const Integrand& f, double lo, double hi,
                           std::span<const double> breakpoints, double abs_tolerance = 1e-8);

/// Integral of g against the single-site law, with singular points of g as breakpoints.
double integrate_law(const SingleSiteLaw& law, const Integrand& g,
                     std::span<const double> breakpoints, double abs_tolerance = 1e-8);

/// int |x - alpha|^-s d mu(x)
double inverse_moment(const SingleSiteLaw& law, std::complex<double> alpha, double s,
                      double abs_tolerance = 1e-8);

}  // namespace sporadic
