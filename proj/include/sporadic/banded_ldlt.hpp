#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sporadic/hamiltonian.hpp"

namespace sporadic {

/// Unpivoted LDL^T factorization of a symmetric banded matrix H - shift * I.
///
/// For real shifts the signs of D give the inertia of H - shift (Sylvester's law).
/// Complex shifts give a complex symmetric factorization (no conjugation).
template <typename Scalar>
class BandedLdlt {
public:
    /// Factorizes H - shift. ok() is false if a pivot falls below pivot_tolerance
    /// in magnitude or a multiplier blows up.
    BandedLdlt(const SparseHamiltonian& H, Scalar shift, double pivot_tolerance)
        : n_(H.size()), band_(H.bandwidth()), width_(band_ + 1), data_(n_ * width_, Scalar(0)) {
        for (std::size_t i = 0; i < n_; ++i) {
            at(i, i) = Scalar(H.diagonal[i]) - shift;
        }
        for (const auto& [i, j] : H.pairs) {
            at(j, i) = Scalar(-1.0);
        }
        factorize(pivot_tolerance);
    }

    bool ok() const { return !breakdown_; }
    /// Row at which a pivot broke down, if any.
    std::optional<std::size_t> breakdown_row() const { return breakdown_; }
    std::size_t size() const { return n_; }

    /// Number of negative pivots. Only meaningful for real Scalar and ok().
    std::size_t negative_pivots() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (std::real(at(i, i)) < 0.0) {
                ++count;
            }
        }
        return count;
    }

    /// Solves (H - shift) x = rhs in place.
    void solve_in_place(std::span<Scalar> x) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t first = i > band_ ? i - band_ : 0;
            Scalar acc = x[i];
            for (std::size_t k = first; k < i; ++k) {
                acc -= at(i, k) * x[k];
            }
            x[i] = acc;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            x[i] /= at(i, i);
        }
        for (std::size_t i = n_; i-- > 0;) {
            const std::size_t last = std::min(n_ - 1, i + band_);
            Scalar acc = x[i];
            for (std::size_t k = i + 1; k <= last; ++k) {
                acc -= at(k, i) * x[k];
            }
            x[i] = acc;
        }
    }

private:
    // lower band: element (i, j) with 0 <= i - j <= band_
    Scalar& at(std::size_t i, std::size_t j) { return data_[i * width_ + (i - j)]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * width_ + (i - j)]; }

    void factorize(double pivot_tolerance) {
        std::vector<Scalar> w(width_);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t first = j > band_ ? j - band_ : 0;
            Scalar d = at(j, j);
            for (std::size_t k = first; k < j; ++k) {
                w[j - k] = at(j, k) * at(k, k);  // L(j,k) D(k)
                d -= at(j, k) * w[j - k];
            }
            if (!(std::abs(d) > pivot_tolerance)) {
                breakdown_ = j;
                return;
            }
            at(j, j) = d;
            const std::size_t last = std::min(n_ - 1, j + band_);
            for (std::size_t i = j + 1; i <= last; ++i) {
                const std::size_t lo = std::max(first, i - band_);
                Scalar acc = at(i, j);
                for (std::size_t k = lo; k < j; ++k) {
                    acc -= at(i, k) * w[j - k];
                }
                at(i, j) = acc / d;
                // Multipliers this large mean a near-singular leading block; beyond the
                // tridiagonal case the computed inertia is no longer trustworthy.
                if (band_ > 1 && std::abs(at(i, j)) > kMaxMultiplier) {
                    breakdown_ = j;
                    return;
                }
            }
        }
    }

    static constexpr double kMaxMultiplier = 1e8;

    std::size_t n_;
    std::size_t band_;
    std::size_t width_;
    std::vector<Scalar> data_;
    std::optional<std::size_t> breakdown_;
};

}  // namespace sporadic
