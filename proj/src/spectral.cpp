#include "sporadic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "sporadic/banded_ldlt.hpp"
#include "sporadic/error.hpp"

namespace sporadic {

namespace {

constexpr double kEndpointTolerance = 1e-10;
constexpr double kNudgeStep = 1e-9;
constexpr int kMaxNudges = 5;
constexpr double kResolventTolerance = 1e-10;
constexpr int kMaxRefinements = 4;

}  // namespace

EnergyInterval EnergyInterval::make(double lower, double upper) {
    if (!(lower < upper)) {
        throw ValidationError("energy interval needs lower < upper");
    }
    return {lower, upper};
}

EnergyInterval EnergyInterval::centered(double center, double width) {
    return make(center - 0.5 * width, center + 0.5 * width);
}

ComplexShift ComplexShift::make(double energy, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("complex shift needs epsilon > 0");
    }
    return {energy, epsilon};
}

Eigen::MatrixXd to_dense(const SparseHamiltonian& H) {
    const auto n = static_cast<Eigen::Index>(H.size());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dense(i, i) = H.diagonal[static_cast<std::size_t>(i)];
    }
    for (const auto& [i, j] : H.pairs) {
        dense(i, j) = -1.0;
        dense(j, i) = -1.0;
    }
    return dense;
}

SpectrumResult dense_spectrum(const SparseHamiltonian& H, bool want_vectors, std::size_t cap) {
    if (H.size() > cap) {
        throw CapacityError("dense eigensolver capped at " + std::to_string(cap) + " sites, got " +
                            std::to_string(H.size()) + "; use interval counting instead");
    }
    SpectrumResult result;
    if (H.size() == 0) {
        if (want_vectors) {
            result.eigenvectors = Eigen::MatrixXd(0, 0);
        }
        return result;
    }
    const auto n = static_cast<Eigen::Index>(H.size());
    const int options = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (H.bandwidth() <= 1) {
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(H.diagonal.data(), n);
        Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
        for (const auto& [i, j] : H.pairs) {
            sub(i) = -1.0;
        }
        solver.computeFromTridiagonal(diag, sub, options);
    } else {
        solver.compute(to_dense(H), options);
    }
    if (solver.info() != Eigen::Success) {
        throw NumericError("symmetric eigensolver did not converge");
    }
    result.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    if (want_vectors) {
        result.eigenvectors = solver.eigenvectors();
        const Eigen::MatrixXd& Q = *result.eigenvectors;
        std::vector<double> column(H.size());
        std::vector<double> image(H.size());
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index i = 0; i < n; ++i) {
                column[static_cast<std::size_t>(i)] = Q(i, k);
            }
            apply_hamiltonian<double>(H, column, image);
            double r2 = 0.0;
            for (std::size_t i = 0; i < H.size(); ++i) {
                const double r = image[i] - result.eigenvalues[static_cast<std::size_t>(k)] * column[i];
                r2 += r * r;
            }
            result.residual_norm = std::max(result.residual_norm, std::sqrt(r2));
        }
    }
    return result;
}

InertiaCount count_below(const SparseHamiltonian& H, double energy) {
    if (H.size() == 0) {
        return {};
    }
    const double scale = H.scale();
    for (int nudge = 0; nudge <= kMaxNudges; ++nudge) {
        const double shift = energy - nudge * kNudgeStep * scale;
        BandedLdlt<double> ldlt(H, shift, kEndpointTolerance * scale);
        if (ldlt.ok()) {
            return {ldlt.negative_pivots(), nudge};
        }
    }
    throw NumericError("inertia factorization broke down at energy " + std::to_string(energy) +
                       " after " + std::to_string(kMaxNudges) + " shift nudges");
}

InertiaCount count_in_interval(const SparseHamiltonian& H, const EnergyInterval& interval) {
    const InertiaCount below_upper = count_below(H, interval.upper);
    const InertiaCount below_lower = count_below(H, interval.lower);
    const std::size_t count =
        below_upper.count >= below_lower.count ? below_upper.count - below_lower.count : 0;
    return {count, below_upper.nudges + below_lower.nudges};
}

std::size_t count_in_spectrum(const SpectrumResult& spectrum, const EnergyInterval& interval) {
    const auto& ev = spectrum.eigenvalues;
    const auto lo = std::lower_bound(ev.begin(), ev.end(), interval.lower);
    const auto hi = std::lower_bound(ev.begin(), ev.end(), interval.upper);
    return static_cast<std::size_t>(hi - lo);
}

double weighted_projector_trace(const SpectrumResult& spectrum, const EnergyInterval& interval,
                                std::span<const std::size_t> subset) {
    if (!spectrum.eigenvectors) {
        throw ValidationError("weighted_projector_trace needs eigenvectors");
    }
    const Eigen::MatrixXd& Q = *spectrum.eigenvectors;
    double trace = 0.0;
    for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
        if (!interval.contains(spectrum.eigenvalues[k])) {
            continue;
        }
        for (const std::size_t i : subset) {
            const double amplitude = Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            trace += amplitude * amplitude;
        }
    }
    return trace;
}

ResolventColumn resolvent_column(const SparseHamiltonian& H, const ComplexShift& z,
                                 std::size_t column) {
    using cplx = std::complex<double>;
    if (!(z.epsilon > 0.0)) {
        throw ValidationError("resolvent needs epsilon > 0");
    }
    if (column >= H.size()) {
        throw ValidationError("resolvent column index out of range");
    }
    const std::size_t n = H.size();
    const cplx shift = z.value();
    using SparseC = Eigen::SparseMatrix<cplx>;
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(n + 2 * H.pairs.size());
    for (std::size_t i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, cplx(H.diagonal[i]) - shift);
    }
    for (const auto& [i, j] : H.pairs) {
        triplets.emplace_back(i, j, cplx(-1.0));
        triplets.emplace_back(j, i, cplx(-1.0));
    }
    SparseC A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<SparseC> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
        throw NumericError("sparse LU of H - z failed");
    }
    auto solve = [&](std::vector<cplx>& rhs) {
        Eigen::Map<Eigen::VectorXcd> view(rhs.data(), static_cast<Eigen::Index>(n));
        Eigen::VectorXcd x = lu.solve(view);
        view = x;
    };

    ResolventColumn out;
    out.values.assign(n, cplx(0.0));
    out.values[column] = 1.0;
    solve(out.values);

    std::vector<cplx> residual(n);
    auto compute_residual = [&] {
        apply_hamiltonian<cplx>(H, out.values, residual);
        double r2 = 0.0;
        double g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = (i == column ? cplx(1.0) : cplx(0.0)) - (residual[i] - shift * out.values[i]);
            r2 += std::norm(residual[i]);
            g2 += std::norm(out.values[i]);
        }
        return std::pair{std::sqrt(r2), std::sqrt(g2)};
    };

    auto [res, gnorm] = compute_residual();
    for (int step = 0; step < kMaxRefinements && res >= kResolventTolerance * gnorm; ++step) {
        solve(residual);
        for (std::size_t i = 0; i < n; ++i) {
            out.values[i] += residual[i];
        }
        std::tie(res, gnorm) = compute_residual();
    }
    out.residual = res;
    if (!(res < kResolventTolerance * gnorm)) {
        throw NumericError("resolvent solve did not reach tolerance, residual " + std::to_string(res));
    }
    return out;
}

std::size_t interlacing_check(const SparseHamiltonian& H, const DisorderModel& model,
                              std::size_t site_index, double tau, const EnergyInterval& interval) {
    const double diag = 2.0 * H.dimension + model.coupling * tau;
    const SparseHamiltonian perturbed = with_diagonal(H, site_index, diag);
    const std::size_t before = count_in_interval(H, interval).count;
    const std::size_t after = count_in_interval(perturbed, interval).count;
    return before > after ? before - after : after - before;
}

}  // namespace sporadic
