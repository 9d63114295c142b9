#pragma once

// Planar systems whose matrix commutes with its own integral. With
//     a21 = alpha a12,   a22 = a11 + beta a12
// (alpha, beta constants) the fundamental matrix is explicit:
//     Phi(t) = Q(t) exp(f(t) + beta g(t) / 2),   f = int a11, g = int a12,
//     Q(t)   = cosh(gamma g / 2) I + g sinhc(gamma g / 2) N,
//     N      = ((-beta/2, 1), (alpha, beta/2)),   gamma^2 = 4 alpha + beta^2.

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "floquet/numerics.hpp"
#include "floquet/problems.hpp"
#include "floquet/trigpoly.hpp"

namespace floquet {

struct CommutingSystem {
    TrigPoly a11;
    TrigPoly a12;
    double alpha = 0.0;
    double beta = 0.0;
    Complex gamma;
    double period = 0.0;
    SecularFunction fPrim;
    SecularFunction gPrim;
};

/// Fits alpha and beta by coefficient-wise least squares and accepts the
/// structure when the relative residual is at most 1e-10 and both
/// constants are real. With a12 identically zero only the scalar case
/// (a21 = 0, a22 = a11) is accepted.
std::optional<CommutingSystem> detectStructure(const PlanarSystem& sys);

/// Largest Frobenius norm of B A - A B over `samples` equally spaced t in
/// [0, T), with B(t) the exact integral of A from 0 to t. Requires samples >= 8.
double verifyCommutation(const PlanarSystem& sys, int samples = 64);

Eigen::Matrix2cd fundamentalMatrix(const CommutingSystem& cs, double t);

/// lambda_pm = (f(T) + (beta +- gamma) g(T) / 2) / T, as {plus, minus}.
std::array<Complex, 2> closedFormExponents(const CommutingSystem& cs);

/// Eigenvalues of the period average of A.
std::array<Complex, 2> averageMatrixExponents(const PlanarSystem& sys);

enum class CommutingClass {
    IdentityQ,           // gamma = 0: Q = I + g N, secular growth through g
    UnboundedQ,          // gamma^2 > 0
    PeriodicSolutions,   // gamma^2 < 0, g periodic and f + beta g / 2 vanishes identically
    GlobalAttractor,     // gamma^2 < 0 and f + beta g / 2 -> -infinity
    StableZero,          // gamma^2 < 0 and f + beta g / 2 stays bounded
    BoundedNonPeriodic,  // gamma^2 < 0, Q bounded but f + beta g / 2 grows: no periodic solutions
};

std::string_view toString(CommutingClass c);

CommutingClass classify(const CommutingSystem& cs);

}  // namespace floquet
