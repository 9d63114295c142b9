#pragma once

// Baseline exponents from direct integration: fixed-step RK4 over one
// period from the canonical initial conditions, C = Phi(T), and
// lambda_i = log(Delta_i) / T on the principal branch.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "floquet/numerics.hpp"
#include "floquet/problems.hpp"

namespace floquet {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// x' = A(t) x with real A of period T.
struct PeriodicField {
    std::function<Mat2(double)> matrix;
    double period = 0.0;
};

/// Throws InvalidArgument for complex-valued coefficients.
PeriodicField fieldOf(const PlanarSystem& sys);
/// Companion form of the scalar equation (p must not vanish on the real line).
PeriodicField fieldOf(const ScalarODE& ode);

/// Classical RK4 with h = T / steps from t = 0 to t = T. Requires steps >= 16.
Vec2 integrateRK4(const PeriodicField& field, const Vec2& x0, int steps);
Vec2 integrateRK4(const PlanarSystem& sys, const Vec2& x0, int steps);

struct MonodromyResult {
    Mat2 C;
    std::array<Complex, 2> multipliers;
    std::array<Complex, 2> exponents;
    int steps = 0;
    double period = 0.0;
    /// Equal multipliers with a single eigenvector.
    bool defective = false;
};

/// A negative real multiplier yields Im(lambda) = pi / T exactly.
Complex exponentFromMultiplier(Complex multiplier, double period);

MonodromyResult monodromyMatrix(const PeriodicField& field, int steps);
MonodromyResult monodromyMatrix(const PlanarSystem& sys, int steps);
MonodromyResult monodromyMatrix(const ScalarODE& ode, int steps);

/// Trajectory of x' = A x from x0 sampled on a non-decreasing grid starting
/// at t >= 0. Each interval between grid points is covered with
/// ceil(stepsPerPeriod * dt / T) RK4 steps.
std::vector<Vec2> referenceSolution(const PeriodicField& field, const Vec2& x0, std::span<const double> grid,
                                    int stepsPerPeriod);

/// Phi(t) (columns from e1 and e2) at each grid time.
std::vector<Mat2> fundamentalMatrices(const PeriodicField& field, std::span<const double> grid, int stepsPerPeriod);

}  // namespace floquet
