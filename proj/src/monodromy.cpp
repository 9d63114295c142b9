#include "floquet/monodromy.hpp"

#include <cmath>
#include <numbers>

#include "floquet/error.hpp"

namespace floquet {

PeriodicField fieldOf(const PlanarSystem& sys)
{
    const double tol = 1e-14 * std::max({1.0, sys.a11().maxAbsCoefficient(), sys.a12().maxAbsCoefficient(),
                                         sys.a21().maxAbsCoefficient(), sys.a22().maxAbsCoefficient()});
    if (!sys.isReal(tol)) throw InvalidArgument("monodromy: the system must have real coefficients");
    return {[sys](double t) -> Mat2 { return sys.at(t).real(); }, sys.period()};
}

PeriodicField fieldOf(const ScalarODE& ode)
{
    const double tol = 1e-14 * std::max({1.0, ode.p().maxAbsCoefficient(), ode.q().maxAbsCoefficient(),
                                         ode.r().maxAbsCoefficient()});
    if (!ode.isReal(tol)) throw InvalidArgument("monodromy: the equation must have real coefficients");
    return {[ode](double t) { return ode.companionAt(t); }, ode.period()};
}

namespace {

Vec2 rk4Step(const PeriodicField& field, double t, const Vec2& x, double h)
{
    const Vec2 k1 = field.matrix(t) * x;
    const Mat2 mid = field.matrix(t + 0.5 * h);
    const Vec2 k2 = mid * (x + 0.5 * h * k1);
    const Vec2 k3 = mid * (x + 0.5 * h * k2);
    const Vec2 k4 = field.matrix(t + h) * (x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec2 advance(const PeriodicField& field, Vec2 x, double from, double to, int steps)
{
    const double h = (to - from) / steps;
    for (int i = 0; i < steps; ++i) x = rk4Step(field, from + i * h, x, h);
    return x;
}

void requireSteps(int steps)
{
    if (steps < 16) throw InvalidArgument("RK4: at least 16 steps per period are required");
}

}  // namespace

Vec2 integrateRK4(const PeriodicField& field, const Vec2& x0, int steps)
{
    requireSteps(steps);
    return advance(field, x0, 0.0, field.period, steps);
}

Vec2 integrateRK4(const PlanarSystem& sys, const Vec2& x0, int steps) { return integrateRK4(fieldOf(sys), x0, steps); }

Complex exponentFromMultiplier(Complex multiplier, double period)
{
    if (multiplier.imag() == 0.0 && multiplier.real() < 0.0)
        return {std::log(-multiplier.real()) / period, std::numbers::pi / period};
    return std::log(multiplier) / period;
}

MonodromyResult monodromyMatrix(const PeriodicField& field, int steps)
{
    requireSteps(steps);
    MonodromyResult out;
    out.steps = steps;
    out.period = field.period;
    out.C.col(0) = integrateRK4(field, Vec2(1.0, 0.0), steps);
    out.C.col(1) = integrateRK4(field, Vec2(0.0, 1.0), steps);

    const auto [m1, m2] = numerics::eig2x2(out.C.cast<Complex>());
    // real matrices: snap conjugate noise on real multipliers
    auto clean = [&](Complex m) {
        return std::abs(m.imag()) <= 1e-15 * std::abs(m) ? Complex(m.real(), 0.0) : m;
    };
    out.multipliers = {clean(m1), clean(m2)};
    out.exponents = {exponentFromMultiplier(out.multipliers[0], field.period),
                     exponentFromMultiplier(out.multipliers[1], field.period)};

    const double scale = std::max(1.0, out.C.cwiseAbs().maxCoeff());
    const bool equal = std::abs(out.multipliers[0] - out.multipliers[1]) <= 1e-10 * scale;
    const Mat2 offScalar = out.C - 0.5 * out.C.trace() * Mat2::Identity();
    out.defective = equal && offScalar.cwiseAbs().maxCoeff() > 1e-8 * scale;
    return out;
}

MonodromyResult monodromyMatrix(const PlanarSystem& sys, int steps) { return monodromyMatrix(fieldOf(sys), steps); }

MonodromyResult monodromyMatrix(const ScalarODE& ode, int steps) { return monodromyMatrix(fieldOf(ode), steps); }

std::vector<Vec2> referenceSolution(const PeriodicField& field, const Vec2& x0, std::span<const double> grid,
                                    int stepsPerPeriod)
{
    requireSteps(stepsPerPeriod);
    std::vector<Vec2> out;
    out.reserve(grid.size());
    Vec2 x = x0;
    double t = 0.0;
    for (double target : grid) {
        if (target < t) throw InvalidArgument("referenceSolution: grid must be non-decreasing and start at t >= 0");
        if (target > t) {
            const int steps = std::max(1, static_cast<int>(std::ceil(stepsPerPeriod * (target - t) / field.period - 1e-9)));
            x = advance(field, x, t, target, steps);
            t = target;
        }
        out.push_back(x);
    }
    return out;
}

std::vector<Mat2> fundamentalMatrices(const PeriodicField& field, std::span<const double> grid, int stepsPerPeriod)
{
    const std::vector<Vec2> first = referenceSolution(field, Vec2(1.0, 0.0), grid, stepsPerPeriod);
    const std::vector<Vec2> second = referenceSolution(field, Vec2(0.0, 1.0), grid, stepsPerPeriod);
    std::vector<Mat2> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i].col(0) = first[i];
        out[i].col(1) = second[i];
    }
    return out;
}

}  // namespace floquet
