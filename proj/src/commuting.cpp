#include "floquet/commuting.hpp"

#include <algorithm>
#include <cmath>

#include "floquet/error.hpp"

namespace floquet {

namespace {

// a0, a1, b1, ... padded to a common degree
std::vector<Complex> coefficientVector(const TrigPoly& p, int degree)
{
    std::vector<Complex> v{p.a0()};
    for (int k = 1; k <= degree; ++k) {
        v.push_back(p.a(k));
        v.push_back(p.b(k));
    }
    return v;
}

double norm(const std::vector<Complex>& v)
{
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

struct Fit {
    Complex factor;
    double residual;
    double scale;
};

// least-squares factor c minimizing |y - c x|
Fit fitMultiple(const std::vector<Complex>& x, const std::vector<Complex>& y)
{
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += std::conj(x[i]) * y[i];
        den += std::norm(x[i]);
    }
    const Complex c = num / den;
    std::vector<Complex> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[i] - c * x[i];
    return {c, norm(r), std::max(norm(y), std::abs(c) * std::sqrt(den))};
}

constexpr double kStructureTolerance = 1e-10;

bool acceptable(const Fit& fit)
{
    const bool small = fit.residual <= kStructureTolerance * std::max(fit.scale, 1e-300);
    const bool real = std::abs(fit.factor.imag()) <= kStructureTolerance * std::max(1.0, std::abs(fit.factor));
    return small && real;
}

CommutingSystem build(const PlanarSystem& sys, double alpha, double beta)
{
    CommutingSystem cs;
    cs.a11 = sys.a11();
    cs.a12 = sys.a12();
    cs.alpha = alpha;
    cs.beta = beta;
    cs.gamma = std::sqrt(Complex(4.0 * alpha + beta * beta, 0.0));
    cs.period = sys.period();
    cs.fPrim = primitive(sys.a11());
    cs.gPrim = primitive(sys.a12());
    return cs;
}

// sinh(z) / z, continuous at 0
Complex sinhc(Complex z)
{
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

std::optional<CommutingSystem> detectStructure(const PlanarSystem& sys)
{
    const int degree = std::max({sys.a11().degree(), sys.a12().degree(), sys.a21().degree(), sys.a22().degree()});
    const std::vector<Complex> x12 = coefficientVector(sys.a12(), degree);
    const std::vector<Complex> x21 = coefficientVector(sys.a21(), degree);
    const std::vector<Complex> diff = coefficientVector(sys.a22() - sys.a11(), degree);

    if (sys.a12().isZero()) {
        const double scale = std::max({1.0, sys.a11().maxAbsCoefficient(), sys.a22().maxAbsCoefficient()});
        if (norm(x21) <= kStructureTolerance * scale && norm(diff) <= kStructureTolerance * scale)
            return build(sys, 0.0, 0.0);
        return std::nullopt;
    }

    const Fit alpha = fitMultiple(x12, x21);
    const Fit beta = fitMultiple(x12, diff);
    if (!acceptable(alpha) || !acceptable(beta)) return std::nullopt;
    return build(sys, alpha.factor.real(), beta.factor.real());
}

double verifyCommutation(const PlanarSystem& sys, int samples)
{
    if (samples < 8) throw InvalidArgument("verifyCommutation: at least 8 samples are required");
    const SecularFunction p11 = primitive(sys.a11());
    const SecularFunction p12 = primitive(sys.a12());
    const SecularFunction p21 = primitive(sys.a21());
    const SecularFunction p22 = primitive(sys.a22());
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = sys.period() * i / samples;
        Eigen::Matrix2cd b;
        b << p11(t), p12(t), p21(t), p22(t);
        const Eigen::Matrix2cd a = sys.at(t);
        worst = std::max(worst, (b * a - a * b).norm());
    }
    return worst;
}

Eigen::Matrix2cd fundamentalMatrix(const CommutingSystem& cs, double t)
{
    const Complex f = cs.fPrim(t);
    const Complex g = cs.gPrim(t);
    const Complex half = 0.5 * cs.gamma * g;
    Eigen::Matrix2cd n;
    n << -0.5 * cs.beta, 1.0, cs.alpha, 0.5 * cs.beta;
    const Eigen::Matrix2cd q = std::cosh(half) * Eigen::Matrix2cd::Identity() + (g * sinhc(half)) * n;
    return q * std::exp(f + 0.5 * cs.beta * g);
}

std::array<Complex, 2> closedFormExponents(const CommutingSystem& cs)
{
    // f(T) / T and g(T) / T are exactly the mean values
    const Complex f = cs.fPrim.slope;
    const Complex g = cs.gPrim.slope;
    return {f + 0.5 * (cs.beta + cs.gamma) * g, f + 0.5 * (cs.beta - cs.gamma) * g};
}

std::array<Complex, 2> averageMatrixExponents(const PlanarSystem& sys)
{
    const auto [x, y] = numerics::eig2x2(sys.mean());
    return {x, y};
}

std::string_view toString(CommutingClass c)
{
    switch (c) {
        case CommutingClass::IdentityQ: return "identity_q";
        case CommutingClass::UnboundedQ: return "unbounded_q";
        case CommutingClass::PeriodicSolutions: return "periodic_solutions";
        case CommutingClass::GlobalAttractor: return "global_attractor";
        case CommutingClass::StableZero: return "stable_zero";
        case CommutingClass::BoundedNonPeriodic: return "bounded_q_non_periodic";
    }
    return "unknown";
}

CommutingClass classify(const CommutingSystem& cs)
{
    const double scale = 1.0 + std::max(cs.a11.maxAbsCoefficient(), cs.a12.maxAbsCoefficient());
    const Complex gamma2 = cs.gamma * cs.gamma;
    const double tol = 1e-12 * (1.0 + std::abs(cs.alpha) + cs.beta * cs.beta);
    if (std::abs(gamma2) <= tol) return CommutingClass::IdentityQ;
    if (gamma2.real() > 0.0) return CommutingClass::UnboundedQ;

    const double slopeTol = 1e-12 * scale;
    const bool gPeriodic = std::abs(cs.gPrim.slope) <= slopeTol;
    auto h = [&](double t) { return cs.fPrim(t) + 0.5 * cs.beta * cs.gPrim(t); };

    if (gPeriodic) {
        constexpr int kSamples = 4096;
        bool vanishes = true;
        for (int i = 0; i < kSamples && vanishes; ++i)
            vanishes = std::abs(h(cs.period * i / kSamples)) <= 1e-10 * scale * (1.0 + cs.period);
        if (vanishes) return CommutingClass::PeriodicSolutions;
    }
    const double slope = (cs.fPrim.slope + 0.5 * cs.beta * cs.gPrim.slope).real();
    if (slope < -slopeTol) return CommutingClass::GlobalAttractor;
    if (slope <= slopeTol) return CommutingClass::StableZero;
    return CommutingClass::BoundedNonPeriodic;
}

}  // namespace floquet
