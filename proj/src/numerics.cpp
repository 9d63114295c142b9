#include "floquet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "floquet/error.hpp"

namespace floquet::numerics {

Complex polyEval(std::span<const Complex> coeffs, Complex x)
{
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::pair<Complex, Complex> polyEvalWithDerivative(std::span<const Complex> coeffs, Complex x)
{
    Complex value = 0.0;
    Complex slope = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        slope = slope * x + value;
        value = value * x + *it;
    }
    return {value, slope};
}

namespace {

// Diagonal similarity scaling by powers of two so that row and column
// norms are comparable (Parlett-Reinsch).
void balance(DenseMatrix& a)
{
    constexpr double radix = 2.0;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

Complex newtonPolish(std::span<const Complex> coeffs, Complex x)
{
    auto [value, slope] = polyEvalWithDerivative(coeffs, x);
    for (int iter = 0; iter < 20; ++iter) {
        if (value == 0.0 || slope == 0.0) break;
        const Complex step = value / slope;
        const Complex candidate = x - step;
        auto [nextValue, nextSlope] = polyEvalWithDerivative(coeffs, candidate);
        if (!(std::abs(nextValue) < std::abs(value))) break;
        x = candidate;
        value = nextValue;
        slope = nextSlope;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    return x;
}

}  // namespace

std::vector<Complex> polyRoots(std::span<const Complex> coeffs)
{
    std::size_t hi = coeffs.size();
    while (hi > 0 && coeffs[hi - 1] == 0.0) --hi;
    if (hi == 0) throw InvalidArgument("polyRoots: zero polynomial");

    std::size_t lo = 0;
    while (coeffs[lo] == 0.0) ++lo;

    std::vector<Complex> roots(lo, Complex{0.0, 0.0});
    const std::span<const Complex> reduced = coeffs.subspan(lo, hi - lo);
    const std::size_t degree = reduced.size() - 1;
    if (degree == 0) return roots;

    const Complex lead = reduced[degree];
    DenseMatrix companion = DenseMatrix::Zero(degree, degree);
    for (std::size_t i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < degree; ++i) companion(i, degree - 1) = -reduced[i] / lead;
    balance(companion);

    Eigen::ComplexEigenSolver<DenseMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) throw DegenerateProblem("polyRoots: companion eigensolver failed");

    // Polish against the untrimmed-at-zero polynomial so roots near the
    // origin are not biased by the deflation.
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        roots.push_back(newtonPolish(reduced, solver.eigenvalues()[i]));
    return roots;
}

SingularDirection smallestSingularDirection(const DenseMatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InvalidArgument("smallestSingularDirection: matrix must be square and non-empty");
    Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const Eigen::Index last = sigma.size() - 1;
    SingularDirection out;
    out.vector = svd.matrixV().col(last);
    out.sigmaMin = sigma[last];
    out.sigmaNext = last > 0 ? sigma[last - 1] : sigma[last];
    return out;
}

std::pair<Complex, Complex> eig2x2(const Eigen::Matrix2cd& m)
{
    const Complex halfTrace = 0.5 * (m(0, 0) + m(1, 1));
    const Complex halfDiff = 0.5 * (m(0, 0) - m(1, 1));
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const Complex root = std::sqrt(halfDiff * halfDiff + m(0, 1) * m(1, 0));
    // pick the sign that avoids cancellation
    const Complex big = std::real(std::conj(halfTrace) * root) >= 0.0 ? halfTrace + root : halfTrace - root;
    if (big == 0.0) return {0.0, 0.0};
    return {big, det / big};
}

namespace {

GaussRule buildRule(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gaussRule(int nodes)
{
    static const GaussRule r16 = buildRule(16);
    static const GaussRule r32 = buildRule(32);
    static const GaussRule r64 = buildRule(64);
    switch (nodes) {
        case 16: return r16;
        case 32: return r32;
        case 64: return r64;
        default: throw InvalidArgument("gaussLegendre: nodes per panel must be 16, 32 or 64");
    }
}

}  // namespace floquet::numerics
