#include <algorithm>
#include <random>

#include <catch_amalgamated.hpp>

#include "floquet/error.hpp"
#include "floquet/numerics.hpp"
#include "oracles.hpp"

using namespace floquet;
using namespace floquet::numerics;

namespace {

// coefficients of prod (x - r_i), low to high
std::vector<Complex> fromRoots(const std::vector<Complex>& roots, Complex lead = 1.0)
{
    std::vector<Complex> c{lead};
    for (const auto& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = next;
    }
    return c;
}

}  // namespace

TEST_CASE("Horner evaluation and derivative", "[numerics]")
{
    const std::vector<Complex> c{1.0, -2.0, 0.5, Complex(0, 1)};
    const Complex x(0.3, -0.7);
    const Complex direct = c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x;
    CHECK(std::abs(polyEval(c, x) - direct) < 1e-15);
    const auto [v, d] = polyEvalWithDerivative(c, x);
    CHECK(std::abs(v - direct) < 1e-15);
    CHECK(std::abs(d - (c[1] + 2.0 * c[2] * x + 3.0 * c[3] * x * x)) < 1e-15);
    CHECK(polyEval(std::vector<Complex>{}, x) == 0.0);
}

TEST_CASE("polynomial roots from the companion matrix", "[numerics]")
{
    const std::vector<Complex> roots{1.0, 2.0, Complex(0, -3), Complex(-0.5, 0.25)};
    std::vector<Complex> found = polyRoots(fromRoots(roots, 2.5));
    REQUIRE(found.size() == roots.size());
    for (const auto& r : roots) CHECK(oracle::nearest(found, r) < 1e-12);

    // zero roots and trailing zero coefficients
    found = polyRoots(std::vector<Complex>{0.0, 0.0, -4.0, 1.0, 0.0});
    REQUIRE(found.size() == 3);
    CHECK(std::count(found.begin(), found.end(), Complex(0.0)) == 2);
    CHECK(oracle::nearest(found, 4.0) < 1e-14);

    CHECK(polyRoots(std::vector<Complex>{3.0}).empty());
    CHECK_THROWS_AS(polyRoots(std::vector<Complex>{0.0, 0.0}), InvalidArgument);
}

TEST_CASE("roots of random polynomials with widely spread magnitudes", "[numerics]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> roots;
        for (int i = 0; i < 10; ++i) roots.emplace_back(std::ldexp(u(rng), i % 4), std::ldexp(u(rng), i % 4));
        const std::vector<Complex> found = polyRoots(fromRoots(roots));
        for (const auto& r : roots) CHECK(oracle::nearest(found, r) < 1e-8 * std::max(1.0, std::abs(r)));
    }
}

TEST_CASE("2x2 eigenvalues match a general eigensolver", "[numerics]")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Matrix2cd m;
        m << Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
        const auto [a, b] = eig2x2(m);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m, false);
        const std::vector<Complex> ref{es.eigenvalues()[0], es.eigenvalues()[1]};
        CHECK(oracle::nearest(ref, a) < 1e-12);
        CHECK(oracle::nearest(ref, b) < 1e-12);
    }
    // nearly cancelling pair: the small eigenvalue keeps full relative accuracy
    Eigen::Matrix2cd m;
    m << 1e8, 1.0, 0.0, 1e-8;
    const auto [big, small] = eig2x2(m);
    CHECK(std::abs(big - 1e8) < 1e-6);
    CHECK(std::abs(small - 1e-8) < 1e-22);
}

TEST_CASE("smallest singular direction spans the null space", "[numerics]")
{
    DenseMatrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;  // rank 2, kernel (1, -2, 1)
    const SingularDirection d = smallestSingularDirection(m);
    CHECK(d.sigmaMin < 1e-14);
    CHECK(d.sigmaNext > 0.1);
    CHECK((m * d.vector).norm() < 1e-13);
    CHECK(std::abs(d.vector.norm() - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(d.vector.dot(Eigen::Vector3cd(1, -2, 1).normalized())) - 1.0) < 1e-12);
}

TEST_CASE("Gauss-Legendre rules", "[numerics]")
{
    for (int n : {16, 32, 64}) {
        const GaussRule& r = gaussRule(n);
        REQUIRE(r.nodes.size() == std::size_t(n));
        double total = 0.0;
        for (double w : r.weights) total += w;
        CHECK(std::abs(total - 2.0) < 1e-14);
        // exact for degree 2n - 1
        const double integral = gaussLegendre([](double x) { return std::pow(x, 2 * 16 - 2); }, -1.0, 1.0, n);
        CHECK(std::abs(integral - 2.0 / (2 * 16 - 1)) < 1e-14);
    }
    CHECK(std::abs(gaussLegendre([](double x) { return std::exp(x); }, 0.0, 3.0, 16, 4) - std::expm1(3.0)) < 1e-12);
    CHECK_THROWS_AS(gaussRule(10), InvalidArgument);
}
