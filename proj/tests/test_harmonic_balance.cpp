#include <catch_amalgamated.hpp>

#include "floquet/error.hpp"
#include "floquet/harmonic_balance.hpp"
#include "floquet/monodromy.hpp"
#include "oracles.hpp"

using namespace floquet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ScalarODE mathieu(double alpha, double omega = 1.0)
{
    return std::get<ScalarODE>(catalog("mathieu", {{"alpha", alpha}, {"omega", omega}}));
}

ScalarODE constantODE(Complex p, Complex q, Complex r)
{
    return ScalarODE(TrigPoly::constant(1.0, p), TrigPoly::constant(1.0, q), TrigPoly::constant(1.0, r));
}

// basis function j of [1/2, cos wt, sin wt, ...] with its first two derivatives
struct Basis {
    double omega;
    int j;
    std::array<double, 3> at(double t) const
    {
        if (j == 0) return {0.5, 0.0, 0.0};
        const double kw = ((j + 1) / 2) * omega;
        const double c = std::cos(kw * t), s = std::sin(kw * t);
        if (j % 2 == 1) return {c, -kw * s, -kw * kw * c};
        return {s, kw * c, -kw * kw * s};
    }
};

const double kPublishedLambdaA[] = {9.31603e-4, 8.37695e-3, 2.32152e-2, 4.52825e-2, 9.10172e-2};
const double kAlphas[] = {0.1, 0.3, 0.5, 0.7, 1.0};

}  // namespace

TEST_CASE("pencil columns are harmonic projections of the operator", "[hb]")
{
    std::mt19937_64 rng(21);
    const TrigPoly p = oracle::randomTrig(rng, 1, 0.3) + TrigPoly::constant(1.0, 2.0);
    const TrigPoly q = oracle::randomTrig(rng, 2, 0.5);
    const TrigPoly r = oracle::randomTrig(rng, 3, 0.5);
    const ScalarODE ode(p, q, r);
    const int n = 3;
    const QuadraticPencil pencil = assemble(ode, n);
    REQUIRE(pencil.dimension() == 7);

    const Complex lambda(0.3, -0.8);
    const DenseMatrix m = pencil.at(lambda);
    for (int j = 0; j < pencil.dimension(); ++j) {
        const Basis phi{1.0, j};
        auto op = [&](double t) {
            const auto [f, d1, d2] = phi.at(t);
            return p(t) * (d2 + 2.0 * lambda * d1 + lambda * lambda * f) + q(t) * (d1 + lambda * f) + r(t) * f;
        };
        for (int k = 0; k <= n; ++k) {
            const auto [ak, bk] = oracle::harmonic(op, 1.0, k, 64);
            if (k == 0) {
                CHECK(std::abs(m(0, j) - ak) < 1e-12);
            } else {
                CHECK(std::abs(m(2 * k - 1, j) - ak) < 1e-12);
                CHECK(std::abs(m(2 * k, j) - bk) < 1e-12);
            }
        }
    }
    CHECK((pencil.derivativeAt(lambda) - (pencil.linearTerm() + 2.0 * lambda * pencil.quadraticTerm())).norm() == 0.0);
    CHECK_THROWS_AS(assemble(ode, 0), InvalidArgument);
}

TEST_CASE("harmonic coefficient vectors round-trip", "[hb]")
{
    const TrigPoly p(2.0, 1.0, {0.5, Complex(0, 1)}, {-0.25});
    const DenseVector v = harmonicCoefficients(p, 3);
    REQUIRE(v.size() == 7);
    CHECK(v[0] == 1.0);
    CHECK(v[3] == Complex(0, 1));
    CHECK(v[6] == 0.0);
    CHECK((fromHarmonicCoefficients(2.0, v) - p).isZero());
}

TEST_CASE("determinant polynomial reproduces det M", "[hb]")
{
    std::mt19937_64 rng(4);
    for (int n : {2, 3, 4}) {
        const ScalarODE ode(TrigPoly::constant(1.0, 1.0), oracle::randomTrig(rng, 2, 0.4),
                            oracle::randomTrig(rng, 3, 0.6));
        const QuadraticPencil pencil = assemble(ode, n);
        const std::vector<Complex> delta = detPolynomial(pencil);
        CHECK(delta.size() <= std::size_t(2 * (2 * n + 1) + 1));
        for (Complex l : {Complex(0.1, 0.2), Complex(-1.3, 0.4), Complex(0.0, 2.5)}) {
            const Complex direct = pencil.determinant(l);
            CHECK(std::abs(numerics::polyEval(delta, l) - direct) <= 1e-8 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("Hill-form determinant is even in lambda", "[hb]")
{
    const std::vector<Complex> delta = detPolynomial(assemble(mathieu(0.5), 2));
    // degree 2(2n+1) = 10 for n = 2
    CHECK(delta.size() == 11);
    double largest = 0.0;
    for (const auto& c : delta) largest = std::max(largest, std::abs(c));
    for (std::size_t k = 1; k < delta.size(); k += 2) CHECK(std::abs(delta[k]) <= 1e-10 * largest);
}

TEST_CASE("determinant roots agree with the companion linearization", "[hb]")
{
    std::mt19937_64 rng(8);
    const ScalarODE ode(TrigPoly::constant(1.0, 1.0), oracle::randomTrig(rng, 1, 0.3),
                        oracle::randomTrig(rng, 2, 0.5));
    const QuadraticPencil pencil = assemble(ode, 3);
    const std::vector<Complex> reference = oracle::pencilEigenvalues(pencil);
    std::size_t total = 0;
    for (const auto& root : candidateRoots(pencil)) {
        total += root.multiplicity;
        CHECK(oracle::nearest(reference, root.value) < 1e-7 * std::max(1.0, std::abs(root.value)));
    }
    CHECK(total == reference.size());
}

TEST_CASE("coincident roots are merged with multiplicity", "[hb]")
{
    // (x - 1)^2 (x + 2)
    const std::vector<Complex> delta{2.0, -3.0, 0.0, 1.0};
    const auto roots = candidateRoots(delta);
    REQUIRE(roots.size() == 2);
    const auto& twice = std::abs(roots[0].value - 1.0) < 1e-6 ? roots[0] : roots[1];
    CHECK(twice.multiplicity == 2);
    CHECK_THROWS_AS(candidateRoots(std::vector<Complex>{0.0}), InvalidArgument);
}

TEST_CASE("null vectors are annihilated and normalized", "[hb]")
{
    const ScalarODE ode = mathieu(0.5);
    const QuadraticPencil pencil = assemble(ode, 3);
    const auto roots = candidateRoots(pencil);
    for (const auto& root : roots) {
        const NullVector nv = nullVector(pencil, root.value);
        const DenseVector v = harmonicCoefficients(nv.eta, 3);
        CHECK(std::abs(v.cwiseAbs().maxCoeff() - 1.0) < 1e-15);
        CHECK((pencil.at(root.value) * v).norm() <= 1e-8 * pencil.at(root.value).norm());
        CHECK(nv.sigmaMin <= 1e-8 * pencil.at(root.value).norm());
    }
}

TEST_CASE("canonical exponents", "[hb]")
{
    CHECK(canonicalExponent({-1.0, -2.0}, 1.0) == Complex(-1.0, 0.0));
    CHECK(canonicalExponent({0.0, 0.5}, 1.0) == Complex(0.0, 0.5));
    CHECK(canonicalExponent({0.0, -0.5}, 1.0) == Complex(0.0, 0.5));
    CHECK(std::abs(canonicalExponent({2.0, 1.9998}, 1.0) - Complex(2.0, -0.0002)) < 1e-12);
    CHECK(std::abs(canonicalExponent({0.0, 3.5}, 2.0) - Complex(0.0, -0.5)) < 1e-15);
    CHECK(exponentDistance({-1.0, 1.9998}, {-1.0, -2.0}, 1.0) == Catch::Approx(2e-4).epsilon(1e-6));
}

TEST_CASE("residual closed form equals quadrature of the equation error", "[hb]")
{
    const ScalarODE ode = mathieu(0.7);
    const TrigPoly eta(1.0, 0.4, {1.0, -0.1}, {-2.0, 0.2});
    for (Complex lambda : {Complex(0.05, 0.0), Complex(-0.3, 0.4)}) {
        // x = e^{lambda t} eta, with x' and x'' by the product rule
        auto error = [&](double t) {
            const TrigPoly d1 = differentiate(eta);
            const TrigPoly d2 = differentiate(d1);
            const Complex e = std::exp(lambda * t);
            const Complex x = e * eta(t);
            const Complex dx = e * (lambda * eta(t) + d1(t));
            const Complex ddx = e * (lambda * lambda * eta(t) + 2.0 * lambda * d1(t) + d2(t));
            return std::norm(ode.p()(t) * ddx + ode.q()(t) * dx + ode.r()(t) * x);
        };
        const double quad = oracle::simpson(error, 0.0, ode.period(), 4000);
        CHECK_THAT(residual(ode, lambda, eta), WithinRel(quad, 1e-10));
    }
}

TEST_CASE("constant coefficients give the quadratic-formula exponents", "[hb]")
{
    struct Case { Complex p, q, r; };
    for (const Case& c : {Case{1.0, 3.0, 2.0}, Case{2.0, 1.0, 5.0}, Case{1.0, 0.4, -0.3}, Case{0.5, -0.2, 0.9}}) {
        const ScalarODE ode = constantODE(c.p, c.q, c.r);
        const Complex disc = std::sqrt(c.q * c.q - 4.0 * c.p * c.r);
        const Complex l1 = (-c.q + disc) / (2.0 * c.p), l2 = (-c.q - disc) / (2.0 * c.p);
        const ExponentPair pair = selectExponents(ode, 3);
        const double d1 = exponentDistance(pair.first.lambda, l1, 1.0) + exponentDistance(pair.second.lambda, l2, 1.0);
        const double d2 = exponentDistance(pair.first.lambda, l2, 1.0) + exponentDistance(pair.second.lambda, l1, 1.0);
        CHECK(std::min(d1, d2) < 1e-10);
        CHECK(std::abs(pair.expectedSum - (l1 + l2)) < 1e-14);
    }
}

TEST_CASE("harmonic oscillator exponents are reported as a double pair", "[hb]")
{
    // x'' + x = 0: +-i are the same class modulo i
    const ExponentPair pair = selectExponents(constantODE(1.0, 0.0, 1.0), 3);
    CHECK(pair.doubleExponent);
    CHECK(std::abs(pair.first.lambda) < 1e-12);
    CHECK(std::abs(pair.first.hbLambda + pair.second.hbLambda) < 1e-12);
    // the two representatives still reconstruct cos/sin type solutions
    for (const auto* sol : {&pair.first, &pair.second}) {
        const Complex x0 = sol->valueAt(0.0), v0 = sol->derivativeAt(0.0);
        for (double t : {0.5, 2.0}) CHECK(std::abs(sol->valueAt(t) - (x0 * std::cos(t) + v0 * std::sin(t))) < 1e-12);
    }
}

TEST_CASE("Mathieu exponents reproduce the published HB row", "[hb]")
{
    for (int i = 0; i < 5; ++i) {
        const ExponentPair pair = selectExponents(mathieu(kAlphas[i]), 3);
        CHECK_FALSE(pair.doubleExponent);
        CHECK_THAT(std::abs(pair.first.lambda.real()), WithinAbs(kPublishedLambdaA[i], 1e-6));
        CHECK(std::abs(pair.first.lambda + pair.second.lambda) <= 1e-6);
        CHECK(std::abs(pair.first.lambda.imag()) < 1e-12);
    }
}

TEST_CASE("n = 2 solution in the unit-cosine gauge", "[hb]")
{
    // published rational approximations of the decaying solution, good to about 0.07 %
    const ExponentPair pair = selectExponents(mathieu(0.5), 2);
    const FloquetSolution& decaying = pair.first.lambda.real() < 0 ? pair.first : pair.second;
    const FloquetSolution s = rescaledToUnitCosine(decaying);
    CHECK(s.eta.a(1) == 1.0);
    CHECK_THAT(s.eta.mean().real(), WithinRel(267.0 / 1069.0, 1e-3));
    CHECK_THAT(s.eta.a(2).real(), WithinRel(-4.0 / 45.0, 1e-3));
    CHECK_THAT(s.eta.b(1).real(), WithinRel(-185.0 / 84.0, 1e-3));
    CHECK_THAT(s.eta.b(2).real(), WithinRel(15.0 / 83.0, 1e-3));
    CHECK_THAT(s.valueAt(0.0).real(), WithinRel(1.16088, 5e-4));
    CHECK_THAT(s.derivativeAt(0.0).real(), WithinRel(-1.86793, 5e-4));
    CHECK_THAT(s.residual, WithinRel(decaying.residual / std::norm(decaying.eta.a(1)), 1e-14));

    FloquetSolution noCosine = decaying;
    noCosine.eta = TrigPoly(1.0, 1.0, {}, {1.0});
    CHECK_THROWS_AS(rescaledToUnitCosine(noCosine), DegenerateProblem);
}

TEST_CASE("residual decreases with the harmonic order", "[hb]")
{
    double previous = INFINITY;
    for (int n : {2, 3, 4}) {
        const ExponentPair pair = selectExponents(mathieu(0.5), n);
        CHECK(pair.first.residual <= previous);
        previous = pair.first.residual;
    }
}

TEST_CASE("solution helpers", "[hb]")
{
    const ExponentPair pair = selectExponents(mathieu(0.3), 3);
    const FloquetSolution& s = pair.first;
    // canonical factor paired with the canonical exponent gives the same function
    const TrigPoly eta = s.canonicalEta();
    for (double t : {0.0, 1.3, 4.0}) CHECK(std::abs(std::exp(s.lambda * t) * eta(t) - s.valueAt(t)) < 1e-12);
    const double h = 1e-5;
    CHECK(std::abs(s.derivativeAt(1.0) - (s.valueAt(1.0 + h) - s.valueAt(1.0 - h)) / (2 * h)) < 1e-8);
    CHECK_THAT(residual(mathieu(0.3), s), WithinRel(s.residual, 1e-12));
    const std::vector<double> grid{0.0, 0.5, 1.0};
    const auto values = reconstruct(s, grid);
    CHECK(values[1] == s.valueAt(0.5));
}

TEST_CASE("optional polishing never worsens the residual", "[hb]")
{
    const ScalarODE ode = mathieu(0.5);
    const ExponentPair plain = selectExponents(ode, 3);
    const ExponentPair polished = selectExponents(ode, 3, SelectOptions{true});
    CHECK(polished.first.residual <= plain.first.residual);
    CHECK(std::abs(polished.first.lambda - plain.first.lambda) < 1e-3);
}

TEST_CASE("second moment of sampled differences", "[hb]")
{
    const double period = 2.0 * std::numbers::pi;
    for (int count : {257, 258}) {  // even and odd panel counts
        SampledFunction zero, wave;
        for (int i = 0; i < count; ++i) {
            const double t = period * i / (count - 1);
            zero.t.push_back(t);
            wave.t.push_back(t);
            zero.x.push_back(0.0);
            wave.x.emplace_back(std::sin(t), std::cos(2 * t));
        }
        // (1/T) int sin^2 + cos^2(2t) = 1; Simpson's h^4 error bound here is about 3e-7
        CHECK_THAT(secondMoment(zero, wave, period), WithinAbs(1.0, 3e-7));
    }
    SampledFunction a{{0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}};
    SampledFunction b{{0.0, 1.0, 2.5}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(secondMoment(a, b, 1.0), InvalidArgument);
    SampledFunction c{{0.0, 1.0, 3.0}, {0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(secondMoment(c, c, 1.0), InvalidArgument);
    SampledFunction d{{0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(secondMoment(d, d, 1.0), InvalidArgument);
}
