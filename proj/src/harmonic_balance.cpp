#include "floquet/harmonic_balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "floquet/error.hpp"

namespace floquet {

QuadraticPencil::QuadraticPencil(int order, double omega, DenseMatrix constant, DenseMatrix linear,
                                 DenseMatrix quadratic, double nodeScale)
    : order_(order),
      omega_(omega),
      k_(std::move(constant)),
      c_(std::move(linear)),
      g_(std::move(quadratic)),
      nodeScale_(nodeScale)
{
    const Eigen::Index d = dimension();
    if (k_.rows() != d || k_.cols() != d || c_.rows() != d || c_.cols() != d || g_.rows() != d || g_.cols() != d)
        throw InvalidArgument("QuadraticPencil: blocks must be (2n+1)x(2n+1)");
}

DenseMatrix QuadraticPencil::at(Complex lambda) const { return k_ + lambda * c_ + (lambda * lambda) * g_; }

DenseMatrix QuadraticPencil::derivativeAt(Complex lambda) const { return c_ + (2.0 * lambda) * g_; }

Complex QuadraticPencil::determinant(Complex lambda) const { return at(lambda).partialPivLu().determinant(); }

DenseVector harmonicCoefficients(const TrigPoly& p, int n)
{
    DenseVector v(2 * n + 1);
    v[0] = p.a0();
    for (int k = 1; k <= n; ++k) {
        v[2 * k - 1] = p.a(k);
        v[2 * k] = p.b(k);
    }
    return v;
}

TrigPoly fromHarmonicCoefficients(double omega, const DenseVector& v)
{
    const int n = static_cast<int>(v.size() / 2);
    std::vector<Complex> a(n), b(n);
    for (int k = 1; k <= n; ++k) {
        a[k - 1] = v[2 * k - 1];
        b[k - 1] = v[2 * k];
    }
    return TrigPoly(omega, v[0], std::move(a), std::move(b));
}

namespace {

TrigPoly basisFunction(double omega, int index)
{
    if (index == 0) return TrigPoly(omega, 1.0, {}, {});
    const int k = (index + 1) / 2;
    return index % 2 == 1 ? TrigPoly::cosine(omega, k) : TrigPoly::sine(omega, k);
}

double coefficientScale(const ScalarODE& ode)
{
    return 1.0 + std::max({ode.p().maxAbsCoefficient(), ode.q().maxAbsCoefficient(), ode.r().maxAbsCoefficient()});
}

}  // namespace

QuadraticPencil assemble(const ScalarODE& ode, int n)
{
    if (n < 1) throw InvalidArgument("assemble: harmonic order must be >= 1");
    const int dim = 2 * n + 1;
    const double w = ode.omega();
    DenseMatrix k(dim, dim), c(dim, dim), g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const TrigPoly phi = basisFunction(w, j);
        const TrigPoly d1 = differentiate(phi);
        const TrigPoly d2 = differentiate(d1);
        k.col(j) = harmonicCoefficients(ode.p() * d2 + ode.q() * d1 + ode.r() * phi, n);
        c.col(j) = harmonicCoefficients(2.0 * (ode.p() * d1) + ode.q() * phi, n);
        g.col(j) = harmonicCoefficients(ode.p() * phi, n);
    }
    return QuadraticPencil(n, w, std::move(k), std::move(c), std::move(g), coefficientScale(ode));
}

namespace {

// Interpolation runs in extended precision: converting Chebyshev
// coefficients to monomials amplifies rounding by roughly (1 + sqrt 2)^nodes.
using Wide = std::complex<long double>;
using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;

Wide wideDeterminant(const QuadraticPencil& pencil, long double lambda)
{
    const WideMatrix m = pencil.constantTerm().cast<Wide>() + Wide(lambda) * pencil.linearTerm().cast<Wide>() +
                         Wide(lambda * lambda) * pencil.quadraticTerm().cast<Wide>();
    return m.partialPivLu().determinant();
}

}  // namespace

std::vector<Complex> detPolynomial(const QuadraticPencil& pencil)
{
    const int nodes = 4 * pencil.order() + 4;
    const long double s = pencil.nodeScale();
    const long double pi = std::numbers::pi_v<long double>;

    std::vector<Wide> values(nodes);
    for (int i = 0; i < nodes; ++i) values[i] = wideDeterminant(pencil, s * std::cos(pi * (i + 0.5L) / nodes));

    // Chebyshev coefficients by discrete orthogonality on the nodes
    std::vector<Wide> cheb(nodes, 0.0L);
    for (int j = 0; j < nodes; ++j) {
        Wide sum = 0.0L;
        for (int i = 0; i < nodes; ++i) sum += values[i] * std::cos(pi * j * (i + 0.5L) / nodes);
        cheb[j] = (j == 0 ? 1.0L : 2.0L) * sum / static_cast<long double>(nodes);
    }

    // monomial coefficients in u = lambda / s via T_{j+1} = 2u T_j - T_{j-1}
    std::vector<Wide> wide(nodes, 0.0L);
    std::vector<long double> prev(nodes, 0.0L), curr(nodes, 0.0L), next(nodes, 0.0L);
    prev[0] = 1.0L;  // T_0
    curr[1] = 1.0L;  // T_1
    for (int j = 0; j < nodes; ++j) {
        const std::vector<long double>& tj = j == 0 ? prev : curr;
        for (int m = 0; m <= j; ++m) wide[m] += cheb[j] * tj[m];
        if (j >= 1 && j + 1 < nodes) {
            std::fill(next.begin(), next.end(), 0.0L);
            for (int m = 0; m <= j; ++m) next[m + 1] += 2.0L * curr[m];
            for (int m = 0; m < j; ++m) next[m] -= prev[m];
            std::swap(prev, curr);
            std::swap(curr, next);
        }
    }

    std::vector<Complex> mono(nodes);
    long double power = 1.0L;
    for (int m = 0; m < nodes; ++m, power *= s) mono[m] = Complex(wide[m] / power);

    double largest = 0.0;
    for (const auto& m : mono) {
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
            std::ostringstream msg;
            msg << "detPolynomial: non-finite interpolation coefficients (node scale " << static_cast<double>(s) << ")";
            throw DegenerateProblem(msg.str());
        }
        largest = std::max(largest, std::abs(m));
    }
    if (largest == 0.0) throw DegenerateProblem("detPolynomial: determinant vanishes identically");
    while (!mono.empty() && std::abs(mono.back()) < 1e-10 * largest) mono.pop_back();

    // the fit must reproduce the determinant between the nodes, relative to
    // its size on the interval (near a root the value itself is tiny)
    double ref = 0.0;
    for (const auto& v : values) ref = std::max(ref, static_cast<double>(std::abs(v)));
    for (double u : {0.123, -0.456, 0.789}) {
        const Complex exact = pencil.determinant(static_cast<double>(s) * u);
        const Complex fitted = numerics::polyEval(mono, static_cast<double>(s) * u);
        if (std::abs(fitted - exact) > 1e-6 * ref * nodes) {
            std::ostringstream msg;
            msg << "detPolynomial: interpolation is ill-conditioned (node scale " << static_cast<double>(s) << ", relative error "
                << std::abs(fitted - exact) / ref << ")";
            throw DegenerateProblem(msg.str());
        }
    }
    return mono;
}

namespace {

constexpr double kMergeTolerance = 1e-8;

bool coincide(Complex a, Complex b) { return std::abs(a - b) <= kMergeTolerance * std::max(1.0, std::abs(a)); }

std::vector<RootCandidate> mergeRoots(const std::vector<Complex>& roots)
{
    std::vector<RootCandidate> merged;
    for (const Complex& r : roots) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const RootCandidate& c) { return coincide(c.value, r); });
        if (it == merged.end()) {
            merged.push_back({r, 1});
        } else {
            // running mean keeps the merged value centred in the cluster
            it->value = (it->value * static_cast<double>(it->multiplicity) + r) / static_cast<double>(it->multiplicity + 1);
            ++it->multiplicity;
        }
    }
    return merged;
}

// Newton on det M using d/dl log det M = tr(M^{-1} M').
Complex polishOnPencil(const QuadraticPencil& pencil, Complex lambda)
{
    auto lu = pencil.at(lambda).partialPivLu();
    double size = std::abs(lu.determinant());
    for (int iter = 0; iter < 20 && size > 0.0; ++iter) {
        const Complex logSlope = lu.solve(pencil.derivativeAt(lambda)).trace();
        if (!std::isfinite(logSlope.real()) || !std::isfinite(logSlope.imag()) || logSlope == 0.0) break;
        const Complex step = 1.0 / logSlope;
        const Complex candidate = lambda - step;
        auto nextLu = pencil.at(candidate).partialPivLu();
        const double nextSize = std::abs(nextLu.determinant());
        if (!(nextSize < size)) break;
        lambda = candidate;
        lu = std::move(nextLu);
        size = nextSize;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(lambda))) break;
    }
    return lambda;
}

}  // namespace

std::vector<RootCandidate> candidateRoots(std::span<const Complex> delta)
{
    std::size_t degree = delta.size();
    while (degree > 0 && delta[degree - 1] == 0.0) --degree;
    if (degree == 0) throw InvalidArgument("candidateRoots: zero polynomial");
    return mergeRoots(numerics::polyRoots(delta));
}

std::vector<RootCandidate> candidateRoots(const QuadraticPencil& pencil)
{
    const std::vector<Complex> delta = detPolynomial(pencil);
    std::vector<Complex> roots = numerics::polyRoots(delta);
    for (auto& r : roots) r = polishOnPencil(pencil, r);
    return mergeRoots(roots);
}

NullVector nullVector(const QuadraticPencil& pencil, Complex lambda)
{
    const numerics::SingularDirection dir = numerics::smallestSingularDirection(pencil.at(lambda));
    DenseVector v = dir.vector;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[pivot])) pivot = i;
    v /= v[pivot];
    v[pivot] = 1.0;

    NullVector out{fromHarmonicCoefficients(pencil.omega(), v), dir.sigmaMin, dir.sigmaNext, false};
    out.degenerate = !(dir.sigmaNext > 1e3 * dir.sigmaMin);
    return out;
}

Complex canonicalExponent(Complex lambda, double omega)
{
    const double im = lambda.imag();
    const double shifted = im - omega * std::ceil((im - 0.5 * omega) / omega);
    return {lambda.real(), shifted};
}

double exponentDistance(Complex a, Complex b, double omega)
{
    return std::abs(canonicalExponent(a - b, omega));
}

TrigPoly FloquetSolution::canonicalEta() const
{
    const double w = eta.omega();
    const int shift = static_cast<int>(std::lround((hbLambda.imag() - lambda.imag()) / w));
    return eta.shiftedByHarmonic(shift);
}

Complex FloquetSolution::valueAt(double t) const { return std::exp(hbLambda * t) * eta.evaluate(t); }

Complex FloquetSolution::derivativeAt(double t) const
{
    return std::exp(hbLambda * t) * (hbLambda * eta.evaluate(t) + differentiate(eta).evaluate(t));
}

double residual(const ScalarODE& ode, Complex lambda, const TrigPoly& eta)
{
    const TrigPoly d1 = differentiate(eta);
    const TrigPoly d2 = differentiate(d1);
    const TrigPoly second = d2 + (2.0 * lambda) * d1 + (lambda * lambda) * eta;
    const TrigPoly first = d1 + lambda * eta;
    const TrigPoly bracket = ode.p() * second + ode.q() * first + ode.r() * eta;
    return expWeightedNormIntegral(bracket, lambda);
}

double residual(const ScalarODE& ode, const FloquetSolution& sol) { return residual(ode, sol.hbLambda, sol.eta); }

FloquetSolution rescaledToUnitCosine(const FloquetSolution& sol)
{
    const Complex a1 = sol.eta.a(1);
    if (std::abs(a1) <= 1e-12 * sol.eta.maxAbsCoefficient())
        throw DegenerateProblem("rescaledToUnitCosine: the cos(wt) coefficient vanishes");
    FloquetSolution out = sol;
    out.eta = scale(sol.eta, 1.0 / a1);
    out.residual = sol.residual / std::norm(a1);
    return out;
}

namespace {

double harmonicSpread(const TrigPoly& eta)
{
    const std::vector<Complex> c = eta.exponentialCoefficients();
    const int n = eta.degree();
    double weighted = 0.0;
    double total = 0.0;
    for (int k = -n; k <= n; ++k) {
        const double m = std::norm(c[k + n]);
        weighted += static_cast<double>(k) * k * m;
        total += m;
    }
    return total > 0.0 ? weighted / total : 0.0;
}

// Level of E attributable to rounding in an exact solution.
double residualNoiseFloor(const ScalarODE& ode, Complex lambda)
{
    const double mag = 1.0 + std::abs(lambda);
    const double level = 1e-11 * coefficientScale(ode) * mag * mag;
    return ode.period() * level * level;
}

Complex expectedExponentSum(const ScalarODE& ode)
{
    if (ode.hasConstantLeading()) return -ode.q().mean() / ode.p().mean();
    const double period = ode.period();
    const Complex integral = numerics::gaussLegendre(
        [&](double t) { return ode.q().evaluate(t) / ode.p().evaluate(t); }, 0.0, period, 64, 8);
    return -integral / period;
}

FloquetSolution makeSolution(const ScalarODE& ode, const QuadraticPencil& pencil, Complex root, int multiplicity)
{
    NullVector nv = nullVector(pencil, root);
    FloquetSolution sol;
    sol.hbLambda = root;
    sol.lambda = canonicalExponent(root, ode.omega());
    sol.residual = residual(ode, root, nv.eta);
    sol.eta = std::move(nv.eta);
    sol.order = pencil.order();
    sol.multiplicity = multiplicity;
    sol.degenerateNullSpace = nv.degenerate;
    return sol;
}

template <class F>
double goldenSection(F&& f, double lo, double hi, int maxIter, double tol)
{
    const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invPhi * (hi - lo);
    double x2 = lo + invPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < maxIter && hi - lo > tol; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invPhi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invPhi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

FloquetSolution polishSolution(const ScalarODE& ode, const QuadraticPencil& pencil, const FloquetSolution& start)
{
    auto energy = [&](Complex lambda) { return residual(ode, lambda, nullVector(pencil, lambda).eta); };
    const double radius = 0.1 * std::abs(start.hbLambda) + 1e-3;
    Complex lambda = start.hbLambda;
    const double re = goldenSection([&](double x) { return energy({x, lambda.imag()}); }, lambda.real() - radius,
                                    lambda.real() + radius, 50, 1e-12);
    lambda = {re, lambda.imag()};
    const double im = goldenSection([&](double y) { return energy({lambda.real(), y}); }, lambda.imag() - radius,
                                    lambda.imag() + radius, 50, 1e-12);
    lambda = {lambda.real(), im};
    FloquetSolution polished = makeSolution(ode, pencil, lambda, start.multiplicity);
    return polished.residual < start.residual ? polished : start;
}

struct ExponentClass {
    std::vector<std::size_t> members;  // indices into the candidate list
    std::size_t representative = 0;
};

std::vector<ExponentClass> groupEquivalent(const ScalarODE& ode, const std::vector<FloquetSolution>& sols)
{
    const double w = ode.omega();
    std::vector<ExponentClass> classes;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        auto it = std::find_if(classes.begin(), classes.end(), [&](const ExponentClass& c) {
            const Complex ref = sols[c.members.front()].lambda;
            return exponentDistance(ref, sols[i].lambda, w) <= kMergeTolerance * std::max(1.0, std::abs(ref));
        });
        if (it == classes.end())
            classes.push_back({{i}, i});
        else
            it->members.push_back(i);
    }
    // representative: the smoothest periodic factor among the members whose
    // residual is indistinguishable from the best one
    for (auto& c : classes) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : c.members) best = std::min(best, sols[m].residual);
        const double floor = residualNoiseFloor(ode, sols[c.members.front()].lambda);
        const double admit = std::max(10.0 * best, floor);
        double bestSpread = std::numeric_limits<double>::infinity();
        for (std::size_t m : c.members) {
            if (sols[m].residual > admit) continue;
            const double spread = harmonicSpread(sols[m].eta);
            if (spread < bestSpread - 1e-9 ||
                (std::abs(spread - bestSpread) <= 1e-9 && sols[m].residual < sols[c.representative].residual)) {
                bestSpread = spread;
                c.representative = m;
            }
        }
    }
    return classes;
}

// Member of a class whose raw root lies closest to target.
std::size_t closestMember(const ExponentClass& c, const std::vector<FloquetSolution>& sols, Complex target)
{
    std::size_t pick = c.representative;
    for (std::size_t m : c.members)
        if (std::abs(sols[m].hbLambda - target) < std::abs(sols[pick].hbLambda - target)) pick = m;
    return pick;
}

}  // namespace

ExponentPair selectExponents(const ScalarODE& ode, int n, const SelectOptions& options)
{
    const QuadraticPencil pencil = assemble(ode, n);
    const std::vector<RootCandidate> roots = candidateRoots(pencil);

    ExponentPair out;
    out.expectedSum = expectedExponentSum(ode);
    out.candidates.reserve(roots.size());
    for (const auto& root : roots) {
        FloquetSolution sol = makeSolution(ode, pencil, root.value, root.multiplicity);
        if (options.polish) sol = polishSolution(ode, pencil, sol);
        out.candidates.push_back(std::move(sol));
    }
    if (out.candidates.empty()) throw DegenerateProblem("selectExponents: the determinant has no roots");

    const auto& sols = out.candidates;
    const double w = ode.omega();
    std::vector<ExponentClass> classes = groupEquivalent(ode, sols);
    auto energy = [&](const ExponentClass& c) { return sols[c.representative].residual; };
    std::sort(classes.begin(), classes.end(),
              [&](const ExponentClass& x, const ExponentClass& y) { return energy(x) < energy(y); });

    auto sumDefect = [&](const FloquetSolution& a, const FloquetSolution& b) {
        return exponentDistance(a.lambda + b.lambda, out.expectedSum, w);
    };
    auto finishDouble = [&](const ExponentClass& c) {
        out.first = sols[c.representative];
        out.second = sols[closestMember(c, sols, out.expectedSum - out.first.hbLambda)];
        out.doubleExponent = true;
        return out;
    };

    if (ode.isHillForm()) {
        // exponents of x'' + f x = 0 come in (lambda, -lambda) pairs
        double bestScore = std::numeric_limits<double>::infinity();
        double bestDefect = std::numeric_limits<double>::infinity();
        std::size_t bestI = 0, bestJ = 0;
        bool found = false;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const FloquetSolution& a = sols[classes[i].representative];
            std::size_t j = i;
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < classes.size(); ++k) {
                const double d = exponentDistance(-a.lambda, sols[classes[k].representative].lambda, w);
                if (d < nearest) {
                    nearest = d;
                    j = k;
                }
            }
            if (nearest > 1e-6 * std::max(1.0, std::abs(a.lambda))) continue;
            const double score = std::max(energy(classes[i]), energy(classes[j]));
            const double defect = sumDefect(a, sols[classes[j].representative]);
            if (score < bestScore || (score == bestScore && defect < bestDefect)) {
                bestScore = score;
                bestDefect = defect;
                bestI = i;
                bestJ = j;
                found = true;
            }
        }
        if (found) {
            if (bestI == bestJ) return finishDouble(classes[bestI]);
            const FloquetSolution& a = sols[classes[bestI].representative];
            const FloquetSolution& b = sols[classes[bestJ].representative];
            out.first = a.residual <= b.residual ? a : b;
            out.second = a.residual <= b.residual ? b : a;
            return out;
        }
    }

    if (classes.size() == 1) return finishDouble(classes.front());

    out.first = sols[classes[0].representative];
    const double tieLimit = std::max(10.0 * energy(classes[1]), residualNoiseFloor(ode, out.first.lambda));
    std::size_t pick = 1;
    for (std::size_t k = 1; k < classes.size(); ++k) {
        if (energy(classes[k]) > tieLimit) break;
        if (sumDefect(out.first, sols[classes[k].representative]) <
            sumDefect(out.first, sols[classes[pick].representative]))
            pick = k;
    }
    out.second = sols[classes[pick].representative];
    return out;
}

std::vector<Complex> reconstruct(const FloquetSolution& sol, std::span<const double> grid)
{
    std::vector<Complex> out;
    out.reserve(grid.size());
    for (double t : grid) out.push_back(sol.valueAt(t));
    return out;
}

double secondMoment(const SampledFunction& xa, const SampledFunction& xe, double period)
{
    if (xa.t.size() != xa.x.size() || xe.t.size() != xe.x.size())
        throw InvalidArgument("secondMoment: sample and grid sizes differ");
    if (xa.t.size() != xe.t.size()) throw InvalidArgument("secondMoment: grids differ");
    const std::size_t count = xa.t.size();
    if (count < 3) throw InvalidArgument("secondMoment: at least three samples are required");
    const double h = (xa.t.back() - xa.t.front()) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        if (std::abs(xa.t[i] - xe.t[i]) > 1e-12 * std::max(1.0, std::abs(xa.t[i])))
            throw InvalidArgument("secondMoment: grids differ");
        if (std::abs(xa.t[i] - (xa.t.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(h)))
            throw InvalidArgument("secondMoment: grid must be uniform");
    }
    if (!(period > 0.0)) throw InvalidArgument("secondMoment: period must be positive");

    std::vector<double> f(count);
    for (std::size_t i = 0; i < count; ++i) f[i] = std::norm(xe.x[i] - xa.x[i]);

    const std::size_t panels = count - 1;
    std::size_t simpsonPanels = panels % 2 == 0 ? panels : panels - 3;
    double integral = 0.0;
    if (simpsonPanels > 0) {
        double sum = f[0] + f[simpsonPanels];
        for (std::size_t i = 1; i < simpsonPanels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
        integral += h * sum / 3.0;
    }
    if (simpsonPanels != panels) {
        const std::size_t s = simpsonPanels;
        integral += 3.0 * h / 8.0 * (f[s] + 3.0 * f[s + 1] + 3.0 * f[s + 2] + f[s + 3]);
    }
    return integral / period;
}

}  // namespace floquet
