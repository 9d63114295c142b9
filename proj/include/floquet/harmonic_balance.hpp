#pragma once

// Hill-Harmonic-Balance solver.
//
// A Floquet solution x(t) = exp(lambda t) eta(t) of
//     p x'' + q x' + r x = 0
// has a periodic factor eta satisfying
//     p eta'' + (2 lambda p + q) eta' + (lambda^2 p + lambda q + r) eta = 0.
// Expanding eta in the truncated basis [1/2, cos wt, sin wt, ..., cos nwt, sin nwt]
// and requiring harmonics 0..n of the left-hand side to vanish gives the
// quadratic pencil M(lambda) = K + lambda C + lambda^2 G. Its determinant
// Delta(lambda) has degree <= 2(2n+1); among its roots the two exponents
// are the ones whose reconstructed solutions minimize the integrated
// squared residual E(lambda).

#include <span>
#include <vector>

#include "floquet/numerics.hpp"
#include "floquet/problems.hpp"
#include "floquet/trigpoly.hpp"

namespace floquet {

class QuadraticPencil {
public:
    QuadraticPencil(int order, double omega, DenseMatrix constant, DenseMatrix linear, DenseMatrix quadratic,
                    double nodeScale);

    int order() const { return order_; }
    int dimension() const { return 2 * order_ + 1; }
    double omega() const { return omega_; }
    /// Half-width of the interval holding the interpolation nodes of detPolynomial.
    double nodeScale() const { return nodeScale_; }

    const DenseMatrix& constantTerm() const { return k_; }
    const DenseMatrix& linearTerm() const { return c_; }
    const DenseMatrix& quadraticTerm() const { return g_; }

    /// K + lambda C + lambda^2 G
    DenseMatrix at(Complex lambda) const;
    /// C + 2 lambda G
    DenseMatrix derivativeAt(Complex lambda) const;
    Complex determinant(Complex lambda) const;

private:
    int order_;
    double omega_;
    DenseMatrix k_, c_, g_;
    double nodeScale_;
};

/// Coefficient vector [a0, a1, b1, ..., an, bn] of the first n harmonics.
DenseVector harmonicCoefficients(const TrigPoly& p, int n);
/// Inverse of harmonicCoefficients.
TrigPoly fromHarmonicCoefficients(double omega, const DenseVector& v);

/// Builds the harmonic-balance pencil of order n >= 1. Products are formed
/// exactly and harmonics above n are discarded.
QuadraticPencil assemble(const ScalarODE& ode, int n);

/// Delta(lambda) = det M(lambda), low-to-high coefficients, obtained by
/// interpolating the determinant at 4n+4 Chebyshev nodes scaled to
/// [-nodeScale, nodeScale]. Trailing coefficients below 1e-10 of the
/// largest are removed. Throws DegenerateProblem if the fit does not
/// reproduce the determinant inside the node interval.
std::vector<Complex> detPolynomial(const QuadraticPencil& pencil);

struct RootCandidate {
    Complex value;
    int multiplicity = 1;
};

/// Roots of Delta with coincident roots (within 1e-8) merged.
std::vector<RootCandidate> candidateRoots(std::span<const Complex> delta);
/// Roots of det M(lambda): detPolynomial, companion roots, then Newton
/// steps on the determinant of the pencil itself before merging.
std::vector<RootCandidate> candidateRoots(const QuadraticPencil& pencil);

struct NullVector {
    TrigPoly eta;
    double sigmaMin = 0.0;
    double sigmaNext = 0.0;
    /// Second smallest singular value within a factor 1e3 of the smallest.
    bool degenerate = false;
};

/// Smallest right-singular direction of M(lambda) as a TrigPoly, scaled so
/// that its largest-magnitude coefficient is exactly 1.
NullVector nullVector(const QuadraticPencil& pencil, Complex lambda);

/// Maps Im(lambda) into (-omega/2, omega/2].
Complex canonicalExponent(Complex lambda, double omega);
/// |a - b| after reducing the imaginary difference modulo omega.
double exponentDistance(Complex a, Complex b, double omega);

struct FloquetSolution {
    /// Exponent with the imaginary part in (-pi/T, pi/T].
    Complex lambda;
    /// The root of Delta this solution came from; eta belongs to it.
    Complex hbLambda;
    TrigPoly eta;
    double residual = 0.0;
    int order = 0;
    int multiplicity = 1;
    bool degenerateNullSpace = false;

    /// Periodic factor paired with the canonical exponent.
    TrigPoly canonicalEta() const;
    Complex valueAt(double t) const;
    Complex derivativeAt(double t) const;
};

/// E = int_0^T |p x'' + q x' + r x|^2 dt for x = exp(lambda t) eta(t), in closed form.
double residual(const ScalarODE& ode, Complex lambda, const TrigPoly& eta);
double residual(const ScalarODE& ode, const FloquetSolution& sol);

/// The same solution rescaled so that the cos(wt) coefficient is 1 (E scales
/// accordingly). Throws DegenerateProblem when that coefficient vanishes.
FloquetSolution rescaledToUnitCosine(const FloquetSolution& sol);

struct SelectOptions {
    /// Locally minimize E around each root (golden section along the real
    /// and imaginary directions) instead of using the roots as they are.
    bool polish = false;
};

struct ExponentPair {
    FloquetSolution first;
    FloquetSolution second;
    /// Only one distinct exponent class was found; second mirrors first.
    bool doubleExponent = false;
    /// Exponent sum expected from Liouville's formula, -(1/T) int q/p.
    Complex expectedSum;
    /// Every root with its residual, in root order.
    std::vector<FloquetSolution> candidates;
};

/// Full pipeline: assemble, roots of Delta, null vectors and residuals,
/// merging of roots equivalent modulo i omega, and selection of the two
/// exponents with the smallest residual. For equations in Hill form the
/// pair is chosen among (lambda, -lambda) partners, so the sum vanishes.
ExponentPair selectExponents(const ScalarODE& ode, int n, const SelectOptions& options = {});

/// x_A(t) = exp(lambda t) eta(t) on the grid.
std::vector<Complex> reconstruct(const FloquetSolution& sol, std::span<const double> grid);

struct SampledFunction {
    std::vector<double> t;
    std::vector<Complex> x;
};

/// (1/T) int_0^T |xe - xa|^2 dt by composite Simpson (3/8 rule on the last
/// three panels for an odd panel count). Both samples must share a uniform grid.
double secondMoment(const SampledFunction& xa, const SampledFunction& xe, double period);

}  // namespace floquet
