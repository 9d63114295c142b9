#pragma once

// Small dense kernels shared by the solvers: polynomial roots, null
// directions, closed-form 2x2 eigenvalues and Gauss-Legendre quadrature.

#include <array>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace floquet {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

namespace numerics {

/// Evaluates sum coeffs[k] x^k (Horner).
Complex polyEval(std::span<const Complex> coeffs, Complex x);

/// Value and first derivative of the polynomial at x.
std::pair<Complex, Complex> polyEvalWithDerivative(std::span<const Complex> coeffs, Complex x);

/// All roots (with multiplicity) of the polynomial given low-to-high.
///
/// Trailing zero coefficients are dropped first; the remaining roots are
/// the eigenvalues of the balanced companion matrix, each refined by at
/// most 20 Newton steps on the polynomial itself.
/// Throws InvalidArgument when every coefficient is zero.
std::vector<Complex> polyRoots(std::span<const Complex> coeffs);

struct SingularDirection {
    DenseVector vector;  // unit right-singular vector
    double sigmaMin = 0.0;
    double sigmaNext = 0.0;  // second smallest singular value (== sigmaMin for 1x1)
};

/// Right-singular direction of the smallest singular value of a square matrix.
SingularDirection smallestSingularDirection(const DenseMatrix& m);

/// Eigenvalues of a 2x2 matrix from trace and determinant. The larger
/// magnitude root is formed without cancellation and the other one is
/// recovered from the determinant.
std::pair<Complex, Complex> eig2x2(const Eigen::Matrix2cd& m);

/// Gauss-Legendre abscissae and weights on [-1, 1]; nodes must be 16, 32 or 64.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gaussRule(int nodes);

/// Composite Gauss-Legendre quadrature of f over [a, b].
template <class F>
auto gaussLegendre(F&& f, double a, double b, int nodes = 32, int panels = 1)
{
    const GaussRule& rule = gaussRule(nodes);
    using Value = decltype(f(a));
    Value total{};
    const double width = (b - a) / panels;
    for (int panel = 0; panel < panels; ++panel) {
        const double lo = a + panel * width;
        const double half = 0.5 * width;
        const double mid = lo + half;
        Value sum{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        total += half * sum;
    }
    return total;
}

}  // namespace numerics
}  // namespace floquet
