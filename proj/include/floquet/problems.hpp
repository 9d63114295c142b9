#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "floquet/trigpoly.hpp"

namespace floquet {

/// p(t) x'' + q(t) x' + r(t) x = 0 with T-periodic coefficients.
class ScalarODE {
public:
    /// Brings p, q, r onto a common frequency. Throws InvalidArgument when
    /// p is identically zero.
    ScalarODE(TrigPoly p, TrigPoly q, TrigPoly r);

    const TrigPoly& p() const { return p_; }
    const TrigPoly& q() const { return q_; }
    const TrigPoly& r() const { return r_; }
    double omega() const { return p_.omega(); }
    double period() const { return p_.period(); }

    /// p is a nonzero constant.
    bool hasConstantLeading() const { return p_.isConstant() && p_.a0() != 0.0; }
    /// p constant and q identically zero: x'' + f x = 0 up to scaling.
    bool isHillForm() const { return hasConstantLeading() && q_.isZero(); }
    bool isReal(double tol = 1e-14) const;

    /// Companion matrix ((0, 1), (-r/p, -q/p)) at time t (real parts).
    Eigen::Matrix2d companionAt(double t) const;

private:
    TrigPoly p_, q_, r_;
};

/// x' = A(t) x with A 2x2 and T-periodic.
class PlanarSystem {
public:
    PlanarSystem(TrigPoly a11, TrigPoly a12, TrigPoly a21, TrigPoly a22);

    const TrigPoly& a11() const { return a11_; }
    const TrigPoly& a12() const { return a12_; }
    const TrigPoly& a21() const { return a21_; }
    const TrigPoly& a22() const { return a22_; }
    double omega() const { return a11_.omega(); }
    double period() const { return a11_.period(); }

    TrigPoly trace() const { return add(a11_, a22_); }
    bool isReal(double tol = 1e-14) const;

    Eigen::Matrix2cd at(double t) const;
    /// Average of A over one period (entry means).
    Eigen::Matrix2cd mean() const;

private:
    TrigPoly a11_, a12_, a21_, a22_;
};

/// x'' + f(t) x = 0 together with the offset that maps its exponents back
/// onto the exponents of the originating equation.
struct HillForm {
    TrigPoly f;
    Complex shift = 0.0;
};

/// Removes the first-derivative term of an equation with constant leading
/// coefficient: f = b - a'/2 - a^2/4 with a = q/p, b = r/p, shift = -mean(a)/2.
/// Throws DegenerateProblem when p is not constant.
HillForm hillTransform(const ScalarODE& ode);

/// Companion system a11 = 0, a12 = 1, a21 = -r/p, a22 = -q/p.
/// Throws DegenerateProblem when p is not constant.
PlanarSystem scalarToSystem(const ScalarODE& ode);

/// Eliminates the second component:
///   a12 z1'' - (a11 a12 + a12' + a22 a12) z1' + (a11 a12' + a11 a12 a22 - a12 a11' - a12^2 a21) z1 = 0.
/// When a12 vanishes identically the roles of the components are swapped
/// and the returned equation governs z2. No normalization of the leading
/// coefficient is applied. Throws DegenerateProblem for a decoupled system.
ScalarODE systemToScalar(const PlanarSystem& sys);

enum class Boundedness { AllBounded, UnstableRealPart, Inconclusive };

std::string_view toString(Boundedness b);

/// Sufficient tests on the Hill function f:
///   AllBounded       if min f > 0 and T int_0^T f <= 4,
///   UnstableRealPart if max f < 0,
///   Inconclusive     otherwise.
/// Extremes are estimated from 4096 samples and the coefficient-sum bound.
/// Throws InvalidArgument for complex-valued f.
Boundedness boundednessCriterion(const TrigPoly& f);

using Problem = std::variant<ScalarODE, PlanarSystem>;
using ParameterMap = std::map<std::string, double>;

struct CatalogEntry {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, double>> parameters;  // name, default value
};

std::span<const CatalogEntry> catalogEntries();

/// Built-in problems:
///   mathieu(omega, alpha)   x'' + omega^2 (1 - alpha cos t) x = 0
///   marcus_yamabe           the Marcus-Yamabe system on period 2 pi
///   commuting_example       a11 = a22 = -1, a12 = -a21 = 2 + sin t
/// Missing parameters take their defaults. Throws InvalidArgument for an
/// unknown name, unknown parameter or non-finite value.
Problem catalog(std::string_view name, const ParameterMap& params = {});

}  // namespace floquet
