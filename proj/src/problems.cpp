#include "floquet/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "floquet/error.hpp"

namespace floquet {

namespace {

// Brings every entry onto the finest common frequency.
template <std::size_t N>
void alignAll(std::array<TrigPoly*, N> polys)
{
    for (std::size_t pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 1; i < N; ++i) {
            auto [x, y] = alignFrequencies(*polys[0], *polys[i]);
            *polys[0] = std::move(x);
            *polys[i] = std::move(y);
        }
    }
}

}  // namespace

ScalarODE::ScalarODE(TrigPoly p, TrigPoly q, TrigPoly r) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r))
{
    alignAll<3>({&p_, &q_, &r_});
    if (p_.isZero()) throw InvalidArgument("ScalarODE: leading coefficient p is identically zero");
}

bool ScalarODE::isReal(double tol) const { return p_.isReal(tol) && q_.isReal(tol) && r_.isReal(tol); }

Eigen::Matrix2d ScalarODE::companionAt(double t) const
{
    const double p = p_.evaluate(t).real();
    Eigen::Matrix2d a;
    a << 0.0, 1.0, -r_.evaluate(t).real() / p, -q_.evaluate(t).real() / p;
    return a;
}

PlanarSystem::PlanarSystem(TrigPoly a11, TrigPoly a12, TrigPoly a21, TrigPoly a22)
    : a11_(std::move(a11)), a12_(std::move(a12)), a21_(std::move(a21)), a22_(std::move(a22))
{
    alignAll<4>({&a11_, &a12_, &a21_, &a22_});
}

bool PlanarSystem::isReal(double tol) const
{
    return a11_.isReal(tol) && a12_.isReal(tol) && a21_.isReal(tol) && a22_.isReal(tol);
}

Eigen::Matrix2cd PlanarSystem::at(double t) const
{
    Eigen::Matrix2cd a;
    a << a11_(t), a12_(t), a21_(t), a22_(t);
    return a;
}

Eigen::Matrix2cd PlanarSystem::mean() const
{
    Eigen::Matrix2cd a;
    a << a11_.mean(), a12_.mean(), a21_.mean(), a22_.mean();
    return a;
}

HillForm hillTransform(const ScalarODE& ode)
{
    if (!ode.hasConstantLeading())
        throw DegenerateProblem("hillTransform: leading coefficient is not a nonzero constant");
    const Complex lead = ode.p().mean();
    const TrigPoly a = scale(ode.q(), 1.0 / lead);
    const TrigPoly b = scale(ode.r(), 1.0 / lead);
    const TrigPoly f = b - scale(differentiate(a), 0.5) - scale(mul(a, a), 0.25);
    return {f, -0.5 * a.mean()};
}

PlanarSystem scalarToSystem(const ScalarODE& ode)
{
    if (!ode.hasConstantLeading())
        throw DegenerateProblem("scalarToSystem: leading coefficient is not a nonzero constant");
    const Complex lead = ode.p().mean();
    const double w = ode.omega();
    return PlanarSystem(TrigPoly(w), TrigPoly::constant(w, 1.0), scale(ode.r(), -1.0 / lead),
                        scale(ode.q(), -1.0 / lead));
}

namespace {

ScalarODE eliminate(const TrigPoly& a11, const TrigPoly& a12, const TrigPoly& a21, const TrigPoly& a22)
{
    const TrigPoly da11 = differentiate(a11);
    const TrigPoly da12 = differentiate(a12);
    const TrigPoly q = -(a11 * a12 + da12 + a22 * a12);
    const TrigPoly r = a11 * da12 + a11 * a12 * a22 - a12 * da11 - a12 * a12 * a21;
    return ScalarODE(a12, q, r);
}

}  // namespace

ScalarODE systemToScalar(const PlanarSystem& sys)
{
    if (!sys.a12().isZero()) return eliminate(sys.a11(), sys.a12(), sys.a21(), sys.a22());
    if (!sys.a21().isZero()) return eliminate(sys.a22(), sys.a21(), sys.a12(), sys.a11());
    throw DegenerateProblem(
        "systemToScalar: both off-diagonal entries vanish; the system is decoupled into two scalar "
        "first-order equations");
}

std::string_view toString(Boundedness b)
{
    switch (b) {
        case Boundedness::AllBounded: return "all_bounded";
        case Boundedness::UnstableRealPart: return "unstable_real_part";
        case Boundedness::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Boundedness boundednessCriterion(const TrigPoly& f)
{
    const double scaleTol = 1e-12 * std::max(1.0, f.maxAbsCoefficient());
    if (!f.isReal(scaleTol)) throw InvalidArgument("boundednessCriterion: f must be real-valued");

    constexpr int kSamples = 4096;
    const double period = f.period();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < kSamples; ++i) {
        const double v = f.evaluate(period * i / kSamples).real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // |f - mean| is bounded by the sum of harmonic amplitudes
    double spread = 0.0;
    for (int k = 1; k <= f.degree(); ++k) spread += std::abs(f.a(k).real()) + std::abs(f.b(k).real());
    const double mean = f.mean().real();
    const bool positive = mean - spread > 0.0 || lo > 0.0;
    const bool negative = mean + spread < 0.0 || hi < 0.0;

    if (positive && period * period * mean <= 4.0) return Boundedness::AllBounded;
    if (negative) return Boundedness::UnstableRealPart;
    return Boundedness::Inconclusive;
}

namespace {

const std::vector<CatalogEntry>& entries()
{
    static const std::vector<CatalogEntry> list = {
        {"mathieu", "x'' + omega^2 (1 - alpha cos t) x = 0", {{"omega", 1.0}, {"alpha", 0.5}}},
        {"marcus_yamabe",
         "Marcus-Yamabe system: a11 = -1 + 3/2 cos^2 t, a12 = 1 - 3/2 cos t sin t, "
         "a21 = -1 - 3/2 cos t sin t, a22 = -1 + 3/2 sin^2 t",
         {}},
        {"commuting_example", "a11 = a22 = -1, a12 = 2 + sin t, a21 = -(2 + sin t)", {}},
    };
    return list;
}

double parameter(const CatalogEntry& entry, const ParameterMap& params, const std::string& key)
{
    for (const auto& [name, fallback] : entry.parameters) {
        if (name != key) continue;
        auto it = params.find(key);
        const double v = it == params.end() ? fallback : it->second;
        if (!std::isfinite(v)) throw InvalidArgument(entry.name + ": parameter '" + key + "' must be finite");
        return v;
    }
    throw InvalidArgument(entry.name + ": no parameter named '" + key + "'");
}

}  // namespace

std::span<const CatalogEntry> catalogEntries() { return entries(); }

Problem catalog(std::string_view name, const ParameterMap& params)
{
    const auto& list = entries();
    auto it = std::find_if(list.begin(), list.end(), [&](const CatalogEntry& e) { return e.name == name; });
    if (it == list.end()) throw InvalidArgument("unknown catalog problem '" + std::string(name) + "'");
    for (const auto& [key, value] : params) {
        const bool known = std::any_of(it->parameters.begin(), it->parameters.end(),
                                       [&](const auto& p) { return p.first == key; });
        if (!known) throw InvalidArgument(it->name + ": no parameter named '" + key + "'");
    }

    constexpr double w = 1.0;
    if (it->name == "mathieu") {
        const double omega = parameter(*it, params, "omega");
        const double alpha = parameter(*it, params, "alpha");
        const double w2 = omega * omega;
        return ScalarODE(TrigPoly::constant(w, 1.0), TrigPoly(w), TrigPoly(w, 2.0 * w2, {-alpha * w2}, {}));
    }
    if (it->name == "marcus_yamabe") {
        // double-angle forms: cos^2 = (1 + cos 2t)/2, sin^2 = (1 - cos 2t)/2, cos sin = sin 2t / 2
        return PlanarSystem(TrigPoly(w, -0.5, {0.0, 0.75}, {}), TrigPoly(w, 2.0, {}, {0.0, -0.75}),
                            TrigPoly(w, -2.0, {}, {0.0, -0.75}), TrigPoly(w, -0.5, {0.0, -0.75}, {}));
    }
    // commuting_example
    const TrigPoly a12(w, 4.0, {}, {1.0});
    return PlanarSystem(TrigPoly::constant(w, -1.0), a12, -a12, TrigPoly::constant(w, -1.0));
}

}  // namespace floquet
