#include "floquet/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "floquet/error.hpp"

namespace floquet {

namespace {

constexpr double kTrimThreshold = 1e-15;
constexpr int kMaxRatioDenominator = 64;
constexpr Complex kI{0.0, 1.0};

void requirePositiveFrequency(double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        std::ostringstream msg;
        msg << "TrigPoly: omega must be positive and finite, got " << omega;
        throw InvalidArgument(msg.str());
    }
}

bool sameFrequency(double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(x, y); }

}  // namespace

TrigPoly::TrigPoly() = default;

TrigPoly::TrigPoly(double omega) : omega_(omega) { requirePositiveFrequency(omega); }

TrigPoly::TrigPoly(double omega, Complex a0, std::vector<Complex> a, std::vector<Complex> b)
    : omega_(omega), a0_(a0), a_(std::move(a)), b_(std::move(b))
{
    requirePositiveFrequency(omega);
    const std::size_t n = std::max(a_.size(), b_.size());
    a_.resize(n, 0.0);
    b_.resize(n, 0.0);
    trim();
}

TrigPoly TrigPoly::constant(double omega, Complex value) { return TrigPoly(omega, 2.0 * value, {}, {}); }

TrigPoly TrigPoly::cosine(double omega, int harmonic, Complex amplitude)
{
    if (harmonic < 0) throw InvalidArgument("TrigPoly::cosine: negative harmonic");
    if (harmonic == 0) return constant(omega, amplitude);
    std::vector<Complex> a(harmonic, 0.0);
    a[harmonic - 1] = amplitude;
    return TrigPoly(omega, 0.0, std::move(a), {});
}

TrigPoly TrigPoly::sine(double omega, int harmonic, Complex amplitude)
{
    if (harmonic < 0) throw InvalidArgument("TrigPoly::sine: negative harmonic");
    if (harmonic == 0) return TrigPoly(omega);
    std::vector<Complex> b(harmonic, 0.0);
    b[harmonic - 1] = amplitude;
    return TrigPoly(omega, 0.0, {}, std::move(b));
}

TrigPoly TrigPoly::exponential(double omega, int harmonic)
{
    const int k = std::abs(harmonic);
    const double sign = harmonic < 0 ? -1.0 : 1.0;
    return add(cosine(omega, k), sine(omega, k, sign * kI));
}

double TrigPoly::period() const { return 2.0 * std::numbers::pi / omega_; }

Complex TrigPoly::a(int k) const
{
    if (k < 1 || k > degree()) return 0.0;
    return a_[k - 1];
}

Complex TrigPoly::b(int k) const
{
    if (k < 1 || k > degree()) return 0.0;
    return b_[k - 1];
}

Complex TrigPoly::evaluate(double t) const
{
    Complex sum = 0.5 * a0_;
    for (int k = 1; k <= degree(); ++k) {
        const double phase = k * omega_ * t;
        sum += a_[k - 1] * std::cos(phase) + b_[k - 1] * std::sin(phase);
    }
    return sum;
}

TrigPoly TrigPoly::truncated(int n) const
{
    if (n < 0) throw InvalidArgument("TrigPoly::truncated: negative order");
    if (n >= degree()) return *this;
    return TrigPoly(omega_, a0_, {a_.begin(), a_.begin() + n}, {b_.begin(), b_.begin() + n});
}

TrigPoly TrigPoly::conjugate() const
{
    TrigPoly out = *this;
    out.a0_ = std::conj(a0_);
    for (auto& c : out.a_) c = std::conj(c);
    for (auto& c : out.b_) c = std::conj(c);
    return out;
}

TrigPoly TrigPoly::reindexed(int factor) const
{
    if (factor < 1) throw InvalidArgument("TrigPoly::reindexed: factor must be >= 1");
    if (factor == 1) return *this;
    std::vector<Complex> a(static_cast<std::size_t>(degree()) * factor, 0.0);
    std::vector<Complex> b(a.size(), 0.0);
    for (int k = 1; k <= degree(); ++k) {
        a[k * factor - 1] = a_[k - 1];
        b[k * factor - 1] = b_[k - 1];
    }
    return TrigPoly(omega_ / factor, a0_, std::move(a), std::move(b));
}

TrigPoly TrigPoly::shiftedByHarmonic(int k) const
{
    if (k == 0) return *this;
    return mul(*this, exponential(omega_, k));
}

double TrigPoly::maxAbsCoefficient() const
{
    double m = std::abs(a0_);
    for (const auto& c : a_) m = std::max(m, std::abs(c));
    for (const auto& c : b_) m = std::max(m, std::abs(c));
    return m;
}

bool TrigPoly::isReal(double tol) const
{
    if (std::abs(a0_.imag()) > tol) return false;
    for (const auto& c : a_)
        if (std::abs(c.imag()) > tol) return false;
    for (const auto& c : b_)
        if (std::abs(c.imag()) > tol) return false;
    return true;
}

TrigPoly& TrigPoly::operator*=(Complex s)
{
    a0_ *= s;
    for (auto& c : a_) c *= s;
    for (auto& c : b_) c *= s;
    trim();
    return *this;
}

TrigPoly TrigPoly::operator-() const { return scale(*this, -1.0); }

std::vector<Complex> TrigPoly::exponentialCoefficients() const
{
    const int n = degree();
    std::vector<Complex> c(2 * n + 1, 0.0);
    c[n] = 0.5 * a0_;
    for (int k = 1; k <= n; ++k) {
        c[n + k] = 0.5 * (a_[k - 1] - kI * b_[k - 1]);
        c[n - k] = 0.5 * (a_[k - 1] + kI * b_[k - 1]);
    }
    return c;
}

TrigPoly TrigPoly::fromExponential(double omega, std::span<const Complex> c)
{
    if (c.size() % 2 == 0) throw InvalidArgument("TrigPoly::fromExponential: expected odd length");
    const int n = static_cast<int>(c.size() / 2);
    std::vector<Complex> a(n), b(n);
    for (int k = 1; k <= n; ++k) {
        a[k - 1] = c[n + k] + c[n - k];
        b[k - 1] = kI * (c[n + k] - c[n - k]);
    }
    return TrigPoly(omega, 2.0 * c[n], std::move(a), std::move(b));
}

void TrigPoly::trim()
{
    while (!a_.empty() && std::abs(a_.back()) < kTrimThreshold && std::abs(b_.back()) < kTrimThreshold) {
        a_.pop_back();
        b_.pop_back();
    }
}

std::pair<TrigPoly, TrigPoly> alignFrequencies(const TrigPoly& x, const TrigPoly& y)
{
    if (sameFrequency(x.omega(), y.omega())) {
        if (x.omega() == y.omega()) return {x, y};
        return {x, TrigPoly(x.omega(), y.a0(), {y.cosCoefficients().begin(), y.cosCoefficients().end()},
                            {y.sinCoefficients().begin(), y.sinCoefficients().end()})};
    }
    const double ratio = x.omega() / y.omega();
    for (int q = 1; q <= kMaxRatioDenominator; ++q) {
        const double p = std::round(ratio * q);
        if (p < 1.0 || p > kMaxRatioDenominator) continue;
        if (std::abs(ratio * q - p) <= 1e-12 * p) {
            const int px = static_cast<int>(p);
            // ratio = px / q  =>  omega_x / px == omega_y / q
            TrigPoly rx = x.reindexed(px);
            TrigPoly ry = y.reindexed(q);
            return {rx, TrigPoly(rx.omega(), ry.a0(), {ry.cosCoefficients().begin(), ry.cosCoefficients().end()},
                                 {ry.sinCoefficients().begin(), ry.sinCoefficients().end()})};
        }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "frequencies " << x.omega() << " and " << y.omega() << " are not rationally related";
    throw FrequencyMismatch(msg.str());
}

TrigPoly add(const TrigPoly& x, const TrigPoly& y)
{
    auto [u, v] = alignFrequencies(x, y);
    const int n = std::max(u.degree(), v.degree());
    std::vector<Complex> a(n), b(n);
    for (int k = 1; k <= n; ++k) {
        a[k - 1] = u.a(k) + v.a(k);
        b[k - 1] = u.b(k) + v.b(k);
    }
    return TrigPoly(u.omega(), u.a0() + v.a0(), std::move(a), std::move(b));
}

TrigPoly subtract(const TrigPoly& x, const TrigPoly& y) { return add(x, scale(y, -1.0)); }

TrigPoly scale(const TrigPoly& x, Complex s)
{
    TrigPoly out = x;
    out *= s;
    return out;
}

TrigPoly mul(const TrigPoly& x, const TrigPoly& y)
{
    auto [u, v] = alignFrequencies(x, y);
    const std::vector<Complex> cu = u.exponentialCoefficients();
    const std::vector<Complex> cv = v.exponentialCoefficients();
    const int nu = u.degree();
    const int nv = v.degree();
    const int n = nu + nv;
    std::vector<Complex> c(2 * n + 1, 0.0);
    for (int i = -nu; i <= nu; ++i) {
        const Complex ci = cu[i + nu];
        if (ci == 0.0) continue;
        for (int j = -nv; j <= nv; ++j) c[i + j + n] += ci * cv[j + nv];
    }
    return TrigPoly::fromExponential(u.omega(), c);
}

TrigPoly differentiate(const TrigPoly& x)
{
    const int n = x.degree();
    std::vector<Complex> a(n), b(n);
    for (int k = 1; k <= n; ++k) {
        const double kw = k * x.omega();
        a[k - 1] = kw * x.b(k);
        b[k - 1] = -kw * x.a(k);
    }
    return TrigPoly(x.omega(), 0.0, std::move(a), std::move(b));
}

Complex evaluate(const TrigPoly& x, double t) { return x.evaluate(t); }

SecularFunction primitive(const TrigPoly& x)
{
    const int n = x.degree();
    std::vector<Complex> a(n), b(n);
    Complex offset = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double kw = k * x.omega();
        a[k - 1] = -x.b(k) / kw;
        b[k - 1] = x.a(k) / kw;
        offset += x.b(k) / kw;
    }
    // the constant term makes the periodic part vanish at t = 0
    return {x.mean(), TrigPoly(x.omega(), 2.0 * offset, std::move(a), std::move(b))};
}

double expWeightedNormIntegral(const TrigPoly& p, Complex c)
{
    const TrigPoly power = mul(p, p.conjugate());
    const double s = 2.0 * c.real();
    const double w = p.omega();
    const double period = p.period();
    // int_0^T e^{s t} dt, continuous in s
    const double growth = std::expm1(s * period);
    const double base = s == 0.0 ? period : growth / s;
    double total = 0.5 * power.a0().real() * base;
    for (int k = 1; k <= power.degree(); ++k) {
        const double kw = k * w;
        const double denom = s * s + kw * kw;
        total += power.a(k).real() * growth * s / denom;
        total += power.b(k).real() * growth * (-kw) / denom;
    }
    return std::max(total, 0.0);
}

}  // namespace floquet
