#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace floquet {

using Complex = std::complex<double>;

/// Truncated Fourier series on a fixed fundamental frequency omega:
///
///     P(t) = a0/2 + sum_{k=1..n} a_k cos(k omega t) + b_k sin(k omega t)
///
/// Coefficients are complex; real problems simply carry zero imaginary
/// parts. The a0/2 convention is kept so that coefficient vectors compare
/// one-to-one with published Fourier solutions.
///
/// Values are immutable once built. After every operation trailing
/// harmonics whose coefficients are both below 1e-15 in magnitude are
/// dropped, so degree() is the highest significant harmonic.
class TrigPoly {
public:
    /// Zero polynomial with omega = 1.
    TrigPoly();
    /// Zero polynomial on the given frequency. Throws InvalidArgument unless omega > 0.
    explicit TrigPoly(double omega);
    /// a and b hold harmonics 1..n; the shorter one is zero-padded.
    TrigPoly(double omega, Complex a0, std::vector<Complex> a, std::vector<Complex> b);

    static TrigPoly constant(double omega, Complex value);
    static TrigPoly cosine(double omega, int harmonic, Complex amplitude = 1.0);
    static TrigPoly sine(double omega, int harmonic, Complex amplitude = 1.0);
    /// e^{i k omega t}, i.e. cos(k omega t) + i sin(k omega t).
    static TrigPoly exponential(double omega, int harmonic);

    double omega() const { return omega_; }
    double period() const;
    int degree() const { return static_cast<int>(a_.size()); }

    Complex a0() const { return a0_; }
    /// Cosine coefficient of harmonic k >= 1 (zero beyond the degree).
    Complex a(int k) const;
    /// Sine coefficient of harmonic k >= 1 (zero beyond the degree).
    Complex b(int k) const;
    std::span<const Complex> cosCoefficients() const { return a_; }
    std::span<const Complex> sinCoefficients() const { return b_; }

    /// Mean value over one period, a0/2.
    Complex mean() const { return 0.5 * a0_; }

    Complex evaluate(double t) const;
    Complex operator()(double t) const { return evaluate(t); }

    /// Harmonics above n discarded.
    TrigPoly truncated(int n) const;
    TrigPoly conjugate() const;
    /// Same function expressed on the frequency omega / factor.
    TrigPoly reindexed(int factor) const;
    /// Product with e^{i k omega t}.
    TrigPoly shiftedByHarmonic(int k) const;

    double maxAbsCoefficient() const;
    bool isZero(double tol = 0.0) const { return maxAbsCoefficient() <= tol; }
    /// True when every coefficient has |imag| <= tol.
    bool isReal(double tol) const;
    bool isConstant() const { return a_.empty(); }

    TrigPoly& operator*=(Complex s);
    TrigPoly operator-() const;

    /// Coefficients in the exponential basis, index k + degree for k in [-n, n].
    std::vector<Complex> exponentialCoefficients() const;
    static TrigPoly fromExponential(double omega, std::span<const Complex> c);

private:
    void trim();

    double omega_ = 1.0;
    Complex a0_ = 0.0;
    std::vector<Complex> a_;
    std::vector<Complex> b_;
};

/// Brings two polynomials onto a common fundamental frequency. When the
/// ratio of their frequencies is p/q with small integers, both are
/// re-indexed onto omega_x / p == omega_y / q. Throws FrequencyMismatch
/// for ratios that are not (numerically) rational with denominators up to 64.
std::pair<TrigPoly, TrigPoly> alignFrequencies(const TrigPoly& x, const TrigPoly& y);

TrigPoly add(const TrigPoly& x, const TrigPoly& y);
TrigPoly subtract(const TrigPoly& x, const TrigPoly& y);
/// Exact product; degree is deg x + deg y, nothing is truncated.
TrigPoly mul(const TrigPoly& x, const TrigPoly& y);
TrigPoly scale(const TrigPoly& x, Complex s);
TrigPoly differentiate(const TrigPoly& x);
Complex evaluate(const TrigPoly& x, double t);

inline TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) { return add(x, y); }
inline TrigPoly operator-(const TrigPoly& x, const TrigPoly& y) { return subtract(x, y); }
inline TrigPoly operator*(const TrigPoly& x, const TrigPoly& y) { return mul(x, y); }
inline TrigPoly operator*(Complex s, const TrigPoly& x) { return scale(x, s); }
inline TrigPoly operator*(const TrigPoly& x, Complex s) { return scale(x, s); }

/// slope * t + periodic(t): the antiderivative of a TrigPoly.
struct SecularFunction {
    Complex slope = 0.0;
    TrigPoly periodic;

    Complex value(double t) const { return slope * t + periodic.evaluate(t); }
    Complex operator()(double t) const { return value(t); }
};

/// Antiderivative vanishing at t = 0. The slope is the mean a0/2.
SecularFunction primitive(const TrigPoly& x);

/// Closed form of  int_0^T exp(2 Re(c) t) |P(t)|^2 dt  with T = 2 pi / omega.
double expWeightedNormIntegral(const TrigPoly& p, Complex c);

}  // namespace floquet
