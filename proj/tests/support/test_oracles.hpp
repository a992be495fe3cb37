#pragma once

// Test-side oracles, independent of the library evaluation paths they check.

#include <complex>
#include <random>
#include <vector>

#include "fockoplab/entire.hpp"

namespace oracles {

using CplxL = std::complex<long double>;
using fockoplab::Complex;

// Extended-precision evaluation of the structured representations.
inline CplxL eval_longdouble(const fockoplab::EntireFunction& f, Complex zz) {
    const CplxL z{zz.real(), zz.imag()};
    auto lift = [](Complex c) { return CplxL{c.real(), c.imag()}; };
    if (const auto* e = std::get_if<fockoplab::ExpQuadratic>(&f))
        return std::exp(lift(e->a0) + z * (lift(e->a1) + z * lift(e->a2)));
    if (const auto* p = std::get_if<fockoplab::PolyTimesExpQuad>(&f)) {
        CplxL acc{0.0L, 0.0L};
        for (auto it = p->poly.rbegin(); it != p->poly.rend(); ++it) acc = acc * z + lift(*it);
        return acc * std::exp(lift(p->core.a0) + z * (lift(p->core.a1) + z * lift(p->core.a2)));
    }
    const auto& t = std::get<fockoplab::TaylorSeries>(f);
    CplxL acc{0.0L, 0.0L};
    for (auto it = t.coeffs().rbegin(); it != t.coeffs().rend(); ++it) acc = acc * z + lift(*it);
    return acc;
}

// ||(A + B z) exp(a0 + a1 z + a2 z^2)||_2^2 by Gaussian moments: reduce the
// weighted integral to mean/covariance of a 2-d Gaussian and read off the
// first and second moments. Valid when 2|a2| < alpha.
inline double poly1_expquad_norm2_sq(Complex A, Complex B, const fockoplab::ExpQuadratic& g,
                                     double alpha) {
    const double p = 2.0;
    const double u = g.a2.real(), v = g.a2.imag();
    // exponent p Re g(z) - alpha p |z|^2 / 2 = c + b.xi - xi' P xi / 2
    const double pxx = p * (alpha - 2.0 * u), pyy = p * (alpha + 2.0 * u), pxy = p * 2.0 * v;
    const double det = pxx * pyy - pxy * pxy;
    const double b1 = p * g.a1.real(), b2 = -p * g.a1.imag();
    // mean m = P^{-1} b, covariance P^{-1}
    const double mx = (pyy * b1 - pxy * b2) / det;
    const double my = (pxx * b2 - pxy * b1) / det;
    const double sxx = pyy / det, syy = pxx / det, sxy = -pxy / det;
    const double mass = (alpha * p / (2.0 * M_PI)) * (2.0 * M_PI / std::sqrt(det)) *
                        std::exp(p * g.a0.real() + 0.5 * (b1 * mx + b2 * my));
    // moments of x, y, x^2, y^2 against the normalized Gaussian
    const double Ex = mx, Ey = my;
    const double Exx = sxx + mx * mx, Eyy = syy + my * my, Exy = sxy + mx * my;
    // |A + Bz|^2 = |A|^2 + 2 Re(conj(A) B z) + |B|^2 |z|^2
    const Complex cAB = std::conj(A) * B;
    const double lin = 2.0 * (cAB.real() * Ex - cAB.imag() * Ey);
    const double quad = std::norm(B) * (Exx + Eyy);
    return mass * (std::norm(A) + lin + quad);
}

struct TestRng {
    std::mt19937_64 gen;
    explicit TestRng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    Complex disc(double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(0.0, 2.0 * M_PI));
    }
};

}  // namespace oracles
