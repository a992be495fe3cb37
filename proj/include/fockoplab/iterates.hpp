#pragma once

#include "fockoplab/wcomp.hpp"

namespace fockoplab {

/// lambda^n by binary exponentiation (deterministic, exact for dyadic reals).
Complex pow_n(Complex base, long n);

/// phi_n(z) = z0 (1 - lambda^n) + lambda^n z; phi_0 is the identity.
AffineSymbol phi_n(const AffineSymbol& phi, long n);

/// f(s(z)) for an exp-quadratic, again exp-quadratic.
ExpQuadratic compose_affine(const ExpQuadratic& f, const AffineSymbol& s);
/// q(s(z)) coefficients for a polynomial q.
std::vector<Complex> poly_compose_affine(const std::vector<Complex>& q, const AffineSymbol& s);

/// W^n f = psi(z0)^n exp(c0n + c1n z + c2n z^2) f(phi_n(z)).
struct IterateCoeffs {
    long n = 0;
    Complex log_psi_z0_factor;  // n * g(z0); psi(z0)^n = exp of this
    Complex c0n, c1n, c2n;      // c2n = a2 (1 - lambda^{2n}) / (1 - lambda^2)
};

/// Closed-form iterate data. Requires an exp-quadratic multiplier and
/// 0 < |lambda| < 1.
IterateCoeffs iterate_coeffs(const WeightedCompOp& W, long n);

/// Magnitude/phase pair; survives products far beyond double range.
struct LogComplex {
    double log_abs = 0.0;
    double arg = 0.0;
    Complex value() const;
};

/// Product-formula evaluation of (W^n f)(z); the oracle for the closed form.
/// Works for any multiplier representation.
LogComplex iterate_apply_product(const WeightedCompOp& W, const EntireFunction& f, long n,
                                 Complex z);

/// Closed-form evaluation via iterate_coeffs (exp-quadratic multipliers).
LogComplex iterate_apply_closed(const WeightedCompOp& W, const EntireFunction& f, long n,
                                Complex z);

/// exp(c0n + c1n z + c2n z^2) f(phi_n(z)): the scaled iterate psi(z0)^{-n} W^n f.
Complex scaled_iterate_eval(const WeightedCompOp& W, const IterateCoeffs& coeffs,
                            const EntireFunction& f, Complex z);

/// W f as a structured function, when the multiplier is exp-quadratic and f
/// is exp-quadratic or polynomial-times-exp-quadratic; nullopt otherwise.
std::optional<EntireFunction> operator_image(const WeightedCompOp& W, const EntireFunction& f);

/// Limit objects of the scaled iterates on the sup-norm space.
struct LimitData {
    Complex c0;        // limit of c0n (converged value of the derived expansion)
    Complex c1;        // (a1 + lambda a 2 a2/(1-lambda^2)) / (1 - lambda)
    ExpQuadratic F;    // exp(c1 z + a2 beta^{-1} z^2)
    Complex c;         // e^{c0}
    Complex z0;
    Complex c2_limit;  // a2 / (1 - lambda^2)
};

/// Requires lambda real, |a2| = alpha beta / 2 and a bounded non-compact
/// operator; otherwise HypothesisViolated.
LimitData limit_function(const WeightedCompOp& W);

/// (W f)(z) = c F(z) f(z0).
Complex limit_operator_apply(const LimitData& L, const EntireFunction& f, Complex z0, Complex z);

}  // namespace fockoplab
