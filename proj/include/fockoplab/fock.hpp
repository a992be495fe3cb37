#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fockoplab/entire.hpp"

namespace fockoplab {

enum class SpaceFlavor { Fp, FinftyFull, FinftyZero };

/// Ambient space F^p_alpha (or F^infty_alpha / F^infty_{alpha,0}).
struct FockContext {
    double p = 2.0;        // in [1, inf]; infinity encoded as the IEEE value
    double alpha = 1.0;    // > 0
    SpaceFlavor flavor = SpaceFlavor::Fp;

    FockContext() = default;
    FockContext(double p_, double alpha_, SpaceFlavor flavor_);

    static FockContext finite(double p, double alpha);
    static FockContext sup(double alpha, bool zero_subspace = false);

    bool infinite_p() const;
};

enum class NormMethod { ExactGaussian, Quadrature, RaySup };

struct NormResult {
    double value = 0.0;  // +infinity encodes a divergent norm
    NormMethod method = NormMethod::ExactGaussian;
    double error_estimate = 0.0;

    bool finite() const;
};

/// ||k_z|| = exp(alpha |z|^2 / 2), the same in every F^p_alpha.
double kernel_norm(Complex z, const FockContext& ctx);

/// Exact Gaussian norm of exp(a0 + a1 z + a2 z^2) for p < infinity, via
/// completing the square; +infinity when the quadratic part is not
/// negative definite. det_override replaces alpha^2 - 4|a2|^2 when the
/// caller has a cancellation-free expression for it.
NormResult gaussian_norm_expquad(const ExpQuadratic& f, const FockContext& ctx);
double log_gaussian_norm_expquad(const ExpQuadratic& f, double p, double alpha,
                                 std::optional<double> det_override = std::nullopt);

/// Exact sup-norm of an exp-quadratic against the Gaussian weight
/// (+infinity when the weighted modulus is unbounded).
NormResult sup_norm_expquad(const ExpQuadratic& f, double alpha);

/// Norm in the given context. Exp-quadratics take the exact closed forms;
/// other representations go through adaptive quadrature (p finite) or the
/// expanding-grid supremum search (p infinite).
NormResult fock_norm(const EntireFunction& f, const FockContext& ctx, double tol = 1e-10);

/// Reference quadrature path, available for any p < infinity regardless of
/// representation. Used to cross-check the closed forms.
NormResult fock_norm_quadrature(const EntireFunction& f, const FockContext& ctx, double tol);

/// Expanding polar-grid supremum with envelope certification (p = infinity).
NormResult fock_norm_raysup(const EntireFunction& f, const FockContext& ctx, double tol);

/// Structural bound |f(z)| <= D(r) exp(A + B r + C r^2) on |z| = r, with D a
/// polynomial with nonnegative coefficients. Drives the quadrature tail
/// certificates; `valid` is false when no such bound is available.
struct GrowthEnvelope {
    double log_const = 0.0;  // A
    double linear = 0.0;     // B
    double quadratic = 0.0;  // C
    int degree = 0;
    bool valid = false;
    std::function<double(double)> log_poly;  // ln D(r); empty means D = 1

    double log_value(double r) const;
};

GrowthEnvelope growth_envelope(const EntireFunction& f, double alpha);
/// Envelope of z -> f(a + lambda z) given one for f.
GrowthEnvelope envelope_after_affine(const GrowthEnvelope& e, double abs_a, double abs_lambda);
/// Envelope of exp(c0 + c1 z + c2 z^2) * f.
GrowthEnvelope envelope_product_expquad(GrowthEnvelope e, Complex c0, Complex c1, Complex c2);

/// Quadrature norm of an arbitrary evaluable function given via ln|f| and a
/// growth envelope for the tail certificate (p < infinity).
NormResult fock_norm_callable(const std::function<double(Complex)>& log_abs_f,
                              const GrowthEnvelope& env, const FockContext& ctx, double tol);

enum class Membership { In, NotIn, BoundaryIn, Indeterminate };

/// Space membership. Structured multipliers are decided by comparing the
/// quadratic growth coefficient against alpha/2 (boundary cases resolved
/// algebraically for F^infty); truncated series by growth estimation.
Membership membership(const EntireFunction& f, const FockContext& ctx);

enum class RayTrend { DecaysToZero, BoundedNonVanishing, Grows };

struct RayProfile {
    double theta = 0.0;
    RayTrend verdict = RayTrend::DecaysToZero;
    double log_slope = 0.0;      // last-quartile slope of ln(|f| e^{-alpha r^2/2})
    double last_log_value = 0.0;
    std::vector<double> radii;
    std::vector<double> log_values;
};

struct DecayProfile {
    std::vector<RayProfile> rays;
    bool any_nonvanishing() const;
    bool all_decay() const;
};

/// Per-ray behaviour of |f(r e^{i theta})| e^{-alpha r^2 / 2} out to r_max
/// (clamped to the certified radius for truncated series). Requires
/// n_rays >= 4; verdicts use the last-quartile log-slope with threshold 1e-6.
DecayProfile decay_profile(const EntireFunction& f, double alpha, int n_rays, double r_max);

std::string to_string(Membership m);
std::string to_string(NormMethod m);
std::string to_string(RayTrend t);
std::string to_string(SpaceFlavor f);

}  // namespace fockoplab
