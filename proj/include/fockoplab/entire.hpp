#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "fockoplab/errors.hpp"

namespace fockoplab {

using Complex = std::complex<double>;

/// Growth scale of an entire function: order rho and, when defined, type sigma.
enum class ProfileExactness { Exact, Estimated };

struct GrowthProfile {
    double order = 0.0;               // +infinity when growth exceeds every finite order
    std::optional<double> type;       // defined only for finite positive order
    ProfileExactness exactness = ProfileExactness::Exact;

    bool order_is_finite() const;
};

/// psi(z) = exp(a0 + a1 z + a2 z^2). Zero-free by construction.
struct ExpQuadratic {
    Complex a0{0.0, 0.0};
    Complex a1{0.0, 0.0};
    Complex a2{0.0, 0.0};

    Complex log_at(Complex z) const { return a0 + z * (a1 + z * a2); }
    Complex operator()(Complex z) const { return std::exp(log_at(z)); }
};

/// Q(z) * exp(a0 + a1 z + a2 z^2) with Q a polynomial, leading coefficient nonzero.
struct PolyTimesExpQuad {
    std::vector<Complex> poly;  // ascending degree, canonical (trailing zeros stripped)
    ExpQuadratic core;

    PolyTimesExpQuad(std::vector<Complex> q, ExpQuadratic c);

    Complex poly_at(Complex z) const;
    Complex operator()(Complex z) const { return poly_at(z) * core(z); }
    int degree() const { return static_cast<int>(poly.size()) - 1; }
    bool poly_is_constant() const { return poly.size() == 1; }
};

/// Coefficient envelope |c_n| <= scale * geometric^n / sqrt(n!), valid for all n.
struct TaylorTail {
    double scale = 1.0;
    double geometric = 0.0;
};

/// Truncated Taylor expansion at 0 with a declared tail envelope.
///
/// Evaluation is Horner on the stored coefficients and refuses points where
/// the envelope cannot certify the truncation error (RadiusExceeded). The
/// certified radius is the largest r with tail(r) <= 1e-12 * (1 + sum |c_n| r^n).
class TaylorSeries {
public:
    TaylorSeries(std::vector<Complex> coeffs, TaylorTail tail);

    Complex operator()(Complex z) const;

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    const TaylorTail& tail() const { return tail_; }
    double certified_radius() const { return certified_radius_; }

    /// Upper bound on the absolute truncation error at |z| = r (any r).
    double truncation_bound(double r) const;
    double log_truncation_bound(double r) const;
    /// Upper bound on |f| at |z| = r, valid for any r.
    double magnitude_envelope(double r) const;

private:
    std::vector<Complex> coeffs_;
    TaylorTail tail_;
    double certified_radius_ = 0.0;
};

using EntireFunction = std::variant<ExpQuadratic, PolyTimesExpQuad, TaylorSeries>;

Complex eval(const EntireFunction& f, Complex z);

/// ln |f(z)|, computed without forming e^{...} for the structured kinds, so
/// it stays finite where eval would overflow. -infinity at zeros of f.
double log_abs_eval(const EntireFunction& f, Complex z);

/// Exact profile for the structured forms; coefficient-based estimate for
/// truncated series (at least 16 nonzero coefficients required).
GrowthProfile order_type(const EntireFunction& f);

/// Max of |f| over n_theta-point nested angular grids on |z| = r. A lower
/// bound on the true maximum modulus, nondecreasing in n_theta; the grid
/// always contains theta = 0. Requires n_theta >= 8.
double max_modulus(const EntireFunction& f, double r, int n_theta);

/// (exp(c z^2) - 1) / z as a truncated odd series with exact coefficients
/// c^k / k! on z^{2k-1}.
TaylorSeries expm1_quadratic_over_z(Complex c, int quadratic_terms = 320);

/// factor * f, keeping the representation (a0 shift for exp-quadratics).
EntireFunction scaled(const EntireFunction& f, Complex factor);

/// Collapses a constant-polynomial PolyTimesExpQuad into its core.
std::optional<ExpQuadratic> as_exp_quadratic(const EntireFunction& f);

/// Upper bound on |f| over |z| = r, valid for every r >= 0.
double magnitude_envelope(const EntireFunction& f, double r);

/// Largest radius at which eval is certified (+inf for the structured forms).
double evaluation_radius(const EntireFunction& f);

}  // namespace fockoplab
