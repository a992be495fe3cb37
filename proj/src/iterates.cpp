#include "fockoplab/iterates.hpp"

#include <cmath>
#include <limits>

namespace fockoplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelSlack = 1e-12;

bool lambda_is_real(Complex l) { return std::abs(l.imag()) <= kRelSlack * (1.0 + std::abs(l)); }

}  // namespace

Complex pow_n(Complex base, long n) {
    Complex acc{1.0, 0.0};
    Complex b = base;
    for (long e = n; e > 0; e >>= 1) {
        if (e & 1) acc *= b;
        b *= b;
    }
    return acc;
}

AffineSymbol phi_n(const AffineSymbol& phi, long n) {
    if (n < 0) throw std::invalid_argument("phi_n: n must be nonnegative");
    if (n == 0) return {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    if (phi.lambda == Complex{1.0, 0.0}) {
        if (phi.a == Complex{0.0, 0.0}) return {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
        throw NoFixedPoint("phi_n with lambda = 1 and a != 0 has no fixed point");
    }
    const Complex ln = pow_n(phi.lambda, n);
    const Complex z0 = phi.fixed_point();
    return {z0 * (Complex{1.0, 0.0} - ln), ln};
}

ExpQuadratic compose_affine(const ExpQuadratic& f, const AffineSymbol& s) {
    const Complex t = s.a, l = s.lambda;
    return {f.a0 + f.a1 * t + f.a2 * t * t, (f.a1 + 2.0 * f.a2 * t) * l, f.a2 * l * l};
}

std::vector<Complex> poly_compose_affine(const std::vector<Complex>& q, const AffineSymbol& s) {
    // Horner in the composed variable: result(z) = q(a + lambda z).
    std::vector<Complex> acc{Complex{0.0, 0.0}};
    for (auto it = q.rbegin(); it != q.rend(); ++it) {
        // acc = acc * (a + lambda z) + coefficient
        std::vector<Complex> next(acc.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i] * s.a;
            next[i + 1] += acc[i] * s.lambda;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    while (acc.size() > 1 && acc.back() == Complex{0.0, 0.0}) acc.pop_back();
    return acc;
}

IterateCoeffs iterate_coeffs(const WeightedCompOp& W, long n) {
    auto canon = as_exp_quadratic(W.psi);
    if (!canon) throw WrongMultiplierKind("iterate_coeffs requires an exp-quadratic multiplier");
    if (n < 1) throw std::invalid_argument("iterate_coeffs: n must be positive");
    const Complex l = W.phi.lambda;
    const double mod_l = std::abs(l);
    if (mod_l <= kRelSlack || mod_l >= 1.0 - 1e-15)
        throw DegenerateLambda("iterate_coeffs requires 0 < |lambda| < 1");

    const Complex one{1.0, 0.0};
    const Complex ln = pow_n(l, n);
    const Complex l2n = ln * ln;
    const Complex s1 = (one - ln) / (one - l);
    const Complex s2 = (one - l2n) / (one - l * l);
    const Complex z0 = W.phi.fixed_point();
    const Complex a1 = canon->a1, a2 = canon->a2;

    IterateCoeffs c;
    c.n = n;
    c.log_psi_z0_factor = static_cast<double>(n) * canon->log_at(z0);
    c.c2n = a2 * s2;
    c.c1n = a1 * s1 + 2.0 * a2 * z0 * (s1 - s2);
    c.c0n = -a1 * s1 * z0 - 2.0 * a2 * s1 * z0 * z0 + a2 * s2 * z0 * z0;
    return c;
}

Complex LogComplex::value() const { return std::polar(std::exp(log_abs), arg); }

LogComplex iterate_apply_product(const WeightedCompOp& W, const EntireFunction& f, long n,
                                 Complex z) {
    if (n < 0) throw std::invalid_argument("iterate_apply_product: n must be nonnegative");
    LogComplex acc{0.0, 0.0};
    Complex w = z;
    for (long k = 0; k < n; ++k) {
        const Complex v = eval(W.psi, w);
        if (v == Complex{0.0, 0.0}) return {-kInf, 0.0};
        acc.log_abs += std::log(std::abs(v));
        acc.arg += std::arg(v);
        w = W.phi(w);
    }
    const Complex fv = eval(f, w);
    if (fv == Complex{0.0, 0.0}) return {-kInf, 0.0};
    acc.log_abs += std::log(std::abs(fv));
    acc.arg += std::arg(fv);
    return acc;
}

LogComplex iterate_apply_closed(const WeightedCompOp& W, const EntireFunction& f, long n,
                                Complex z) {
    const IterateCoeffs c = iterate_coeffs(W, n);
    const Complex expo = c.log_psi_z0_factor + c.c0n + c.c1n * z + c.c2n * z * z;
    const Complex fv = eval(f, phi_n(W.phi, n)(z));
    if (fv == Complex{0.0, 0.0}) return {-kInf, 0.0};
    return {expo.real() + std::log(std::abs(fv)), expo.imag() + std::arg(fv)};
}

Complex scaled_iterate_eval(const WeightedCompOp& W, const IterateCoeffs& coeffs,
                            const EntireFunction& f, Complex z) {
    const Complex expo = coeffs.c0n + coeffs.c1n * z + coeffs.c2n * z * z;
    return std::exp(expo) * eval(f, phi_n(W.phi, coeffs.n)(z));
}

std::optional<EntireFunction> operator_image(const WeightedCompOp& W, const EntireFunction& f) {
    auto psi = as_exp_quadratic(W.psi);
    if (!psi) return std::nullopt;
    if (auto fe = as_exp_quadratic(f)) {
        const ExpQuadratic fc = compose_affine(*fe, W.phi);
        return EntireFunction{
            ExpQuadratic{psi->a0 + fc.a0, psi->a1 + fc.a1, psi->a2 + fc.a2}};
    }
    if (const auto* pq = std::get_if<PolyTimesExpQuad>(&f)) {
        const ExpQuadratic fc = compose_affine(pq->core, W.phi);
        return EntireFunction{PolyTimesExpQuad(
            poly_compose_affine(pq->poly, W.phi),
            ExpQuadratic{psi->a0 + fc.a0, psi->a1 + fc.a1, psi->a2 + fc.a2})};
    }
    return std::nullopt;
}

LimitData limit_function(const WeightedCompOp& W) {
    auto canon = as_exp_quadratic(W.psi);
    if (!canon) throw HypothesisViolated("limit_function requires an exp-quadratic multiplier");
    const Complex l = W.phi.lambda;
    const double mod_l = std::abs(l);
    if (!lambda_is_real(l) || mod_l <= kRelSlack || mod_l >= 1.0 - 1e-15)
        throw HypothesisViolated("limit_function requires real lambda with 0 < |lambda| < 1");
    const double ab2 = 0.5 * W.ctx.alpha * W.phi.beta();
    if (std::abs(std::abs(canon->a2) - ab2) > kRelSlack * (std::abs(canon->a2) + ab2))
        throw HypothesisViolated("limit_function requires |a2| = alpha beta / 2");
    if (classify(W).verdict != Verdict::BoundedNotCompact)
        throw HypothesisViolated("limit_function requires a bounded non-compact operator");

    const Complex one{1.0, 0.0};
    const Complex a = W.phi.a, a1 = canon->a1, a2 = canon->a2;
    const Complex z0 = W.phi.fixed_point();
    const Complex s1 = one / (one - l);
    const Complex s2 = one / (one - l * l);

    LimitData out;
    out.z0 = z0;
    out.c1 = s1 * (a1 + l * a * 2.0 * a2 * s2);
    out.c0 = -a1 * s1 * z0 - 2.0 * a2 * s1 * z0 * z0 + a2 * s2 * z0 * z0;
    out.c2_limit = a2 * s2;
    out.F = ExpQuadratic{Complex{0.0, 0.0}, out.c1, out.c2_limit};
    out.c = std::exp(out.c0);
    return out;
}

Complex limit_operator_apply(const LimitData& L, const EntireFunction& f, Complex z0, Complex z) {
    return L.c * L.F(z) * eval(f, z0);
}

}  // namespace fockoplab
