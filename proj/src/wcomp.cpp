#include "fockoplab/wcomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockoplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelSlack = 1e-12;

bool near(double x, double y, double slack = kRelSlack) {
    return std::abs(x - y) <= slack * std::max({std::abs(x), std::abs(y), 1e-300});
}

double principal_theta2(Complex a2) {
    // a2 = |a2| e^{-2 i theta2} with theta2 in [0, pi)
    if (a2 == Complex{0.0, 0.0}) return 0.0;
    double t = std::fmod(-0.5 * std::arg(a2) + M_PI, M_PI);
    if (t < 0.0) t += M_PI;
    return t;
}

}  // namespace

Complex AffineSymbol::fixed_point() const {
    if (!has_fixed_point())
        throw NoFixedPoint("affine symbol with lambda = 1 has no fixed point");
    return a / (Complex{1.0, 0.0} - lambda);
}

AffineSymbol AffineSymbol::after(const AffineSymbol& inner) const {
    return {a + lambda * inner.a, lambda * inner.lambda};
}

WeightedCompOp::WeightedCompOp(EntireFunction psi_, AffineSymbol phi_, FockContext ctx_)
    : psi(std::move(psi_)), phi(phi_), ctx(ctx_) {
    if (const auto* t = std::get_if<TaylorSeries>(&psi)) {
        bool nonzero = false;
        for (const Complex& c : t->coeffs()) nonzero = nonzero || (c != Complex{0.0, 0.0});
        if (!nonzero)
            throw std::invalid_argument("WeightedCompOp: multiplier must not be identically zero");
    }
}

Complex apply(const WeightedCompOp& W, const EntireFunction& f, Complex z) {
    return eval(W.psi, z) * eval(f, W.phi(z));
}

double log_m_z(const WeightedCompOp& W, Complex z) {
    double log_psi2;
    if (const auto* e = std::get_if<ExpQuadratic>(&W.psi)) {
        log_psi2 = 2.0 * e->log_at(z).real();
    } else {
        const double a = std::abs(eval(W.psi, z));
        log_psi2 = a > 0.0 ? 2.0 * std::log(a) : -kInf;
    }
    return log_psi2 + W.ctx.alpha * (std::norm(W.phi(z)) - std::norm(z));
}

double m_z(const WeightedCompOp& W, Complex z) { return std::exp(log_m_z(W, z)); }

std::pair<double, double> Mat2::eigenvalues() const {
    const double mean = 0.5 * (xx + yy);
    const double disc = std::hypot(0.5 * (xx - yy), xy);
    return {mean + disc, mean - disc};
}

LogMQuadraticForm logm_quadratic_form(const WeightedCompOp& W) {
    if (!(std::abs(W.phi.lambda) < 1.0))
        throw std::invalid_argument("logm_quadratic_form requires |lambda| < 1");
    const ExpQuadratic* core = nullptr;
    LogMQuadraticForm out;
    auto canon = as_exp_quadratic(W.psi);
    ExpQuadratic canon_store;
    if (canon) {
        canon_store = *canon;
        core = &canon_store;
    } else if (const auto* pq = std::get_if<PolyTimesExpQuad>(&W.psi)) {
        core = &pq->core;
        out.poly = pq->poly;
    } else {
        throw WrongMultiplierKind("logm_quadratic_form needs a structured multiplier");
    }
    const double alpha = W.ctx.alpha;
    const double ab = alpha * W.phi.beta();
    const double u = core->a2.real(), v = core->a2.imag();
    out.A = Mat2{2.0 * u - ab, -2.0 * v, -2.0 * u - ab};
    out.t = core->a1 + alpha * std::conj(W.phi.a) * W.phi.lambda;
    out.log_c = 2.0 * core->a0.real() + alpha * std::norm(W.phi.a);
    return out;
}

MzScanResult mz_scan(const WeightedCompOp& W, double r_cap) {
    MzScanResult out;
    out.sup_log = log_m_z(W, Complex{0.0, 0.0});
    const double cap = std::min(r_cap, 0.95 * evaluation_radius(W.psi));
    const int n_theta = 128;

    auto ring_max = [&](double r) {
        double best = -kInf;
        for (int j = 0; j < n_theta; ++j)
            best = std::max(best, log_m_z(W, std::polar(r, 2.0 * M_PI * j / n_theta)));
        return best;
    };
    auto value_at = [&](double r) {
        // nearest recorded ring at or below r
        double best = -kInf;
        for (const auto& [rr, vv] : out.ring_max_log)
            if (rr <= r * 1.03) best = vv;
        return best;
    };

    for (double r = 0.25; r <= cap; r = r * 1.05 + 0.05) {
        const double v = ring_max(r);
        out.ring_max_log.emplace_back(r, v);
        out.sup_log = std::max(out.sup_log, v);
        out.radius = r;
        // Growth of e^300 across a quadrupling of the radius cannot come
        // from the linear transient; only a dominant quadratic exponent
        // does that in this function class.
        if (r >= 20.0) {
            const double quarter = value_at(r / 4.0);
            if (std::isfinite(quarter) && v > quarter + 300.0) {
                out.diverges = true;
                return out;
            }
        }
    }
    // The trailing trend decides: growth, decay, or a flat profile.
    const std::size_t n = out.ring_max_log.size();
    if (n >= 8) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 3 * n / 4; i < n; ++i) {
            const auto& [r, v] = out.ring_max_log[i];
            if (!std::isfinite(v)) continue;
            sx += r;
            sy += v;
            sxx += r * r;
            sxy += r * v;
            ++cnt;
        }
        if (cnt >= 4) {
            const double denom = cnt * sxx - sx * sx;
            const double slope = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
            if (slope > 1e-3 && out.ring_max_log.back().second > out.sup_log - 1.0)
                out.diverges = true;
            else if (slope < -1e-3 && out.ring_max_log.back().second < out.sup_log - 2.0)
                out.decays = true;
        }
    }
    return out;
}

namespace {

Classification classify_exp_quadratic(const WeightedCompOp& W, const ExpQuadratic& psi) {
    const double alpha = W.ctx.alpha;
    const double ab = alpha * W.phi.beta();
    const double two_a2 = 2.0 * std::abs(psi.a2);
    const Complex t = psi.a1 + alpha * std::conj(W.phi.a) * W.phi.lambda;
    QuadraticFormCert cert;
    cert.mu = two_a2 - ab;
    cert.t = t;
    cert.theta2 = principal_theta2(psi.a2);

    if (near(two_a2, ab)) {
        const double t_scale = std::abs(psi.a1) + alpha * std::abs(W.phi.a) * std::abs(W.phi.lambda) + 1.0;
        if (std::abs(t) <= kRelSlack * t_scale) {
            cert.case_tag = "boundary_t_zero";
            return {Verdict::BoundedNotCompact, cert, CertGrade::Exact};
        }
        const Complex aligned = -(0.5 * ab) * (t * t) / std::norm(t);
        if (std::abs(psi.a2 - aligned) <= kRelSlack * (std::abs(psi.a2) + std::abs(aligned) + 1e-300)) {
            cert.case_tag = "boundary_aligned";
            return {Verdict::BoundedNotCompact, cert, CertGrade::Exact};
        }
        cert.case_tag = "boundary_misaligned";
        return {Verdict::Unbounded, cert, CertGrade::Exact};
    }
    if (cert.mu < 0.0) {
        cert.case_tag = "mu_negative";
        return {Verdict::Compact, cert, CertGrade::Exact};
    }
    cert.case_tag = "mu_positive";
    return {Verdict::Unbounded, cert, CertGrade::Exact};
}

Classification classify_poly_exp_quadratic(const WeightedCompOp& W, const PolyTimesExpQuad& psi) {
    const double alpha = W.ctx.alpha;
    const double ab = alpha * W.phi.beta();
    const double two_a2 = 2.0 * std::abs(psi.core.a2);
    QuadraticFormCert cert;
    cert.mu = two_a2 - ab;
    cert.t = psi.core.a1 + alpha * std::conj(W.phi.a) * W.phi.lambda;
    cert.theta2 = principal_theta2(psi.core.a2);

    if (!near(two_a2, ab)) {
        if (cert.mu < 0.0) {
            cert.case_tag = "mu_negative_poly";
            return {Verdict::Compact, cert, CertGrade::Exact};
        }
        cert.case_tag = "mu_positive_poly";
        return {Verdict::Unbounded, cert, CertGrade::Exact};
    }

    // mu = 0: restrict log M_z to the neutral direction e^{i theta2} R and
    // sample; a nonconstant polynomial factor grows along every ray.
    const Complex dir = std::polar(1.0, cert.theta2);
    double inner = -kInf, outer = -kInf, sup_seen = -kInf;
    for (int k = 1; k <= 64; ++k) {
        const double s = 40.0 * k / 64.0;
        for (double sign : {1.0, -1.0}) {
            const double v = log_m_z(W, sign * s * dir);
            sup_seen = std::max(sup_seen, v);
            if (s >= 5.0 && s <= 10.0) inner = std::max(inner, v);
            if (s >= 30.0) outer = std::max(outer, v);
        }
    }
    NumericCert ncert{sup_seen, false};
    if (outer > inner + 0.5)
        return {Verdict::Unbounded, ncert, CertGrade::Numeric};
    return {Verdict::BoundedNotCompact, ncert, CertGrade::Numeric};
}

Classification classify_from_scan(const WeightedCompOp& W) {
    MzScanResult scan = mz_scan(W);
    NumericCert cert{scan.sup_log, scan.decays};
    if (scan.diverges) {
        cert.sup_log = kInf;
        return {Verdict::Unbounded, cert, CertGrade::Numeric};
    }
    if (scan.decays) return {Verdict::Compact, cert, CertGrade::Numeric};
    // Neither divergence nor decay: accept a flat profile as bounded.
    const std::size_t n = scan.ring_max_log.size();
    if (n >= 16) {
        const double last = scan.ring_max_log.back().second;
        if (std::isfinite(last) && last > scan.sup_log - 2.0)
            return {Verdict::BoundedNotCompact, cert, CertGrade::Numeric};
    }
    throw IndeterminateLiminal("numeric M_z scan certified neither divergence nor decay");
}

Classification classify_taylor(const WeightedCompOp& W, const TaylorSeries& psi) {
    const double threshold = 0.5 * W.ctx.alpha * W.phi.beta();
    GrowthProfile prof;
    try {
        prof = order_type(EntireFunction{psi});
    } catch (const InsufficientCoefficients&) {
        return classify_from_scan(W);
    }
    OrderTypeCert cert{prof.order, prof.type, threshold};
    if (prof.order < 1.9)
        return {Verdict::Compact, cert, CertGrade::Numeric};
    if (prof.order > 2.1 || !prof.order_is_finite())
        return {Verdict::Unbounded, cert, CertGrade::Numeric};
    if (prof.type) {
        if (*prof.type < 0.9 * threshold) return {Verdict::Compact, cert, CertGrade::Numeric};
        if (*prof.type > 1.1 * threshold) return {Verdict::Unbounded, cert, CertGrade::Numeric};
    }
    return classify_from_scan(W);
}

}  // namespace

Classification classify(const WeightedCompOp& W) {
    const double alpha = W.ctx.alpha;
    const double mod_l = std::abs(W.phi.lambda);

    if (mod_l > 1.0 && !near(mod_l, 1.0))
        return {Verdict::UnboundedSymbol, NumericCert{kInf, false}, CertGrade::Exact};

    if (mod_l <= kRelSlack) {
        // Constant symbol: rank one; bounded exactly when psi lives in the space.
        Membership m = membership(W.psi, W.ctx);
        if (m == Membership::Indeterminate)
            throw IndeterminateLiminal("membership of the multiplier could not be certified");
        GrowthProfile prof;
        CertGrade grade = CertGrade::Exact;
        try {
            prof = order_type(W.psi);
        } catch (const InsufficientCoefficients&) {
            prof = GrowthProfile{2.0, std::nullopt, ProfileExactness::Estimated};
        }
        if (prof.exactness == ProfileExactness::Estimated) grade = CertGrade::Numeric;
        OrderTypeCert cert{prof.order, prof.type, 0.5 * alpha};
        if (m == Membership::In || m == Membership::BoundaryIn)
            return {Verdict::FiniteRankCompact, cert, grade};
        return {Verdict::Unbounded, cert, grade};
    }

    if (near(mod_l, 1.0)) {
        auto canon = as_exp_quadratic(W.psi);
        if (canon) {
            const Complex required = -alpha * std::conj(W.phi.a) * W.phi.lambda;
            const double a1_scale = std::abs(required) + std::abs(canon->a1) + 1.0;
            const double a2_scale = std::abs(canon->a2) + 1.0;
            const bool matches = std::abs(canon->a1 - required) <= kRelSlack * a1_scale &&
                                 std::abs(canon->a2) <= kRelSlack * a2_scale;
            if (matches)
                return {Verdict::IsometryMultiple, UnitModulusCert{true}, CertGrade::Exact};
            return {Verdict::Unbounded, UnitModulusCert{false}, CertGrade::Exact};
        }
        const bool taylor = std::holds_alternative<TaylorSeries>(W.psi);
        return {Verdict::Unbounded, UnitModulusCert{false},
                taylor ? CertGrade::Numeric : CertGrade::Exact};
    }

    if (auto canon = as_exp_quadratic(W.psi)) return classify_exp_quadratic(W, *canon);
    if (const auto* pq = std::get_if<PolyTimesExpQuad>(&W.psi))
        return classify_poly_exp_quadratic(W, *pq);
    return classify_taylor(W, std::get<TaylorSeries>(W.psi));
}

AdjointKernelImage adjoint_on_kernel(const WeightedCompOp& W, Complex z) {
    if (W.ctx.infinite_p() && W.ctx.flavor == SpaceFlavor::FinftyFull)
        throw HypothesisViolated("adjoint action on kernels needs p < infinity or the vanishing subspace");
    return {eval(W.psi, z), W.phi(z)};
}

WeightedCompOp square(const WeightedCompOp& W) {
    auto canon = as_exp_quadratic(W.psi);
    if (!canon) throw WrongMultiplierKind("square requires an exp-quadratic multiplier");
    const Complex a = W.phi.a, l = W.phi.lambda;
    const Complex a0 = canon->a0, a1 = canon->a1, a2 = canon->a2;
    ExpQuadratic psi2{2.0 * a0 + a1 * a + a2 * a * a, a1 * (1.0 + l) + 2.0 * a2 * a * l,
                      a2 * (1.0 + l * l)};
    AffineSymbol phi2{a * (1.0 + l), l * l};
    return WeightedCompOp(psi2, phi2, W.ctx);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::UnboundedSymbol: return "UnboundedSymbol";
        case Verdict::Unbounded: return "Unbounded";
        case Verdict::BoundedNotCompact: return "BoundedNotCompact";
        case Verdict::Compact: return "Compact";
        case Verdict::FiniteRankCompact: return "FiniteRankCompact";
        default: return "IsometryMultiple";
    }
}

std::string to_string(CertGrade g) { return g == CertGrade::Exact ? "Exact" : "Numeric"; }

}  // namespace fockoplab
