#include "fockoplab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockoplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelSlack = 1e-12;
constexpr double kTrendSlope = 1e-3;  // per-step log-slope threshold

bool lambda_is_real(Complex l) { return std::abs(l.imag()) <= kRelSlack * (1.0 + std::abs(l)); }

std::optional<double> window_slope(const std::vector<double>& v) {
    if (v.size() < 4) return std::nullopt;
    const std::size_t win = std::max<std::size_t>(4, v.size() / 4);
    const std::size_t start = v.size() - win;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return std::nullopt;
        const double x = static_cast<double>(i);
        sx += x;
        sy += v[i];
        sxx += x * x;
        sxy += x * v[i];
    }
    const double n = static_cast<double>(win);
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

SequenceReport make_report(std::string name, std::vector<std::pair<long, double>> values,
                           std::string note = {}) {
    SequenceReport rep;
    rep.name = std::move(name);
    rep.log_values = std::move(values);
    rep.note = std::move(note);
    std::vector<double> logs;
    logs.reserve(rep.log_values.size());
    for (const auto& [n, v] : rep.log_values) logs.push_back(v);
    rep.trend = detect_trend(logs);
    if (auto s = window_slope(logs)) rep.rate = std::exp(*s);
    return rep;
}

// ln of the scaled orbit norm || exp(c0n + c1n z + c2n z^2) f(phi_n z) ||.
// For boundary (bounded non-compact) operators with real lambda, the
// Gaussian discriminant alpha^2 - 4|A2|^2 collapses like lambda^{2n}; it is
// rebuilt from the exact boundary identity to dodge the cancellation.
double log_scaled_norm(const WeightedCompOp& W, const ExpQuadratic& psi, const EntireFunction& f,
                       long n, bool exact_boundary, double tol) {
    const IterateCoeffs c = iterate_coeffs(W, n);
    const AffineSymbol pn = phi_n(W.phi, n);
    if (auto fe = as_exp_quadratic(f)) {
        const ExpQuadratic fc = compose_affine(*fe, pn);
        const ExpQuadratic total{c.c0n + fc.a0, c.c1n + fc.a1, c.c2n + fc.a2};
        std::optional<double> det;
        if (exact_boundary && lambda_is_real(W.phi.lambda)) {
            const Complex l = W.phi.lambda;
            const Complex c2inf = psi.a2 / (Complex{1.0, 0.0} - l * l);
            const Complex ln = pow_n(l, n);
            const double L = (ln * ln).real();
            const Complex delta = fe->a2 - c2inf;
            det = -8.0 * L * (delta * std::conj(c2inf)).real() - 4.0 * L * L * std::norm(delta);
        }
        return log_gaussian_norm_expquad(total, W.ctx.p, W.ctx.alpha, det);
    }
    auto log_abs = [&](Complex z) {
        return (c.c0n + c.c1n * z + c.c2n * z * z).real() + log_abs_eval(f, pn(z));
    };
    GrowthEnvelope env = envelope_product_expquad(
        envelope_after_affine(growth_envelope(f, W.ctx.alpha), std::abs(pn.a), std::abs(pn.lambda)),
        c.c0n, c.c1n, c.c2n);
    const NormResult r = fock_norm_callable(log_abs, env, W.ctx, tol);
    return std::log(r.value);
}

// ln ||W^n f|| by the product formula, for multipliers without iterate algebra.
double log_orbit_norm_product(const WeightedCompOp& W, const EntireFunction& f, long n,
                              double tol) {
    auto log_abs = [&](Complex z) {
        double acc = 0.0;
        Complex w = z;
        for (long k = 0; k < n; ++k) {
            acc += log_abs_eval(W.psi, w);
            w = W.phi(w);
        }
        return acc + log_abs_eval(f, w);
    };
    GrowthEnvelope env = growth_envelope(W.psi, W.ctx.alpha);
    GrowthEnvelope total = growth_envelope(EntireFunction{ExpQuadratic{}}, W.ctx.alpha);
    for (long k = 0; k < n; ++k) {
        const AffineSymbol pk = phi_n(W.phi, k);
        GrowthEnvelope piece = envelope_after_affine(env, std::abs(pk.a), std::abs(pk.lambda));
        total.log_const += piece.log_const;
        total.linear += piece.linear;
        total.quadratic += piece.quadratic;
        total.degree += piece.degree;
        if (piece.log_poly) {
            auto prev = total.log_poly;
            auto cur = piece.log_poly;
            total.log_poly = prev ? std::function<double(double)>(
                                        [prev, cur](double r) { return prev(r) + cur(r); })
                                  : cur;
        }
        total.valid = total.valid && piece.valid;
    }
    const AffineSymbol pn = phi_n(W.phi, n);
    GrowthEnvelope fenv = envelope_after_affine(growth_envelope(f, W.ctx.alpha), std::abs(pn.a),
                                                std::abs(pn.lambda));
    total.log_const += fenv.log_const;
    total.linear += fenv.linear;
    total.quadratic += fenv.quadratic;
    total.degree += fenv.degree;
    if (fenv.log_poly) {
        auto prev = total.log_poly;
        auto cur = fenv.log_poly;
        total.log_poly = prev ? std::function<double(double)>(
                                    [prev, cur](double r) { return prev(r) + cur(r); })
                              : cur;
    }
    total.valid = total.valid && fenv.valid;
    const NormResult r = fock_norm_callable(log_abs, total, W.ctx, tol);
    return std::log(r.value);
}

}  // namespace

Trend detect_trend(const std::vector<double>& log_values) {
    auto s = window_slope(log_values);
    if (!s) return Trend::Inconclusive;
    if (*s > kTrendSlope) return Trend::DivergesToInfinity;
    if (*s < -kTrendSlope) return Trend::ConvergesToZero;
    return Trend::Bounded;
}

SequenceReport scaled_iterate_norms(const WeightedCompOp& W, const EntireFunction& f, int N) {
    const Classification cls = classify(W);
    if (cls.verdict != Verdict::BoundedNotCompact)
        throw HypothesisViolated("scaled_iterate_norms needs a bounded non-compact operator");
    if (!lambda_is_real(W.phi.lambda))
        throw HypothesisViolated("scaled_iterate_norms needs real lambda");
    if (W.ctx.infinite_p())
        throw HypothesisViolated("scaled_iterate_norms needs p < infinity");
    const Complex z0 = W.phi.fixed_point();
    if (eval(f, z0) == Complex{0.0, 0.0})
        throw HypothesisViolated("scaled_iterate_norms needs f(z0) != 0");

    const bool exact_boundary = cls.exactness == CertGrade::Exact;
    const auto psi = as_exp_quadratic(W.psi);
    std::vector<std::pair<long, double>> values;
    std::string note;
    for (long n = 1; n <= N; ++n) {
        try {
            double v;
            if (psi) {
                v = log_scaled_norm(W, *psi, f, n, exact_boundary, 1e-10);
            } else {
                v = log_orbit_norm_product(W, f, n, 1e-8) -
                    static_cast<double>(n) * log_abs_eval(W.psi, z0);
            }
            values.emplace_back(n, v);
        } catch (const NonConvergent&) {
            note = "truncated at n = " + std::to_string(n) + ": quadrature not certified";
            break;
        }
    }
    return make_report("scaled_iterate_norms", std::move(values), std::move(note));
}

SequenceReport angle_criterion_ratio(const WeightedCompOp& W, const EntireFunction& f, int N) {
    if (W.ctx.infinite_p())
        throw HypothesisViolated("angle_criterion_ratio needs p < infinity");
    const double mod_l = std::abs(W.phi.lambda);
    if (mod_l >= 1.0 - 1e-15)
        throw HypothesisViolated("angle_criterion_ratio needs |lambda| < 1");
    const Complex z0 = W.phi.fixed_point();
    if (eval(f, z0) == Complex{0.0, 0.0})
        throw HypothesisViolated("angle_criterion_ratio needs f(z0) != 0");

    const double log_kernel = 0.5 * W.ctx.alpha * std::norm(z0);
    std::vector<std::pair<long, double>> values;
    std::string note;

    if (mod_l <= kRelSlack) {
        // Constant symbol: ||W^n f|| = |psi(a)|^{n-1} |f(a)| ||psi||, so the
        // ratio is the same for every n.
        const double log_psi_a = log_abs_eval(W.psi, W.phi.a);
        const double log_norm_psi = std::log(fock_norm(W.psi, W.ctx).value);
        const double log_fa = log_abs_eval(f, W.phi.a);
        const double r = log_psi_a + log_kernel - log_fa - log_norm_psi;
        for (long n = 1; n <= N; ++n) values.emplace_back(n, r);
        return make_report("angle_criterion_ratio", std::move(values));
    }

    const Classification cls = classify(W);
    const bool exact_boundary =
        cls.verdict == Verdict::BoundedNotCompact && cls.exactness == CertGrade::Exact;
    const auto psi = as_exp_quadratic(W.psi);
    const double log_psi_z0 = log_abs_eval(W.psi, z0);
    for (long n = 1; n <= N; ++n) {
        try {
            double log_orbit;
            if (psi) {
                log_orbit = log_scaled_norm(W, *psi, f, n, exact_boundary, 1e-10);
            } else {
                log_orbit = log_orbit_norm_product(W, f, n, 1e-8) -
                            static_cast<double>(n) * log_psi_z0;
            }
            values.emplace_back(n, log_kernel - log_orbit);
        } catch (const NonConvergent&) {
            note = "truncated at n = " + std::to_string(n) + ": quadrature not certified";
            break;
        }
    }
    return make_report("angle_criterion_ratio", std::move(values), std::move(note));
}

IsometryReport isometry_report(const WeightedCompOp& W,
                               const std::vector<std::pair<std::string, EntireFunction>>& fs) {
    const Classification cls = classify(W);
    if (cls.verdict != Verdict::IsometryMultiple)
        throw HypothesisViolated("isometry_report needs an IsometryMultiple operator");
    IsometryReport rep;
    rep.kappa = std::exp(log_abs_eval(W.psi, Complex{0.0, 0.0}) +
                         0.5 * W.ctx.alpha * std::norm(W.phi.a));
    const WeightedCompOp W2 = square(W);

    auto norm_of_image = [&](const WeightedCompOp& op, const EntireFunction& f) {
        if (auto rep_fn = operator_image(op, f)) return fock_norm(*rep_fn, op.ctx, 1e-10).value;
        if (op.ctx.infinite_p())
            throw WrongMultiplierKind("sup-norm of a non-structured operator image");
        auto log_abs = [&op, &f](Complex z) {
            return log_abs_eval(op.psi, z) + log_abs_eval(f, op.phi(z));
        };
        GrowthEnvelope env = envelope_after_affine(growth_envelope(f, op.ctx.alpha),
                                                   std::abs(op.phi.a), std::abs(op.phi.lambda));
        GrowthEnvelope penv = growth_envelope(op.psi, op.ctx.alpha);
        env.log_const += penv.log_const;
        env.linear += penv.linear;
        env.quadratic += penv.quadratic;
        env.degree += penv.degree;
        env.valid = env.valid && penv.valid;
        return fock_norm_callable(log_abs, env, op.ctx, 1e-10).value;
    };

    for (const auto& [name, f] : fs) {
        IsometryEntry e;
        e.fname = name;
        e.norm_f = fock_norm(f, W.ctx, 1e-10).value;
        e.norm_wf = norm_of_image(W, f);
        e.ratio = e.norm_wf / e.norm_f;
        e.deviation = std::abs(e.ratio - rep.kappa) / rep.kappa;
        const double norm_w2f = norm_of_image(W2, f);
        e.paranormal_residual_rel =
            std::abs(e.norm_wf * e.norm_wf - norm_w2f * e.norm_f) / (e.norm_wf * e.norm_wf);
        rep.max_deviation = std::max(rep.max_deviation, e.deviation);
        rep.max_paranormal_residual = std::max(rep.max_paranormal_residual, e.paranormal_residual_rel);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::vector<std::pair<std::string, EntireFunction>> standard_test_functions(double alpha) {
    std::vector<std::pair<std::string, EntireFunction>> fs;
    fs.emplace_back("one", ExpQuadratic{});
    fs.emplace_back("z", PolyTimesExpQuad({Complex{0.0, 0.0}, Complex{1.0, 0.0}}, ExpQuadratic{}));
    fs.emplace_back("kernel_0.3", ExpQuadratic{Complex{0.0, 0.0}, Complex{0.3 * alpha, 0.0},
                                               Complex{0.0, 0.0}});
    fs.emplace_back("exp_quadratic", ExpQuadratic{Complex{0.0, 0.0}, Complex{0.0, 0.0},
                                                  Complex{0.2 * alpha, 0.0}});
    return fs;
}

SupercyclicityVerdict supercyclicity_report(const WeightedCompOp& W, const DynamicsConfig& cfg) {
    SupercyclicityVerdict out;
    out.classification = classify(W);
    const Verdict v = out.classification.verdict;
    if (v == Verdict::UnboundedSymbol || v == Verdict::Unbounded)
        throw HypothesisViolated("supercyclicity_report needs a bounded operator");
    if (W.ctx.infinite_p() && W.ctx.flavor == SpaceFlavor::FinftyFull)
        throw HypothesisViolated(
            "supercyclicity evidence is restricted to separable spaces (p < infinity or the "
            "vanishing subspace)");

    const double alpha = W.ctx.alpha;
    const auto test_fs = standard_test_functions(alpha);

    if (v == Verdict::IsometryMultiple) {
        out.case_tag = SupercyclicityCase::IsometryMultiple;
        out.isometry = isometry_report(W, test_fs);
        return out;
    }

    if (v == Verdict::Compact || v == Verdict::FiniteRankCompact) {
        out.case_tag = SupercyclicityCase::CompactAdjointEigenvalue;
        const Complex z0 = W.phi.fixed_point();
        const AdjointKernelImage img = adjoint_on_kernel(W, z0);
        AdjointEigenEvidence ev;
        ev.eigenvalue = img.scalar;
        ev.fixed_point = z0;
        ev.fixed_point_residual = std::abs(img.point - z0);
        double worst = 0.0;
        for (const auto& [name, f] : test_fs) {
            const Complex lhs = img.scalar * eval(f, img.point);
            const Complex rhs = img.scalar * eval(f, z0);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        ev.action_residual = worst;
        out.adjoint = ev;
        return out;
    }

    // Bounded, not compact.
    if (!lambda_is_real(W.phi.lambda)) {
        out.case_tag = SupercyclicityCase::NonRealLambdaSquareCompact;
        out.square_classification = classify(square(W));
        if (out.square_classification->verdict != Verdict::Compact)
            throw InternalInconsistency("square of a non-real boundary operator must be compact");
        return out;
    }

    if (!W.ctx.infinite_p()) {
        out.case_tag = SupercyclicityCase::RealLambdaAngleCriterion;
        out.sequences.push_back(angle_criterion_ratio(W, EntireFunction{ExpQuadratic{}}, cfg.N));
        out.sequences.push_back(scaled_iterate_norms(W, EntireFunction{ExpQuadratic{}}, cfg.N));
        return out;
    }

    // Real lambda on the vanishing sup-norm subspace: the limit operator.
    out.case_tag = SupercyclicityCase::FinftyZeroLimitOperator;
    const LimitData lim = limit_function(W);
    LimitEvidence ev;
    ev.norm_F = sup_norm_expquad(lim.F, alpha).value;
    ev.nonvanishing_ray =
        decay_profile(EntireFunction{lim.F}, alpha, 8, 12.0).any_nonvanishing();
    std::vector<std::pair<long, double>> res;
    const EntireFunction one{ExpQuadratic{}};
    for (long n = 1; n <= cfg.N; ++n) {
        const IterateCoeffs c = iterate_coeffs(W, n);
        double worst = 0.0;
        for (int i = 0; i < cfg.grid_n; ++i) {
            for (int j = 0; j < cfg.grid_n; ++j) {
                const double x = -cfg.grid_radius + 2.0 * cfg.grid_radius * i / (cfg.grid_n - 1);
                const double y = -cfg.grid_radius + 2.0 * cfg.grid_radius * j / (cfg.grid_n - 1);
                const Complex z{x, y};
                const Complex it = scaled_iterate_eval(W, c, one, z);
                const Complex lm = limit_operator_apply(lim, one, lim.z0, z);
                worst = std::max(worst, std::abs(it - lm));
            }
        }
        res.emplace_back(n, std::log(std::max(worst, 1e-300)));
    }
    ev.residuals = make_report("limit_convergence_residual", std::move(res));
    out.limit = ev;
    return out;
}

std::string to_string(Trend t) {
    switch (t) {
        case Trend::DivergesToInfinity: return "DivergesToInfinity";
        case Trend::ConvergesToZero: return "ConvergesToZero";
        case Trend::Bounded: return "Bounded";
        default: return "Inconclusive";
    }
}

std::string to_string(SupercyclicityCase c) {
    switch (c) {
        case SupercyclicityCase::IsometryMultiple: return "IsometryMultiple";
        case SupercyclicityCase::CompactAdjointEigenvalue: return "CompactAdjointEigenvalue";
        case SupercyclicityCase::RealLambdaAngleCriterion: return "RealLambdaAngleCriterion";
        case SupercyclicityCase::FinftyZeroLimitOperator: return "FinftyZeroLimitOperator";
        default: return "NonRealLambdaSquareCompact";
    }
}

}  // namespace fockoplab
