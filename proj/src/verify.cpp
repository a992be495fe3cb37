#include "fockoplab/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "fockoplab/dynamics.hpp"

namespace fockoplab::verify {

namespace {

using Clock = std::chrono::steady_clock;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    double phase() { return uniform(0.0, 2.0 * M_PI); }
    Complex disc(double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, phase());
    }
    bool coin() { return uniform(0.0, 1.0) < 0.5; }
};

const ExpQuadratic kOne{};
const EntireFunction kOneFn{kOne};

WeightedCompOp example_boundary_op(const FockContext& ctx) {
    // psi = exp((alpha beta / 2) z^2), phi = z/2 with alpha = 1: the model
    // bounded non-compact operator.
    return WeightedCompOp(ExpQuadratic{{0, 0}, {0, 0}, {0.375, 0}},
                          AffineSymbol{{0, 0}, {0.5, 0}}, ctx);
}

// bounded non-compact operator with random boundary data; non-real lambda
// when demanded
WeightedCompOp random_boundary_op(Rng& rng, bool force_nonreal, const FockContext& ctx) {
    double arg;
    do {
        arg = rng.phase();
    } while (force_nonreal && (std::abs(std::sin(arg)) < 0.15));
    const Complex lambda = std::polar(rng.uniform(0.2, 0.85), force_nonreal ? arg : 0.0) *
                           (force_nonreal ? 1.0 : (rng.coin() ? 1.0 : -1.0));
    const Complex a = rng.disc(1.2);
    const double alpha = ctx.alpha;
    const double beta = 1.0 - std::norm(lambda);
    const Complex a0 = rng.disc(0.4);
    Complex a1, a2;
    if (rng.coin()) {
        a1 = -alpha * std::conj(a) * lambda;  // t = 0
        a2 = std::polar(0.5 * alpha * beta, rng.phase());
    } else {
        const Complex t = std::polar(rng.uniform(0.3, 1.5), rng.phase());
        a1 = t - alpha * std::conj(a) * lambda;
        a2 = -(0.5 * alpha * beta) * (t * t) / std::norm(t);
    }
    return WeightedCompOp(ExpQuadratic{a0, a1, a2}, AffineSymbol{a, lambda}, ctx);
}

CriterionResult run_timed(int id, std::string name, double budget,
                          const std::function<bool(std::string&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.budget_seconds = budget;
    const auto t0 = Clock::now();
    std::string detail;
    bool ok;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (ok && r.seconds >= budget) {
        ok = false;
        detail += " [over time budget]";
    }
    r.pass = ok;
    r.detail = detail;
    return r;
}

bool criterion1_norm_oracles(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = rng.uniform(0.5, 2.0);
        const Complex w = rng.disc(1.5);
        const int pick = i % 3;
        const double want = std::exp(0.5 * alpha * std::norm(w));
        const ExpQuadratic kw{{0, 0}, alpha * std::conj(w), {0, 0}};
        if (pick == 2) {
            const FockContext ctx = FockContext::sup(alpha);
            worst = std::max(worst, rel_err(fock_norm(kOneFn, ctx).value, 1.0));
            worst = std::max(worst, rel_err(fock_norm(EntireFunction{kw}, ctx).value, want));
            worst = std::max(worst,
                             rel_err(fock_norm_raysup(EntireFunction{kw}, ctx, 1e-10).value, want));
        } else {
            const FockContext ctx = FockContext::finite(pick == 0 ? 1.0 : 2.0, alpha);
            worst = std::max(worst, rel_err(fock_norm(kOneFn, ctx).value, 1.0));
            worst = std::max(worst,
                             rel_err(fock_norm_quadrature(kOneFn, ctx, 1e-10).value, 1.0));
            worst = std::max(worst, rel_err(fock_norm(EntireFunction{kw}, ctx).value, want));
            worst = std::max(
                worst, rel_err(fock_norm_quadrature(EntireFunction{kw}, ctx, 1e-10).value, want));
        }
    }
    std::ostringstream os;
    os << "worst relative error " << worst;
    detail = os.str();
    return worst <= 1e-8;
}

bool criterion2_gaussian_vs_quadrature(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 2);
    double worst_closed = 0.0, worst_quad = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = rng.uniform(0.5, 2.0);
        const double c = rng.uniform(-0.45, 0.45) * alpha;
        const FockContext ctx = FockContext::finite(2.0, alpha);
        const ExpQuadratic f{{0, 0}, {0, 0}, {c, 0}};
        const double want = std::sqrt(alpha) / std::pow(alpha * alpha - 4.0 * c * c, 0.25);
        worst_closed = std::max(worst_closed, rel_err(gaussian_norm_expquad(f, ctx).value, want));
        worst_quad = std::max(
            worst_quad, rel_err(fock_norm_quadrature(EntireFunction{f}, ctx, 1e-10).value, want));
    }
    std::ostringstream os;
    os << "closed-form err " << worst_closed << ", quadrature err " << worst_quad;
    detail = os.str();
    return worst_closed <= 1e-12 && worst_quad <= 1e-8;
}

bool criterion3_trichotomy(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 3);
    int agree = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        const double alpha = rng.uniform(0.5, 2.0);
        const Complex lambda = std::polar(rng.uniform(0.2, 0.85), rng.phase());
        const double beta = 1.0 - std::norm(lambda);
        const Complex a = rng.disc(1.2);
        double margin = rng.uniform(0.05, 0.5);
        if (!rng.coin()) margin = -std::min(margin, alpha * beta - 0.01);
        const double mod_a2 = 0.5 * (alpha * beta + margin);
        const WeightedCompOp W(
            ExpQuadratic{rng.disc(0.4), rng.disc(0.8), std::polar(mod_a2, rng.phase())},
            AffineSymbol{a, lambda}, FockContext::finite(2.0, alpha));
        const Classification cls = classify(W);
        const MzScanResult scan = mz_scan(W);
        const bool match = (cls.verdict == Verdict::Compact && scan.decays && !scan.diverges) ||
                           (cls.verdict == Verdict::Unbounded && scan.diverges);
        agree += match ? 1 : 0;
    }
    std::ostringstream os;
    os << agree << "/" << total << " classifier/oracle agreements";
    detail = os.str();
    return agree == total;
}

bool criterion4_model_examples(std::string& detail) {
    const FockContext p2 = FockContext::finite(2.0, 1.0);
    std::vector<std::string> fails;

    if (classify(example_boundary_op(p2)).verdict != Verdict::BoundedNotCompact)
        fails.push_back("boundary example not BoundedNotCompact");

    const WeightedCompOp unbounded_poly(
        PolyTimesExpQuad({{0, 0}, {1, 0}}, ExpQuadratic{{0, 0}, {0, 0}, {0.375, 0}}),
        AffineSymbol{{0, 0}, {0.5, 0}}, p2);
    if (classify(unbounded_poly).verdict != Verdict::Unbounded)
        fails.push_back("z * exp-quadratic not Unbounded");

    const WeightedCompOp compact_series(expm1_quadratic_over_z(Complex{0.375, 0.0}),
                                        AffineSymbol{{0, 0}, {0.5, 0}}, p2);
    if (classify(compact_series).verdict != Verdict::Compact)
        fails.push_back("(exp(c z^2)-1)/z not Compact");

    const WeightedCompOp translation(kOne, AffineSymbol{{1, 0}, {1, 0}}, p2);
    if (classify(translation).verdict != Verdict::Unbounded)
        fails.push_back("unweighted translation not Unbounded");

    const WeightedCompOp rotation(kOne, AffineSymbol{{0, 0}, {0, 1}}, p2);
    if (classify(rotation).verdict != Verdict::IsometryMultiple)
        fails.push_back("unweighted rotation not IsometryMultiple");

    if (fails.empty()) {
        detail = "all five verdicts reproduced";
        return true;
    }
    detail = fails.front();
    return false;
}

bool criterion5_iterates(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 5);
    const std::vector<long> ns{2, 5, 17, 64};
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const FockContext ctx = FockContext::finite(2.0, rng.uniform(0.5, 2.0));
        WeightedCompOp W = [&]() {
            if (i % 2 == 0) {
                const Complex lambda = std::polar(rng.uniform(0.2, 0.9), rng.phase());
                const double beta = 1.0 - std::norm(lambda);
                return WeightedCompOp(
                    ExpQuadratic{rng.disc(0.5), rng.disc(0.7),
                                 std::polar(rng.uniform(0.0, 0.4) * ctx.alpha * beta, rng.phase())},
                    AffineSymbol{rng.disc(1.0), lambda}, ctx);
            }
            return random_boundary_op(rng, rng.coin(), ctx);
        }();
        EntireFunction f = kOneFn;
        if (i % 3 == 1) f = ExpQuadratic{{0, 0}, {0.3 * ctx.alpha, 0}, {0, 0}};
        if (i % 3 == 2)
            f = PolyTimesExpQuad({{0.5, 0.1}, {1, 0}}, ExpQuadratic{{0, 0}, {0.1, 0}, {0, 0}});
        for (long n : ns) {
            for (int k = 0; k < 3; ++k) {
                const Complex z = rng.disc(2.0);
                const LogComplex closed = iterate_apply_closed(W, f, n, z);
                const LogComplex oracle = iterate_apply_product(W, f, n, z);
                if (closed.log_abs == -std::numeric_limits<double>::infinity() &&
                    oracle.log_abs == -std::numeric_limits<double>::infinity())
                    continue;
                const double dm = std::abs(closed.log_abs - oracle.log_abs) /
                                  (1.0 + std::abs(oracle.log_abs));
                const double dp = std::abs(std::remainder(closed.arg - oracle.arg, 2.0 * M_PI)) /
                                  (1.0 + std::abs(oracle.arg));
                worst = std::max({worst, dm, dp});
            }
        }
    }
    std::ostringstream os;
    os << "worst log-magnitude/phase mismatch " << worst;
    detail = os.str();
    return worst <= 1e-10;
}

bool criterion6_c1_limit(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 6);
    double worst_r2 = 1.0;
    for (int i = 0; i < 50; ++i) {
        const FockContext ctx = FockContext::finite(2.0, rng.uniform(0.5, 2.0));
        WeightedCompOp W = [&]() {
            while (true) {
                // keep the subdominant lambda^{2n} component of c1n - c1 well
                // below the leading one, so the fit sees the leading ratio
                const Complex lambda =
                    std::polar(rng.uniform(0.55, 0.9), rng.uniform(-1.4, 1.4));
                const double beta = 1.0 - std::norm(lambda);
                const Complex a = rng.disc(0.25 * std::abs(Complex{1.0, 0.0} - lambda));
                const Complex a1 = std::polar(rng.uniform(1.0, 1.6), rng.phase());
                const Complex a2 =
                    std::polar(rng.uniform(0.1, 0.4) * ctx.alpha * beta, rng.phase());
                WeightedCompOp cand(ExpQuadratic{rng.disc(0.5), a1, a2}, AffineSymbol{a, lambda},
                                    ctx);
                const Complex z0 = cand.phi.fixed_point();
                if (std::abs(a1 + 2.0 * a2 * z0) >= 0.5) return cand;
            }
        }();
        const auto canon = as_exp_quadratic(W.psi);
        const Complex one{1.0, 0.0};
        const Complex lambda = W.phi.lambda;
        const Complex c1 = (canon->a1 + lambda * W.phi.a * 2.0 * canon->a2 /
                                            (one - lambda * lambda)) /
                           (one - lambda);
        // linear fit of ln|c1n - c1| against n; geometric decay means R^2 ~ 1
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        int cnt = 0;
        for (long n = 1; n <= 40; ++n) {
            const double d = std::abs(iterate_coeffs(W, n).c1n - c1);
            if (d <= 0.0) continue;
            const double x = static_cast<double>(n), y = std::log(d);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
            ++cnt;
        }
        if (cnt < 30) return false;
        const double n = cnt;
        const double cov = n * sxy - sx * sy;
        const double vx = n * sxx - sx * sx, vy = n * syy - sy * sy;
        const double r2 = (vx > 0 && vy > 0) ? (cov * cov) / (vx * vy) : 0.0;
        worst_r2 = std::min(worst_r2, r2);
    }
    std::ostringstream os;
    os << "worst R^2 " << worst_r2;
    detail = os.str();
    return worst_r2 >= 0.999;
}

bool criterion7_square_compact(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 7);
    int good = 0;
    const int total = 50;
    double worst_margin = -1e9;
    for (int i = 0; i < total; ++i) {
        const FockContext ctx = FockContext::finite(2.0, rng.uniform(0.5, 2.0));
        const WeightedCompOp W = random_boundary_op(rng, true, ctx);
        if (classify(W).verdict != Verdict::BoundedNotCompact) continue;
        const Classification sq = classify(square(W));
        const auto* cert = std::get_if<QuadraticFormCert>(&sq.certificate);
        if (sq.verdict == Verdict::Compact && cert && cert->mu < 0.0) {
            ++good;
            worst_margin = std::max(worst_margin, cert->mu);
        }
    }
    std::ostringstream os;
    os << good << "/" << total << " squares compact, largest mu " << worst_margin;
    detail = os.str();
    return good == total;
}

bool criterion8_scaled_norms(std::string& detail) {
    const WeightedCompOp W = example_boundary_op(FockContext::finite(2.0, 1.0));
    const SequenceReport rep = scaled_iterate_norms(W, kOneFn, 40);
    if (rep.log_values.size() != 40) {
        detail = "sequence truncated";
        return false;
    }
    double worst = 0.0;
    const double lambda = 0.5;
    for (const auto& [n, logv] : rep.log_values) {
        const double want = std::pow(lambda, -0.5 * n) *
                            std::pow(2.0 - std::pow(lambda, 2.0 * n), -0.25);
        worst = std::max(worst, rel_err(std::exp(logv), want));
    }
    std::ostringstream os;
    os << "worst closed-form error " << worst << ", trend " << to_string(rep.trend);
    detail = os.str();
    return worst <= 1e-8 && rep.trend == Trend::DivergesToInfinity;
}

bool criterion9_angle_criterion(std::string& detail) {
    const WeightedCompOp W = example_boundary_op(FockContext::finite(2.0, 1.0));
    const SequenceReport rep = angle_criterion_ratio(W, kOneFn, 40);
    if (rep.log_values.size() != 40) {
        detail = "sequence truncated";
        return false;
    }
    double worst = 0.0;
    const double lambda = 0.5;
    for (const auto& [n, logv] : rep.log_values) {
        const double want = std::pow(lambda, 0.5 * n) *
                            std::pow(2.0 - std::pow(lambda, 2.0 * n), 0.25);
        worst = std::max(worst, rel_err(std::exp(logv), want));
    }
    std::ostringstream os;
    os << "worst closed-form error " << worst << ", trend " << to_string(rep.trend);
    detail = os.str();
    return worst <= 1e-8 && rep.trend == Trend::ConvergesToZero;
}

bool criterion10_limit_operator(std::string& detail) {
    const WeightedCompOp W = example_boundary_op(FockContext::sup(1.0));
    const LimitData lim = limit_function(W);
    const double norm_f = fock_norm(EntireFunction{lim.F}, FockContext::sup(1.0)).value;
    const bool ray =
        decay_profile(EntireFunction{lim.F}, 1.0, 8, 12.0).any_nonvanishing();
    double residual = 0.0;
    const IterateCoeffs c = iterate_coeffs(W, 60);
    for (int i = 0; i < 33; ++i) {
        for (int j = 0; j < 33; ++j) {
            const Complex z{-2.0 + 4.0 * i / 32.0, -2.0 + 4.0 * j / 32.0};
            const Complex it = scaled_iterate_eval(W, c, kOneFn, z);
            const Complex lm = limit_operator_apply(lim, kOneFn, lim.z0, z);
            residual = std::max(residual, std::abs(it - lm));
        }
    }
    std::ostringstream os;
    os << "norm_F " << norm_f << ", nonvanishing ray " << (ray ? "yes" : "no")
       << ", residual(n=60) " << residual;
    detail = os.str();
    return rel_err(norm_f, 1.0) <= 1e-8 && ray && residual <= 1e-6;
}

bool criterion11_isometry(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 11);
    double worst_dev = 0.0, worst_par = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = rng.uniform(0.5, 2.0);
        const double ps[] = {1.0, 2.0, 4.0};
        const FockContext ctx = (i % 4 == 3) ? FockContext::sup(alpha)
                                             : FockContext::finite(ps[i % 4], alpha);
        const Complex lambda = std::polar(1.0, rng.phase());
        const Complex a = rng.disc(1.2);
        const WeightedCompOp W(
            ExpQuadratic{rng.disc(0.5), -alpha * std::conj(a) * lambda, {0, 0}},
            AffineSymbol{a, lambda}, ctx);
        const IsometryReport rep = isometry_report(W, standard_test_functions(alpha));
        worst_dev = std::max(worst_dev, rep.max_deviation);
        worst_par = std::max(worst_par, rep.max_paranormal_residual);
    }
    std::ostringstream os;
    os << "worst ratio deviation " << worst_dev << ", worst paranormal residual " << worst_par;
    detail = os.str();
    return worst_dev <= 1e-6 && worst_par <= 1e-8;
}

bool criterion12_p_independence(std::uint64_t seed, std::string& detail) {
    Rng rng(seed + 12);
    int agree = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        const double alpha = rng.uniform(0.5, 2.0);
        ExpQuadratic psi;
        AffineSymbol phi;
        const int kind = i % 3;
        if (kind == 1) {
            const WeightedCompOp b =
                random_boundary_op(rng, rng.coin(), FockContext::finite(2.0, alpha));
            psi = *as_exp_quadratic(b.psi);
            phi = b.phi;
        } else {
            phi = AffineSymbol{rng.disc(1.2), std::polar(rng.uniform(0.15, 0.9), rng.phase())};
            const double half_ab = 0.5 * alpha * phi.beta();
            const double mod_a2 = (kind == 0) ? rng.uniform(0.0, 0.9) * half_ab
                                              : half_ab + rng.uniform(0.05, 0.4);
            psi = ExpQuadratic{rng.disc(0.4), rng.disc(0.8), std::polar(mod_a2, rng.phase())};
        }
        Verdict v[3];
        int k = 0;
        for (const FockContext& ctx :
             {FockContext::finite(1.0, alpha), FockContext::finite(2.0, alpha),
              FockContext::sup(alpha, true)}) {
            v[k++] = classify(WeightedCompOp(psi, phi, ctx)).verdict;
        }
        if (v[0] == v[1] && v[1] == v[2]) ++agree;
    }
    std::ostringstream os;
    os << agree << "/" << total << " classifications p-independent";
    detail = os.str();
    return agree == total;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(run_timed(1, "norm oracles (constants and kernels)", 10.0,
                            [&](std::string& d) { return criterion1_norm_oracles(seed, d); }));
    out.push_back(run_timed(2, "gaussian closed form vs quadrature", 10.0,
                            [&](std::string& d) { return criterion2_gaussian_vs_quadrature(seed, d); }));
    out.push_back(run_timed(3, "classifier trichotomy vs numeric oracle", 60.0,
                            [&](std::string& d) { return criterion3_trichotomy(seed, d); }));
    out.push_back(run_timed(4, "model examples reproduced", 5.0,
                            [&](std::string& d) { return criterion4_model_examples(d); }));
    out.push_back(run_timed(5, "iterate closed form vs product oracle", 30.0,
                            [&](std::string& d) { return criterion5_iterates(seed, d); }));
    out.push_back(run_timed(6, "linear-coefficient limit is geometric", 20.0,
                            [&](std::string& d) { return criterion6_c1_limit(seed, d); }));
    out.push_back(run_timed(7, "squares of non-real boundary operators are compact", 10.0,
                            [&](std::string& d) { return criterion7_square_compact(seed, d); }));
    out.push_back(run_timed(8, "scaled orbit norms diverge at the boundary", 10.0,
                            [&](std::string& d) { return criterion8_scaled_norms(d); }));
    out.push_back(run_timed(9, "angle-criterion ratios vanish", 10.0,
                            [&](std::string& d) { return criterion9_angle_criterion(d); }));
    out.push_back(run_timed(10, "limit operator on the sup-norm space", 20.0,
                            [&](std::string& d) { return criterion10_limit_operator(d); }));
    out.push_back(run_timed(11, "isometry constant and paranormal identity", 30.0,
                            [&](std::string& d) { return criterion11_isometry(seed, d); }));
    out.push_back(run_timed(12, "classification independent of p", 30.0,
                            [&](std::string& d) { return criterion12_p_independence(seed, d); }));
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " criterion-" << r.id << " " << r.name << " (";
    os.precision(3);
    os << std::fixed << r.seconds << " s): " << r.detail;
    return os.str();
}

}  // namespace fockoplab::verify
