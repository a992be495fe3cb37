#include "fockoplab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fockoplab/quadrature.hpp"

namespace fockoplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelSlack = 1e-12;

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

bool near(double x, double y, double slack = kRelSlack) {
    return std::abs(x - y) <= slack * std::max({std::abs(x), std::abs(y), 1e-300});
}

}  // namespace

FockContext::FockContext(double p_, double alpha_, SpaceFlavor flavor_)
    : p(p_), alpha(alpha_), flavor(flavor_) {
    if (!(alpha > 0.0)) throw ConfigInvalid("FockContext: alpha must be positive");
    if (!(p >= 1.0)) throw ConfigInvalid("FockContext: p must be at least 1");
    const bool inf_p = std::isinf(p);
    if (inf_p && flavor == SpaceFlavor::Fp)
        throw ConfigInvalid("FockContext: p = infinity requires a sup-norm flavor");
    if (!inf_p && flavor != SpaceFlavor::Fp)
        throw ConfigInvalid("FockContext: sup-norm flavors require p = infinity");
}

FockContext FockContext::finite(double p, double alpha) {
    return FockContext(p, alpha, SpaceFlavor::Fp);
}

FockContext FockContext::sup(double alpha, bool zero_subspace) {
    return FockContext(kInf, alpha, zero_subspace ? SpaceFlavor::FinftyZero : SpaceFlavor::FinftyFull);
}

bool FockContext::infinite_p() const { return std::isinf(p); }

bool NormResult::finite() const { return std::isfinite(value); }

double kernel_norm(Complex z, const FockContext& ctx) {
    return std::exp(0.5 * ctx.alpha * std::norm(z));
}

double log_gaussian_norm_expquad(const ExpQuadratic& f, double p, double alpha,
                                 std::optional<double> det_override) {
    const double u = f.a2.real(), v = f.a2.imag();
    const double mod2 = std::abs(f.a2);
    const bool positive = det_override ? (*det_override > 0.0) : (alpha - 2.0 * mod2 > 0.0);
    if (!positive) return kInf;
    const double det = det_override ? *det_override : (alpha - 2.0 * mod2) * (alpha + 2.0 * mod2);
    const double b1 = f.a1.real(), b2 = -f.a1.imag();
    const double qform =
        ((alpha + 2.0 * u) * b1 * b1 - 4.0 * v * b1 * b2 + (alpha - 2.0 * u) * b2 * b2) / det;
    return (std::log(alpha) - 0.5 * std::log(det)) / p + f.a0.real() + 0.5 * qform;
}

NormResult gaussian_norm_expquad(const ExpQuadratic& f, const FockContext& ctx) {
    if (ctx.infinite_p())
        throw std::invalid_argument("gaussian_norm_expquad requires p < infinity");
    NormResult r;
    r.method = NormMethod::ExactGaussian;
    r.error_estimate = 0.0;
    const double log_norm = log_gaussian_norm_expquad(f, ctx.p, ctx.alpha);
    r.value = std::isfinite(log_norm) ? std::exp(log_norm) : kInf;
    return r;
}

NormResult sup_norm_expquad(const ExpQuadratic& f, double alpha) {
    NormResult r;
    r.method = NormMethod::ExactGaussian;
    r.error_estimate = 0.0;
    const double mod2 = std::abs(f.a2);
    const double u = f.a2.real(), v = f.a2.imag();
    const double l1 = f.a1.real(), l2 = -f.a1.imag();
    if (2.0 * mod2 < alpha && !near(2.0 * mod2, alpha)) {
        const double det = (alpha - 2.0 * mod2) * (alpha + 2.0 * mod2);
        const double peak =
            ((alpha + 2.0 * u) * l1 * l1 - 4.0 * v * l1 * l2 + (alpha - 2.0 * u) * l2 * l2) /
            (2.0 * det);
        r.value = std::exp(f.a0.real() + peak);
        return r;
    }
    if (near(2.0 * mod2, alpha)) {
        // Boundary: bounded iff the linear term has no component along the
        // neutral direction of the weighted quadratic form.
        const double theta2 = mod2 > 0.0 ? std::fmod(-0.5 * std::arg(f.a2) + M_PI, M_PI) : 0.0;
        const Complex tau = f.a1 * std::polar(1.0, theta2);
        if (std::abs(tau.real()) <= kRelSlack * (std::abs(f.a1) + 1.0)) {
            r.value = std::exp(f.a0.real() + tau.imag() * tau.imag() / (4.0 * alpha));
            return r;
        }
    }
    r.value = kInf;
    return r;
}

double GrowthEnvelope::log_value(double r) const {
    return log_const + (log_poly ? log_poly(r) : 0.0) + linear * r + quadratic * r * r;
}

GrowthEnvelope growth_envelope(const EntireFunction& f, double alpha) {
    GrowthEnvelope s;
    if (const auto* e = std::get_if<ExpQuadratic>(&f)) {
        s = {e->a0.real(), std::abs(e->a1), std::abs(e->a2), 0, true, nullptr};
    } else if (const auto* pq = std::get_if<PolyTimesExpQuad>(&f)) {
        std::vector<double> mags;
        mags.reserve(pq->poly.size());
        for (const Complex& c : pq->poly) mags.push_back(std::abs(c));
        s = {pq->core.a0.real(), std::abs(pq->core.a1), std::abs(pq->core.a2),
             pq->degree(), true,
             [mags](double r) {
                 double acc = 0.0;
                 for (auto it = mags.rbegin(); it != mags.rend(); ++it) acc = acc * r + *it;
                 return std::log(std::max(acc, 1e-300));
             }};
    } else if (const auto* t = std::get_if<TaylorSeries>(&f)) {
        const double g2 = t->tail().geometric * t->tail().geometric;
        if (g2 < alpha) {
            // Cauchy-Schwarz: sum t^n/sqrt(n!) <= sqrt((1+d)/d) exp((1+d) t^2/2).
            const double delta = 0.5 * (alpha / std::max(g2, 1e-300) - 1.0);
            const double d = std::min(delta, 4.0);
            s.log_const = std::log(std::max(t->tail().scale, 1e-300)) +
                          0.5 * std::log((1.0 + d) / d);
            s.linear = 0.0;
            s.quadratic = 0.5 * (1.0 + d) * g2;
            s.degree = 0;
            s.valid = true;
        }
    }
    return s;
}

GrowthEnvelope envelope_after_affine(const GrowthEnvelope& e, double abs_a, double abs_lambda) {
    GrowthEnvelope s;
    s.valid = e.valid;
    if (!e.valid) return s;
    s.log_const = e.log_const + e.linear * abs_a + e.quadratic * abs_a * abs_a;
    s.linear = e.linear * abs_lambda + 2.0 * e.quadratic * abs_a * abs_lambda;
    s.quadratic = e.quadratic * abs_lambda * abs_lambda;
    s.degree = e.degree;
    if (e.log_poly) {
        auto inner = e.log_poly;
        s.log_poly = [inner, abs_a, abs_lambda](double r) { return inner(abs_a + abs_lambda * r); };
    }
    return s;
}

GrowthEnvelope envelope_product_expquad(GrowthEnvelope e, Complex c0, Complex c1, Complex c2) {
    e.log_const += c0.real();
    e.linear += std::abs(c1);
    e.quadratic += std::abs(c2);
    return e;
}

namespace {

// log of (1/2pi) * integral of |f(r e^{i theta})|^p d theta, by trapezoid
// refinement (spectrally accurate for the periodic integrand).
double theta_log_mean(const std::function<double(Complex)>& log_abs_f, double p, double r,
                      double tol, long* evals) {
    int m = 32;
    double prev = kInf;
    for (int round = 0; round < 12; ++round, m *= 2) {
        double log_sum = -kInf;
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * M_PI * j / m;
            log_sum = log_add(log_sum, p * log_abs_f(std::polar(r, theta)));
        }
        if (evals) *evals += m;
        const double mean = log_sum - std::log(static_cast<double>(m));
        if (round > 0 && std::abs(mean - prev) <= tol) return mean;
        prev = mean;
    }
    return prev;
}

struct QuadratureOutcome {
    double log_norm = -kInf;
    bool finite = true;
    bool converged = false;
    double rel_error = 0.0;
    long evals = 0;
};

QuadratureOutcome norm_quadrature_impl(const std::function<double(Complex)>& log_abs_f,
                                       const GrowthEnvelope& env, const FockContext& ctx,
                                       double tol) {
    const double p = ctx.p, alpha = ctx.alpha;
    QuadratureOutcome out;

    const double lin = env.valid ? env.linear : 1.0;
    double R = std::sqrt(2.0 * (lin + 1.0) / alpha) + 4.0;
    std::vector<double> peak_history;

    for (int doubling = 0; doubling <= 10; ++doubling, R *= 2.0) {
        // Probe the log-integrand to establish a scaling shift and watch
        // for divergence across radius doublings.
        const int probes = 160;
        double shift = -kInf;
        auto log_g = [&](double r) -> double {
            if (r <= 0.0) return -kInf;
            return std::log(r) - 0.5 * alpha * p * r * r +
                   theta_log_mean(log_abs_f, p, r, tol / 16.0, &out.evals);
        };
        for (int i = 1; i <= probes; ++i) shift = std::max(shift, log_g(R * i / probes));
        peak_history.push_back(shift);
        const std::size_t h = peak_history.size();
        if (h >= 3 && peak_history[h - 1] > peak_history[h - 2] + std::log(10.0) &&
            peak_history[h - 2] > peak_history[h - 3] + std::log(10.0)) {
            out.finite = false;
            out.converged = true;
            return out;
        }

        auto integrand = [&](double r) { return std::exp(log_g(r) - shift); };
        quad::Result q = quad::integrate(integrand, 0.0, R, tol / 4.0, 1e-280, 4000);
        out.evals += q.evaluations;
        if (!q.converged || !(q.value > 0.0)) continue;
        const double log_i = std::log(q.value) + shift + std::log(alpha * p);

        if (env.valid) {
            const double eta = (alpha - 2.0 * env.quadratic) * p * R - p * env.linear -
                               (p * env.degree + 1.0) / R;
            if (eta > 0.0) {
                const double log_tail = std::log(alpha * p) + std::log(R) +
                                        p * env.log_value(R) - 0.5 * alpha * p * R * R -
                                        std::log(eta);
                if (log_tail <= log_i + std::log(tol / 2.0)) {
                    out.log_norm = log_i / p;
                    out.rel_error = (q.error / q.value + std::exp(log_tail - log_i)) / p;
                    out.converged = true;
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace

NormResult fock_norm_callable(const std::function<double(Complex)>& log_abs_f,
                              const GrowthEnvelope& env, const FockContext& ctx, double tol) {
    if (ctx.infinite_p())
        throw std::invalid_argument("fock_norm_callable requires p < infinity");
    if (!(tol >= 1e-12)) throw std::invalid_argument("fock_norm: tol must be >= 1e-12");
    QuadratureOutcome out = norm_quadrature_impl(log_abs_f, env, ctx, tol);
    if (!out.converged)
        throw NonConvergent("fock_norm quadrature did not certify within the radius budget");
    NormResult r;
    r.method = NormMethod::Quadrature;
    if (!out.finite) {
        r.value = kInf;
        r.error_estimate = 0.0;
        return r;
    }
    r.value = std::exp(out.log_norm);
    r.error_estimate = out.rel_error;
    return r;
}

NormResult fock_norm_quadrature(const EntireFunction& f, const FockContext& ctx, double tol) {
    return fock_norm_callable([&f](Complex z) { return log_abs_eval(f, z); },
                              growth_envelope(f, ctx.alpha), ctx, tol);
}

NormResult fock_norm_raysup(const EntireFunction& f, const FockContext& ctx, double tol) {
    if (!ctx.infinite_p()) throw std::invalid_argument("fock_norm_raysup requires p = infinity");
    const double alpha = ctx.alpha;
    GrowthEnvelope env = growth_envelope(f, alpha);
    const double eval_radius = evaluation_radius(f);

    auto weighted_log = [&](double r, double theta) -> double {
        return log_abs_eval(f, std::polar(r, theta)) - 0.5 * alpha * r * r;
    };

    double sup_log = log_abs_eval(f, Complex{0.0, 0.0});
    double best_r = 0.0, best_theta = 0.0;
    const int n_theta = 128;
    const double dr = 0.125;
    double R = 4.0;
    std::vector<double> peak_history;
    bool certified = false;

    for (int doubling = 0; doubling <= 10 && !certified; ++doubling, R *= 2.0) {
        const double r_lo = (doubling == 0) ? dr : R / 2.0 + dr;
        const double r_hi = std::min(R, eval_radius * 0.999);
        double local_peak = -kInf;
        for (double r = r_lo; r <= r_hi + 1e-12; r += dr) {
            for (int j = 0; j < n_theta; ++j) {
                const double theta = 2.0 * M_PI * j / n_theta;
                const double v = weighted_log(r, theta);
                local_peak = std::max(local_peak, v);
                if (v > sup_log) {
                    sup_log = v;
                    best_r = r;
                    best_theta = theta;
                }
            }
        }
        peak_history.push_back(local_peak);
        const std::size_t h = peak_history.size();
        if (h >= 3 && peak_history[h - 1] > peak_history[h - 2] + std::log(10.0) &&
            peak_history[h - 2] > peak_history[h - 3] + std::log(10.0)) {
            NormResult r;
            r.method = NormMethod::RaySup;
            r.value = kInf;
            r.error_estimate = 0.0;
            return r;
        }
        if (env.valid) {
            // No larger value outside R: the envelope bound must be below the
            // current supremum and decreasing from R on.
            const double deriv = env.degree / std::max(R, 1.0) + env.linear +
                                 (2.0 * env.quadratic - alpha) * R;
            const double bound = env.log_value(R) - 0.5 * alpha * R * R;
            if (deriv < 0.0 && bound < sup_log) certified = true;
        }
        if (r_hi < R && !certified && env.valid) {
            // evaluation radius exhausted; fall back to envelope-only check
            const double deriv = env.degree / std::max(r_hi, 1.0) + env.linear +
                                 (2.0 * env.quadratic - alpha) * r_hi;
            const double bound = env.log_value(r_hi) - 0.5 * alpha * r_hi * r_hi;
            if (deriv < 0.0 && bound < sup_log) certified = true;
            break;
        }
    }
    if (!certified)
        throw NonConvergent("fock_norm sup search could not certify an outer bound");

    // Local pattern refinement around the best grid point.
    double hr = dr, ht = 2.0 * M_PI / n_theta;
    double improvement = 0.0;
    for (int it = 0; it < 70; ++it) {
        bool moved = false;
        for (auto [dr2, dt2] : {std::pair{hr, 0.0}, {-hr, 0.0}, {0.0, ht}, {0.0, -ht}}) {
            const double r2 = best_r + dr2;
            if (r2 <= 0.0 || r2 > eval_radius) continue;
            const double v = weighted_log(r2, best_theta + dt2);
            if (v > sup_log) {
                improvement = v - sup_log;
                sup_log = v;
                best_r = r2;
                best_theta += dt2;
                moved = true;
            }
        }
        if (!moved) {
            hr *= 0.5;
            ht *= 0.5;
        }
        if (hr < 1e-12 && ht < 1e-12) break;
    }

    NormResult r;
    r.method = NormMethod::RaySup;
    r.value = std::exp(sup_log);
    r.error_estimate = std::max(improvement, tol * 1e-3);
    return r;
}

NormResult fock_norm(const EntireFunction& f, const FockContext& ctx, double tol) {
    if (!(tol >= 1e-12)) throw std::invalid_argument("fock_norm: tol must be >= 1e-12");
    if (auto e = as_exp_quadratic(f)) {
        return ctx.infinite_p() ? sup_norm_expquad(*e, ctx.alpha)
                                : gaussian_norm_expquad(*e, ctx);
    }
    return ctx.infinite_p() ? fock_norm_raysup(f, ctx, tol) : fock_norm_quadrature(f, ctx, tol);
}

namespace {

Membership membership_taylor(const TaylorSeries& t, const FockContext& ctx) {
    GrowthProfile prof;
    try {
        prof = order_type(EntireFunction{t});
    } catch (const InsufficientCoefficients&) {
        return Membership::Indeterminate;
    }
    const double half_alpha = 0.5 * ctx.alpha;
    if (prof.order < 1.9) return Membership::In;
    if (prof.order > 2.1) return Membership::NotIn;
    if (!prof.type) return Membership::Indeterminate;
    if (*prof.type < 0.9 * half_alpha) return Membership::In;
    if (*prof.type > 1.1 * half_alpha) return Membership::NotIn;
    return Membership::Indeterminate;
}

}  // namespace

Membership membership(const EntireFunction& f, const FockContext& ctx) {
    const double alpha = ctx.alpha;
    if (const auto* t = std::get_if<TaylorSeries>(&f)) return membership_taylor(*t, ctx);

    const ExpQuadratic* core = nullptr;
    bool poly_constant = true;
    std::optional<ExpQuadratic> canon = as_exp_quadratic(f);
    ExpQuadratic canon_value;
    if (canon) {
        canon_value = *canon;
        core = &canon_value;
    } else {
        const auto& pq = std::get<PolyTimesExpQuad>(f);
        core = &pq.core;
        poly_constant = false;
    }

    const double b = std::abs(core->a2);
    if (near(2.0 * b, alpha)) {
        if (!ctx.infinite_p() || ctx.flavor == SpaceFlavor::FinftyZero) return Membership::NotIn;
        if (!poly_constant) return Membership::NotIn;  // polynomial growth along the neutral line
        NormResult sup = sup_norm_expquad(canon_value, alpha);
        return sup.finite() ? Membership::BoundaryIn : Membership::NotIn;
    }
    return (2.0 * b < alpha) ? Membership::In : Membership::NotIn;
}

bool DecayProfile::any_nonvanishing() const {
    for (const auto& r : rays)
        if (r.verdict != RayTrend::DecaysToZero) return true;
    return false;
}

bool DecayProfile::all_decay() const {
    for (const auto& r : rays)
        if (r.verdict != RayTrend::DecaysToZero) return false;
    return true;
}

DecayProfile decay_profile(const EntireFunction& f, double alpha, int n_rays, double r_max) {
    if (n_rays < 4) throw std::invalid_argument("decay_profile: n_rays must be >= 4");
    if (!(alpha > 0.0) || !(r_max > 0.0))
        throw std::invalid_argument("decay_profile: alpha and r_max must be positive");
    const double r_eff = std::min(r_max, evaluation_radius(f) * 0.98);
    const int m = 96;
    DecayProfile out;
    out.rays.reserve(static_cast<std::size_t>(n_rays));
    for (int k = 0; k < n_rays; ++k) {
        RayProfile ray;
        ray.theta = 2.0 * M_PI * k / n_rays;
        ray.radii.reserve(m);
        ray.log_values.reserve(m);
        for (int i = 1; i <= m; ++i) {
            const double r = r_eff * i / m;
            const double a = std::abs(eval(f, std::polar(r, ray.theta)));
            ray.radii.push_back(r);
            ray.log_values.push_back((a > 0.0 ? std::log(a) : -kInf) - 0.5 * alpha * r * r);
        }
        // last-quartile least-squares slope of log value against r
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int i = 3 * m / 4; i < m; ++i) {
            if (!std::isfinite(ray.log_values[static_cast<std::size_t>(i)])) continue;
            const double x = ray.radii[static_cast<std::size_t>(i)];
            const double y = ray.log_values[static_cast<std::size_t>(i)];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2) {
            const double denom = cnt * sxx - sx * sx;
            ray.log_slope = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
        } else {
            ray.log_slope = -1.0;  // the weighted modulus vanished identically on the tail
        }
        ray.last_log_value = ray.log_values.back();
        if (ray.log_slope < -1e-6)
            ray.verdict = RayTrend::DecaysToZero;
        else if (ray.log_slope > 1e-6)
            ray.verdict = RayTrend::Grows;
        else
            ray.verdict = RayTrend::BoundedNonVanishing;
        out.rays.push_back(std::move(ray));
    }
    return out;
}

std::string to_string(Membership m) {
    switch (m) {
        case Membership::In: return "In";
        case Membership::NotIn: return "NotIn";
        case Membership::BoundaryIn: return "BoundaryIn";
        default: return "Indeterminate";
    }
}

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::ExactGaussian: return "exact_gaussian";
        case NormMethod::Quadrature: return "quadrature";
        default: return "ray_sup";
    }
}

std::string to_string(RayTrend t) {
    switch (t) {
        case RayTrend::DecaysToZero: return "DecaysToZero";
        case RayTrend::BoundedNonVanishing: return "BoundedNonVanishing";
        default: return "Grows";
    }
}

std::string to_string(SpaceFlavor f) {
    switch (f) {
        case SpaceFlavor::Fp: return "fp";
        case SpaceFlavor::FinftyFull: return "finfty";
        default: return "finfty0";
    }
}

}  // namespace fockoplab
