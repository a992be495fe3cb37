#include "fockoplab/entire.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fockoplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

bool GrowthProfile::order_is_finite() const { return std::isfinite(order); }

PolyTimesExpQuad::PolyTimesExpQuad(std::vector<Complex> q, ExpQuadratic c)
    : poly(std::move(q)), core(c) {
    while (poly.size() > 1 && poly.back() == Complex{0.0, 0.0}) poly.pop_back();
    if (poly.empty() || poly.back() == Complex{0.0, 0.0})
        throw std::invalid_argument("PolyTimesExpQuad: polynomial factor must be nonzero");
}

Complex PolyTimesExpQuad::poly_at(Complex z) const {
    Complex acc{0.0, 0.0};
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
    return acc;
}

TaylorSeries::TaylorSeries(std::vector<Complex> coeffs, TaylorTail tail)
    : coeffs_(std::move(coeffs)), tail_(tail) {
    if (coeffs_.empty()) throw std::invalid_argument("TaylorSeries: no coefficients");
    if (!(tail_.scale >= 0.0) || !(tail_.geometric >= 0.0))
        throw std::invalid_argument("TaylorSeries: tail envelope must be nonnegative");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
        double bound = tail_.scale *
                       std::exp(static_cast<double>(n) * std::log(std::max(tail_.geometric, 1e-300)) -
                                0.5 * std::lgamma(static_cast<double>(n) + 1.0));
        if (tail_.geometric == 0.0) bound = (n == 0) ? tail_.scale : 0.0;
        if (std::abs(coeffs_[n]) > bound * (1.0 + 1e-9) + 1e-300)
            throw std::invalid_argument("TaylorSeries: envelope does not cover stored coefficients");
    }

    // Certified radius: largest r with tail(r) <= 1e-12 * (1 + sum |c_n| r^n).
    // Sums are carried in log scale; the comparison must survive magnitudes
    // far beyond double range.
    auto certified_at = [this](double r) {
        const double logr = std::log(std::max(r, 1e-300));
        double log_partial = -kInf;
        for (std::size_t n = 0; n < coeffs_.size(); ++n) {
            const double m = std::abs(coeffs_[n]);
            if (m > 0.0)
                log_partial = log_add(log_partial, std::log(m) + static_cast<double>(n) * logr);
        }
        const double log_rhs = std::log(1e-12) + log_add(0.0, log_partial);
        return log_truncation_bound(r) <= log_rhs;
    };
    if (!certified_at(1e-6)) {
        certified_radius_ = 0.0;
        return;
    }
    double lo = 1e-6, hi = 1e-6;
    while (hi < 1e6 && certified_at(hi * 2.0)) {
        lo = hi * 2.0;
        hi = lo;
    }
    if (hi >= 1e6) {
        certified_radius_ = hi;
        return;
    }
    hi = lo * 2.0;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (certified_at(mid) ? lo : hi) = mid;
    }
    certified_radius_ = lo;
}

double TaylorSeries::log_truncation_bound(double r) const {
    if (tail_.scale == 0.0 || tail_.geometric == 0.0 || r == 0.0) return -kInf;
    const double lgr = std::log(tail_.geometric * r);
    const std::size_t n0 = coeffs_.size();
    const double peak = (lgr > 0.0) ? std::exp(2.0 * lgr) : 0.0;  // terms crest near n ~ (gamma r)^2
    double log_sum = -kInf;
    for (std::size_t n = n0; n < n0 + 2000000; ++n) {
        double ln = static_cast<double>(n) * lgr - 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
        log_sum = log_add(log_sum, ln);
        if (log_sum > 5e6) break;  // bound astronomically large, stop summing
        if (static_cast<double>(n) > peak + 8.0 && ln < log_sum - 45.0) break;
    }
    return std::log(tail_.scale) + log_sum;
}

double TaylorSeries::truncation_bound(double r) const {
    return std::exp(log_truncation_bound(r));
}

double TaylorSeries::magnitude_envelope(double r) const {
    double partial = 0.0, rn = 1.0;
    for (const Complex& c : coeffs_) {
        partial += std::abs(c) * rn;
        rn *= r;
    }
    return partial + truncation_bound(r);
}

Complex TaylorSeries::operator()(Complex z) const {
    if (std::abs(z) > certified_radius_)
        throw RadiusExceeded("TaylorSeries eval at |z| = " + std::to_string(std::abs(z)) +
                             " beyond certified radius " + std::to_string(certified_radius_));
    Complex acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex eval(const EntireFunction& f, Complex z) {
    return std::visit([z](const auto& g) { return g(z); }, f);
}

double log_abs_eval(const EntireFunction& f, Complex z) {
    return std::visit(
        [z](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ExpQuadratic>) {
                return g.log_at(z).real();
            } else if constexpr (std::is_same_v<T, PolyTimesExpQuad>) {
                const double q = std::abs(g.poly_at(z));
                return (q > 0.0 ? std::log(q) : -kInf) + g.core.log_at(z).real();
            } else {
                const double a = std::abs(g(z));
                return a > 0.0 ? std::log(a) : -kInf;
            }
        },
        f);
}

namespace {

GrowthProfile exact_profile(const ExpQuadratic& f) {
    GrowthProfile p;
    p.exactness = ProfileExactness::Exact;
    if (f.a2 != Complex{0.0, 0.0}) {
        p.order = 2.0;
        p.type = std::abs(f.a2);
    } else if (f.a1 != Complex{0.0, 0.0}) {
        p.order = 1.0;
        p.type = std::abs(f.a1);
    } else {
        p.order = 0.0;
        p.type = std::nullopt;
    }
    return p;
}

// Least squares for y ~ m ln n + b + k1 ln n / n + k2 / n via modified
// Gram-Schmidt in extended precision. Returns (m, b).
std::array<long double, 2> fit_growth_model(const std::vector<std::pair<double, double>>& pts) {
    const std::size_t rows = pts.size();
    constexpr std::size_t cols = 4;
    std::vector<std::array<long double, cols>> a(rows);
    std::vector<long double> y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const long double n = pts[i].first;
        const long double x = std::log(static_cast<double>(n));
        a[i] = {x, 1.0L, x / n, 1.0L / n};
        y[i] = pts[i].second;
    }
    std::array<std::array<long double, cols>, cols> r{};
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            long double dot = 0.0L;
            for (std::size_t i = 0; i < rows; ++i) dot += a[i][k] * a[i][j];
            r[k][j] = dot;
            for (std::size_t i = 0; i < rows; ++i) a[i][j] -= dot * a[i][k];
        }
        long double nrm = 0.0L;
        for (std::size_t i = 0; i < rows; ++i) nrm += a[i][j] * a[i][j];
        nrm = std::sqrt(static_cast<double>(nrm));
        r[j][j] = nrm;
        if (nrm > 0.0L)
            for (std::size_t i = 0; i < rows; ++i) a[i][j] /= nrm;
    }
    std::array<long double, cols> qty{};
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) qty[j] += a[i][j] * y[i];
    std::array<long double, cols> sol{};
    for (std::size_t j = cols; j-- > 0;) {
        long double s = qty[j];
        for (std::size_t k = j + 1; k < cols; ++k) s -= r[j][k] * sol[k];
        sol[j] = (r[j][j] != 0.0L) ? s / r[j][j] : 0.0L;
    }
    return {sol[0], sol[1]};
}

GrowthProfile estimated_profile(const TaylorSeries& f) {
    std::vector<std::pair<double, double>> pts;  // (n, -ln|c_n| / n)
    const auto& c = f.coeffs();
    for (std::size_t n = 1; n < c.size(); ++n) {
        double m = std::abs(c[n]);
        // coefficients close to the subnormal range carry too little
        // precision for the log-magnitude fit
        if (m > 1e-290)
            pts.emplace_back(static_cast<double>(n), -std::log(m) / static_cast<double>(n));
    }
    if (pts.size() < 16)
        throw InsufficientCoefficients("order/type estimate needs at least 16 nonzero coefficients, have " +
                                       std::to_string(pts.size()));

    // Restrict to the top quartile of indices; the limsup lives there.
    const double n_min = pts.front().first, n_max = pts.back().first;
    auto window_from = [&](double cut) {
        std::vector<std::pair<double, double>> w;
        for (const auto& p : pts)
            if (p.first >= cut) w.push_back(p);
        return w;
    };
    auto win = window_from(n_max - (n_max - n_min) / 4.0);
    if (win.size() < 6) win = window_from(n_max - (n_max - n_min) / 2.0);
    if (win.size() < 6) win = pts;

    auto [m, b] = fit_growth_model(win);

    GrowthProfile p;
    p.exactness = ProfileExactness::Estimated;
    if (m <= 1e-6) {  // -ln|c_n|/n not growing with ln n: faster than every finite order
        p.order = kInf;
        p.type = std::nullopt;
        return p;
    }
    p.order = static_cast<double>(1.0L / m);
    double sigma = static_cast<double>(m * std::exp(static_cast<double>(-b / m)) / std::exp(1.0L));
    if (p.order > 1e-9 && std::isfinite(sigma))
        p.type = sigma;
    return p;
}

}  // namespace

GrowthProfile order_type(const EntireFunction& f) {
    return std::visit(
        [](const auto& g) -> GrowthProfile {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ExpQuadratic>) {
                return exact_profile(g);
            } else if constexpr (std::is_same_v<T, PolyTimesExpQuad>) {
                GrowthProfile p = exact_profile(g.core);
                if (p.order == 0.0) p.type = std::nullopt;  // polynomial
                return p;
            } else {
                return estimated_profile(g);
            }
        },
        f);
}

double max_modulus(const EntireFunction& f, double r, int n_theta) {
    if (n_theta < 8) throw std::invalid_argument("max_modulus: n_theta must be >= 8");
    if (!(r > 0.0)) throw std::invalid_argument("max_modulus: r must be positive");
    if (r > evaluation_radius(f))
        throw RadiusExceeded("max_modulus beyond certified evaluation radius");
    // Nested power-of-two grids keep the sampled max monotone in n_theta.
    int m = 8;
    while (m < n_theta) m *= 2;
    double best = 0.0;
    for (int j = 0; j < m; ++j) {
        double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m);
        best = std::max(best, std::abs(eval(f, std::polar(r, theta))));
    }
    return best;
}

TaylorSeries expm1_quadratic_over_z(Complex c, int quadratic_terms) {
    if (c == Complex{0.0, 0.0})
        throw std::invalid_argument("expm1_quadratic_over_z: c must be nonzero");
    if (quadratic_terms < 8) throw std::invalid_argument("expm1_quadratic_over_z: too few terms");
    const int K = quadratic_terms;
    std::vector<Complex> coeffs(static_cast<std::size_t>(2 * K), Complex{0.0, 0.0});
    Complex ck{1.0, 0.0};
    for (int k = 1; k <= K; ++k) {
        ck *= c / static_cast<double>(k);
        coeffs[static_cast<std::size_t>(2 * k - 1)] = ck;
    }
    const double gamma = std::sqrt(2.0 * std::abs(c));
    double scale = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double n = 2.0 * k - 1.0;
        double lr = static_cast<double>(k) * std::log(std::abs(c)) - std::lgamma(k + 1.0) +
                    0.5 * std::lgamma(n + 1.0) - n * std::log(gamma);
        scale = std::max(scale, std::exp(lr));
    }
    return TaylorSeries(std::move(coeffs), TaylorTail{scale * (1.0 + 1e-7), gamma});
}

EntireFunction scaled(const EntireFunction& f, Complex factor) {
    if (factor == Complex{0.0, 0.0})
        throw std::invalid_argument("scaled: zero factor would produce the zero function");
    return std::visit(
        [factor](const auto& g) -> EntireFunction {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ExpQuadratic>) {
                ExpQuadratic h = g;
                h.a0 += std::log(factor);
                return h;
            } else if constexpr (std::is_same_v<T, PolyTimesExpQuad>) {
                std::vector<Complex> q = g.poly;
                for (Complex& v : q) v *= factor;
                return PolyTimesExpQuad(std::move(q), g.core);
            } else {
                std::vector<Complex> c = g.coeffs();
                for (Complex& v : c) v *= factor;
                TaylorTail t = g.tail();
                t.scale *= std::abs(factor) * (1.0 + 1e-12);
                return TaylorSeries(std::move(c), t);
            }
        },
        f);
}

std::optional<ExpQuadratic> as_exp_quadratic(const EntireFunction& f) {
    if (const auto* e = std::get_if<ExpQuadratic>(&f)) return *e;
    if (const auto* p = std::get_if<PolyTimesExpQuad>(&f)) {
        if (p->poly_is_constant()) {
            ExpQuadratic e = p->core;
            e.a0 += std::log(p->poly[0]);
            return e;
        }
    }
    return std::nullopt;
}

double magnitude_envelope(const EntireFunction& f, double r) {
    return std::visit(
        [r](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ExpQuadratic>) {
                return std::exp(g.a0.real() + std::abs(g.a1) * r + std::abs(g.a2) * r * r);
            } else if constexpr (std::is_same_v<T, PolyTimesExpQuad>) {
                double q = 0.0, rn = 1.0;
                for (const Complex& v : g.poly) {
                    q += std::abs(v) * rn;
                    rn *= r;
                }
                return q * std::exp(g.core.a0.real() + std::abs(g.core.a1) * r +
                                    std::abs(g.core.a2) * r * r);
            } else {
                return g.magnitude_envelope(r);
            }
        },
        f);
}

double evaluation_radius(const EntireFunction& f) {
    if (const auto* t = std::get_if<TaylorSeries>(&f)) return t->certified_radius();
    return kInf;
}

}  // namespace fockoplab
