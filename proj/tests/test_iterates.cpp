#include "doctest.h"

#include <cmath>

#include "fockoplab/iterates.hpp"
#include "support/test_oracles.hpp"

using namespace fockoplab;

namespace {
const Complex kZero{0.0, 0.0};
const EntireFunction kOne{ExpQuadratic{}};
const FockContext kP2 = FockContext::finite(2.0, 1.0);

WeightedCompOp boundary_example(const FockContext& ctx = kP2) {
    return WeightedCompOp(ExpQuadratic{kZero, kZero, {0.375, 0.0}},
                          AffineSymbol{kZero, {0.5, 0.0}}, ctx);
}

WeightedCompOp random_admissible(oracles::TestRng& rng, const FockContext& ctx) {
    const Complex lambda = std::polar(rng.uniform(0.2, 0.9), rng.uniform(0.0, 6.28));
    const double beta = 1.0 - std::norm(lambda);
    const Complex a = rng.disc(1.0);
    if (rng.uniform(0.0, 1.0) < 0.5) {
        // strictly compact
        return WeightedCompOp(
            ExpQuadratic{rng.disc(0.5), rng.disc(0.7),
                         std::polar(rng.uniform(0.0, 0.4) * ctx.alpha * beta,
                                    rng.uniform(0.0, 6.28))},
            AffineSymbol{a, lambda}, ctx);
    }
    // boundary with t = 0
    return WeightedCompOp(
        ExpQuadratic{rng.disc(0.5), -ctx.alpha * std::conj(a) * lambda,
                     std::polar(0.5 * ctx.alpha * beta, rng.uniform(0.0, 6.28))},
        AffineSymbol{a, lambda}, ctx);
}
}  // namespace

TEST_CASE("iterated symbols") {
    const AffineSymbol phi{{1, 0}, {0.5, 0.0}};
    const AffineSymbol id = phi_n(phi, 0);
    CHECK(id.a == kZero);
    CHECK(id.lambda == Complex{1.0, 0.0});

    const AffineSymbol two = phi_n(phi, 2);
    CHECK(std::abs(two.a - Complex{1.5, 0.0}) < 1e-15);
    CHECK(std::abs(two.lambda - Complex{0.25, 0.0}) < 1e-15);

    const Complex z0 = phi.fixed_point();
    for (long n = 1; n <= 64; ++n)
        CHECK(std::abs(phi_n(phi, n)(z0) - z0) < 1e-14);

    CHECK_THROWS_AS(phi_n(AffineSymbol{{1, 0}, {1, 0}}, 3), NoFixedPoint);
    CHECK(phi_n(AffineSymbol{kZero, {1, 0}}, 5).lambda == Complex{1.0, 0.0});
}

TEST_CASE("iterated symbols compose additively") {
    oracles::TestRng rng(777);
    for (int i = 0; i < 30; ++i) {
        const AffineSymbol phi{rng.disc(1.5), rng.disc(0.95)};
        const long m = 1 + (i % 7), n = 1 + (i % 11);
        const AffineSymbol lhs = phi_n(phi, m).after(phi_n(phi, n));
        const AffineSymbol rhs = phi_n(phi, m + n);
        CHECK(std::abs(lhs.a - rhs.a) < 1e-14 * (1.0 + std::abs(rhs.a)));
        CHECK(std::abs(lhs.lambda - rhs.lambda) < 1e-14);
    }
}

TEST_CASE("first iterate reproduces the multiplier") {
    oracles::TestRng rng(888);
    for (int i = 0; i < 30; ++i) {
        const WeightedCompOp W = random_admissible(rng, kP2);
        const auto psi = as_exp_quadratic(W.psi);
        const IterateCoeffs c = iterate_coeffs(W, 1);
        const Complex z0 = W.phi.fixed_point();
        const Complex g_z0 = psi->log_at(z0);
        CHECK(std::abs(c.c0n + g_z0 - psi->a0) < 1e-13 * (1.0 + std::abs(psi->a0)));
        CHECK(std::abs(c.c1n - psi->a1) < 1e-13 * (1.0 + std::abs(psi->a1)));
        CHECK(std::abs(c.c2n - psi->a2) < 1e-13 * (1.0 + std::abs(psi->a2)));
    }
}

TEST_CASE("quadratic iterate coefficient in closed form") {
    const IterateCoeffs c = iterate_coeffs(boundary_example(), 3);
    CHECK(std::abs(c.c2n - Complex{0.4921875, 0.0}) < 1e-16);  // 63/128
}

TEST_CASE("closed form matches the product oracle") {
    oracles::TestRng rng(999);
    for (int i = 0; i < 30; ++i) {
        const FockContext ctx = FockContext::finite(2.0, rng.uniform(0.5, 2.0));
        const WeightedCompOp W = random_admissible(rng, ctx);
        const EntireFunction f =
            (i % 2) ? EntireFunction{ExpQuadratic{kZero, {0.3, 0.0}, kZero}} : kOne;
        for (long n : {2L, 5L, 17L, 64L}) {
            const Complex z = rng.disc(2.0);
            const LogComplex a = iterate_apply_closed(W, f, n, z);
            const LogComplex b = iterate_apply_product(W, f, n, z);
            CHECK(std::abs(a.log_abs - b.log_abs) <= 1e-10 * (1.0 + std::abs(b.log_abs)));
            CHECK(std::abs(std::remainder(a.arg - b.arg, 2.0 * M_PI)) <=
                  1e-10 * (1.0 + std::abs(b.arg)));
        }
    }
}

TEST_CASE("iterate errors") {
    CHECK_THROWS_AS(iterate_coeffs(WeightedCompOp(expm1_quadratic_over_z({0.2, 0.0}),
                                                  AffineSymbol{kZero, {0.5, 0.0}}, kP2),
                                   4),
                    WrongMultiplierKind);
    CHECK_THROWS_AS(iterate_coeffs(WeightedCompOp(ExpQuadratic{}, AffineSymbol{{1, 0}, kZero},
                                                  kP2),
                                   4),
                    DegenerateLambda);
    CHECK_THROWS_AS(iterate_coeffs(WeightedCompOp(ExpQuadratic{},
                                                  AffineSymbol{kZero, {1, 0}}, kP2),
                                   4),
                    DegenerateLambda);
}

TEST_CASE("product evaluation is associative across splits") {
    oracles::TestRng rng(1010);
    const WeightedCompOp W = random_admissible(rng, kP2);
    const EntireFunction f{ExpQuadratic{kZero, {0.2, 0.1}, kZero}};
    for (int i = 0; i < 10; ++i) {
        const Complex z = rng.disc(2.0);
        const LogComplex five = iterate_apply_product(W, f, 5, z);
        // W^5 f = W^2 (W^3 f): two factors at z, then W^3 f at phi_2(z)
        LogComplex split{0.0, 0.0};
        Complex w = z;
        for (int k = 0; k < 2; ++k) {
            const Complex v = eval(W.psi, w);
            split.log_abs += std::log(std::abs(v));
            split.arg += std::arg(v);
            w = W.phi(w);
        }
        const LogComplex rest = iterate_apply_product(W, f, 3, w);
        split.log_abs += rest.log_abs;
        split.arg += rest.arg;
        CHECK(std::abs(five.log_abs - split.log_abs) <= 1e-10 * (1.0 + std::abs(five.log_abs)));
        CHECK(std::abs(std::remainder(five.arg - split.arg, 2.0 * M_PI)) <= 1e-10);
    }
}

TEST_CASE("linear coefficient converges geometrically to its limit") {
    oracles::TestRng rng(1111);
    for (int i = 0; i < 10; ++i) {
        const WeightedCompOp W = random_admissible(rng, kP2);
        const auto psi = as_exp_quadratic(W.psi);
        const Complex one{1.0, 0.0};
        const Complex l = W.phi.lambda;
        const Complex z0 = W.phi.fixed_point();
        const Complex c1 =
            (psi->a1 + l * W.phi.a * 2.0 * psi->a2 / (one - l * l)) / (one - l);
        // triangle-inequality constant for |c1n - c1| <= K |lambda|^n
        const double K = std::abs(psi->a1 + 2.0 * psi->a2 * z0) / std::abs(one - l) +
                         2.0 * std::abs(psi->a2 * z0) / std::abs(one - l * l);
        for (long n = 1; n <= 24; ++n) {
            const double diff = std::abs(iterate_coeffs(W, n).c1n - c1);
            CHECK(diff <= K * std::pow(std::abs(l), static_cast<double>(n)) * (1.0 + 1e-9) +
                              1e-13);
        }
    }
}

TEST_CASE("limit function of the boundary example") {
    const LimitData lim = limit_function(boundary_example());
    CHECK(std::abs(lim.c1) < 1e-15);
    CHECK(std::abs(lim.c0) < 1e-15);
    CHECK(std::abs(lim.c - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(lim.F.a1) < 1e-15);
    CHECK(std::abs(lim.F.a2 - Complex{0.5, 0.0}) < 1e-15);

    CHECK(fock_norm(EntireFunction{lim.F}, FockContext::sup(1.0)).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(decay_profile(EntireFunction{lim.F}, 1.0, 8, 12.0).any_nonvanishing());
}

TEST_CASE("limit function in the aligned boundary case") {
    // a = 1, lambda = 1/2, t = 3/2 aligned: a2 = -3/8
    const WeightedCompOp W(ExpQuadratic{kZero, {1, 0}, {-0.375, 0.0}},
                           AffineSymbol{{1, 0}, {0.5, 0.0}}, kP2);
    REQUIRE(classify(W).verdict == Verdict::BoundedNotCompact);
    const LimitData lim = limit_function(W);
    CHECK(sup_norm_expquad(lim.F, 1.0).finite());
    CHECK(decay_profile(EntireFunction{lim.F}, 1.0, 16, 12.0).any_nonvanishing());
}

TEST_CASE("limit function preconditions") {
    const WeightedCompOp compact(ExpQuadratic{kZero, kZero, {0.1, 0.0}},
                                 AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    CHECK_THROWS_AS(limit_function(compact), HypothesisViolated);
    const WeightedCompOp nonreal(ExpQuadratic{kZero, kZero, {0.375, 0.0}},
                                 AffineSymbol{kZero, {0, 0.5}}, kP2);
    CHECK_THROWS_AS(limit_function(nonreal), HypothesisViolated);
}

TEST_CASE("the limit operator is rank one") {
    const LimitData lim = limit_function(boundary_example());
    // f vanishing at the fixed point kills the image
    const EntireFunction vanishing{PolyTimesExpQuad({kZero, {1, 0}}, ExpQuadratic{})};
    for (double x : {-1.0, 0.3, 2.0})
        CHECK(limit_operator_apply(lim, vanishing, lim.z0, {x, 0.5}) == kZero);
    // constant input returns c F(z)
    const Complex z{1.2, -0.7};
    CHECK(std::abs(limit_operator_apply(lim, kOne, lim.z0, z) - lim.c * lim.F(z)) < 1e-15);
}

TEST_CASE("scaled iterates converge to the limit operator on a disc") {
    const WeightedCompOp W = boundary_example(FockContext::sup(1.0, true));
    const LimitData lim = limit_function(W);
    double prev = std::numeric_limits<double>::infinity();
    for (long n : {10L, 20L, 40L, 60L}) {
        const IterateCoeffs c = iterate_coeffs(W, n);
        double worst = 0.0;
        for (int i = 0; i < 33; ++i) {
            for (int j = 0; j < 33; ++j) {
                const Complex z{-2.0 + 4.0 * i / 32.0, -2.0 + 4.0 * j / 32.0};
                worst = std::max(worst, std::abs(scaled_iterate_eval(W, c, kOne, z) -
                                                 limit_operator_apply(lim, kOne, lim.z0, z)));
            }
        }
        CHECK(worst <= prev + 1e-12);
        prev = worst;
    }
    CHECK(prev <= 1e-6);
}
