#include "doctest.h"

#include <cmath>

#include "fockoplab/dynamics.hpp"
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

double rel(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}
}  // namespace

TEST_CASE("trend detection on synthetic sequences") {
    std::vector<double> up, down, flat, tiny;
    for (int n = 0; n < 40; ++n) {
        up.push_back(0.3 * n);
        down.push_back(-0.25 * n + 0.01 * std::sin(n));
        flat.push_back(1.0 + 1e-5 * std::sin(0.7 * n));
    }
    tiny = {1.0, 2.0};
    CHECK(detect_trend(up) == Trend::DivergesToInfinity);
    CHECK(detect_trend(down) == Trend::ConvergesToZero);
    CHECK(detect_trend(flat) == Trend::Bounded);
    CHECK(detect_trend(tiny) == Trend::Inconclusive);
}

TEST_CASE("scaled orbit norms of the boundary example") {
    const SequenceReport rep = scaled_iterate_norms(boundary_example(), kOne, 40);
    REQUIRE(rep.log_values.size() == 40);
    const double lambda = 0.5;
    for (const auto& [n, logv] : rep.log_values) {
        const double want =
            std::pow(lambda, -0.5 * n) * std::pow(2.0 - std::pow(lambda, 2.0 * n), -0.25);
        CHECK(rel(std::exp(logv), want) < 1e-8);
    }
    CHECK(std::exp(rep.log_values[1].second) ==
          doctest::Approx(1.6951946296600866).epsilon(1e-10));
    CHECK(rep.trend == Trend::DivergesToInfinity);
    REQUIRE(rep.rate.has_value());
    CHECK(*rep.rate == doctest::Approx(std::pow(lambda, -0.5)).epsilon(1e-3));
}

TEST_CASE("scaled orbit norms check their hypotheses") {
    const WeightedCompOp compact(ExpQuadratic{kZero, kZero, {0.1, 0.0}},
                                 AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    CHECK_THROWS_AS(scaled_iterate_norms(compact, kOne, 8), HypothesisViolated);

    const WeightedCompOp nonreal(ExpQuadratic{kZero, kZero, {0.375, 0.0}},
                                 AffineSymbol{kZero, {0, 0.5}}, kP2);
    CHECK_THROWS_AS(scaled_iterate_norms(nonreal, kOne, 8), HypothesisViolated);

    const EntireFunction vanishing{PolyTimesExpQuad({kZero, {1, 0}}, ExpQuadratic{})};
    CHECK_THROWS_AS(scaled_iterate_norms(boundary_example(), vanishing, 8), HypothesisViolated);

    CHECK_THROWS_AS(scaled_iterate_norms(boundary_example(FockContext::sup(1.0)), kOne, 8),
                    HypothesisViolated);
}

TEST_CASE("scaled orbit norms with a polynomial input match the moment oracle") {
    const WeightedCompOp W = boundary_example();
    const EntireFunction z_fn{PolyTimesExpQuad({{0.5, 0.0}, {1, 0}}, ExpQuadratic{})};
    const SequenceReport rep = scaled_iterate_norms(W, z_fn, 3);
    REQUIRE(rep.log_values.size() >= 3);
    for (const auto& [n, logv] : rep.log_values) {
        // (W^n f)(z) = exp(c2n z^2) (A + B z) with A, B from the composed symbol
        const IterateCoeffs c = iterate_coeffs(W, n);
        const AffineSymbol pn = phi_n(W.phi, n);
        const Complex A = Complex{0.5, 0.0} + pn.a;
        const Complex B = pn.lambda;
        const double want2 = oracles::poly1_expquad_norm2_sq(
            A, B, ExpQuadratic{c.c0n, c.c1n, c.c2n}, 1.0);
        CHECK(rel(std::exp(2.0 * logv), want2) < 1e-7);
    }
}

TEST_CASE("angle-criterion ratios of the boundary example") {
    const SequenceReport rep = angle_criterion_ratio(boundary_example(), kOne, 40);
    REQUIRE(rep.log_values.size() == 40);
    const double lambda = 0.5;
    for (const auto& [n, logv] : rep.log_values) {
        const double want =
            std::pow(lambda, 0.5 * n) * std::pow(2.0 - std::pow(lambda, 2.0 * n), 0.25);
        CHECK(rel(std::exp(logv), want) < 1e-8);
    }
    CHECK(std::exp(rep.log_values[1].second) ==
          doctest::Approx(0.5899027654426418).epsilon(1e-10));
    CHECK(rep.trend == Trend::ConvergesToZero);
}

TEST_CASE("angle-criterion ratios of a compact operator level off") {
    // For compact operators the orbit norms track |psi(z0)|^n, so the ratio
    // approaches a positive constant rather than zero.
    const WeightedCompOp W(ExpQuadratic{kZero, kZero, {0.1, 0.0}},
                           AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    const SequenceReport rep = angle_criterion_ratio(W, kOne, 48);
    REQUIRE(rep.log_values.size() == 48);
    const double c2_lim = 0.1 / 0.75;
    const double limit = std::pow(1.0 - 4.0 * c2_lim * c2_lim, 0.25);
    CHECK(std::exp(rep.log_values.back().second) == doctest::Approx(limit).epsilon(1e-8));
    CHECK(rep.trend == Trend::Bounded);
}

TEST_CASE("angle-criterion ratios with a non-structured multiplier") {
    // compact operator whose multiplier has a polynomial factor: the orbit
    // norms go through the product-formula quadrature path
    const WeightedCompOp W(
        PolyTimesExpQuad({{2, 0}, {1, 0}}, ExpQuadratic{kZero, kZero, {0.05, 0.0}}),
        AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    REQUIRE(classify(W).verdict == Verdict::Compact);
    const SequenceReport rep = angle_criterion_ratio(W, kOne, 6);
    REQUIRE(rep.log_values.size() == 6);
    // cross-check n = 1 against the moment oracle: W 1 = (2 + z) e^{0.05 z^2},
    // r_1 = |psi(0)| / ||W 1|| with z0 = 0 and psi(0) = 2
    const double want2 = oracles::poly1_expquad_norm2_sq(
        {2, 0}, {1, 0}, ExpQuadratic{kZero, kZero, {0.05, 0.0}}, 1.0);
    const double got = rep.log_values[0].second;
    CHECK(std::abs(got - (std::log(2.0) - 0.5 * std::log(want2))) < 1e-7);
}

TEST_CASE("isometry report for a rotation") {
    const WeightedCompOp W(ExpQuadratic{}, AffineSymbol{kZero, {0, 1}}, kP2);
    const IsometryReport rep = isometry_report(W, standard_test_functions(1.0));
    CHECK(rep.kappa == doctest::Approx(1.0));
    CHECK(rep.max_deviation < 1e-8);
    CHECK(rep.max_paranormal_residual < 1e-8);
}

TEST_CASE("isometry report for a weighted translation") {
    const WeightedCompOp W(ExpQuadratic{kZero, {-1, 0}, kZero}, AffineSymbol{{1, 0}, {1, 0}},
                           kP2);
    const IsometryReport rep = isometry_report(W, standard_test_functions(1.0));
    CHECK(rep.kappa == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(rep.max_deviation < 1e-6);
    CHECK(rep.max_paranormal_residual < 1e-8);

    const WeightedCompOp not_isometry(ExpQuadratic{}, AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    CHECK_THROWS_AS(isometry_report(not_isometry, standard_test_functions(1.0)),
                    HypothesisViolated);
}

TEST_CASE("supercyclicity evidence selects the matching case") {
    DynamicsConfig cfg;
    cfg.N = 48;

    const SupercyclicityVerdict angle = supercyclicity_report(boundary_example(), cfg);
    CHECK(angle.case_tag == SupercyclicityCase::RealLambdaAngleCriterion);
    REQUIRE(!angle.sequences.empty());
    CHECK(angle.sequences[0].trend == Trend::ConvergesToZero);

    const WeightedCompOp nonreal(ExpQuadratic{kZero, kZero, {0.375, 0.0}},
                                 AffineSymbol{kZero, {0, 0.5}}, kP2);
    const SupercyclicityVerdict sq = supercyclicity_report(nonreal, cfg);
    CHECK(sq.case_tag == SupercyclicityCase::NonRealLambdaSquareCompact);
    REQUIRE(sq.square_classification.has_value());
    CHECK(sq.square_classification->verdict == Verdict::Compact);

    const WeightedCompOp isom(ExpQuadratic{kZero, {-1, 0}, kZero}, AffineSymbol{{1, 0}, {1, 0}},
                              kP2);
    const SupercyclicityVerdict iso = supercyclicity_report(isom, cfg);
    CHECK(iso.case_tag == SupercyclicityCase::IsometryMultiple);
    REQUIRE(iso.isometry.has_value());
    CHECK(iso.isometry->max_deviation < 1e-6);

    const WeightedCompOp compact(ExpQuadratic{kZero, kZero, {0.1, 0.0}},
                                 AffineSymbol{{0.4, 0.2}, {0.5, 0.0}}, kP2);
    const SupercyclicityVerdict cp = supercyclicity_report(compact, cfg);
    CHECK(cp.case_tag == SupercyclicityCase::CompactAdjointEigenvalue);
    REQUIRE(cp.adjoint.has_value());
    CHECK(cp.adjoint->fixed_point_residual < 1e-14);
    CHECK(cp.adjoint->action_residual < 1e-12);

    const SupercyclicityVerdict lim =
        supercyclicity_report(boundary_example(FockContext::sup(1.0, true)), cfg);
    CHECK(lim.case_tag == SupercyclicityCase::FinftyZeroLimitOperator);
    REQUIRE(lim.limit.has_value());
    CHECK(lim.limit->norm_F == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lim.limit->nonvanishing_ray);
    CHECK(std::exp(lim.limit->residuals.log_values.back().second) <= 1e-6);

    const WeightedCompOp unbounded(ExpQuadratic{kZero, kZero, {0.6, 0.0}},
                                   AffineSymbol{kZero, {0.5, 0.0}}, kP2);
    CHECK_THROWS_AS(supercyclicity_report(unbounded, cfg), HypothesisViolated);

    CHECK_THROWS_AS(supercyclicity_report(boundary_example(FockContext::sup(1.0)), cfg),
                    HypothesisViolated);
}

TEST_CASE("scaled iterates converge locally uniformly for the standard inputs") {
    const WeightedCompOp W = boundary_example(FockContext::sup(1.0, true));
    const LimitData lim = limit_function(W);
    for (const auto& [name, f] : standard_test_functions(1.0)) {
        if (std::abs(eval(f, lim.z0)) == 0.0) continue;
        std::vector<double> residuals;
        for (long n = 10; n <= 60; n += 5) {
            const IterateCoeffs c = iterate_coeffs(W, n);
            double worst = 0.0;
            for (int i = 0; i < 17; ++i) {
                for (int j = 0; j < 17; ++j) {
                    const Complex z{-2.0 + 4.0 * i / 16.0, -2.0 + 4.0 * j / 16.0};
                    worst = std::max(worst, std::abs(scaled_iterate_eval(W, c, f, z) -
                                                     limit_operator_apply(lim, f, lim.z0, z)));
                }
            }
            residuals.push_back(worst);
        }
        for (std::size_t k = 1; k < residuals.size(); ++k)
            CHECK(residuals[k] <= residuals[k - 1] + 1e-12);
        CHECK(residuals.back() <= 1e-6);
    }
}
