#pragma once

#include "fockoplab/iterates.hpp"

namespace fockoplab {

enum class Trend { DivergesToInfinity, ConvergesToZero, Bounded, Inconclusive };

/// One named sequence in log scale with its detected trend.
struct SequenceReport {
    std::string name;
    std::vector<std::pair<long, double>> log_values;  // (n, ln value)
    Trend trend = Trend::Inconclusive;
    std::optional<double> rate;  // fitted per-step geometric ratio
    std::string note;            // nonempty when the sequence was truncated
};

/// Last-quartile log-slope with threshold 1e-3 per step.
Trend detect_trend(const std::vector<double>& log_values);

/// |psi(z0)|^{-n} ||W^n f|| for n = 1..N. Requires a bounded non-compact
/// operator with real lambda on a p < infinity space, and f(z0) != 0.
SequenceReport scaled_iterate_norms(const WeightedCompOp& W, const EntireFunction& f, int N);

/// r_n = |psi(z0)|^n e^{alpha |z0|^2 / 2} / ||W^n f||, the ratio of adjoint
/// functional norms to orbit norms. Requires p < infinity, |lambda| < 1 and
/// f(z0) != 0.
SequenceReport angle_criterion_ratio(const WeightedCompOp& W, const EntireFunction& f, int N);

struct IsometryEntry {
    std::string fname;
    double norm_f = 0.0;
    double norm_wf = 0.0;
    double ratio = 0.0;
    double deviation = 0.0;                // |ratio - kappa| / kappa
    double paranormal_residual_rel = 0.0;  // | ||Wf||^2 - ||W^2 f|| ||f|| | / ||Wf||^2
};

struct IsometryReport {
    double kappa = 0.0;  // |psi(0)| e^{(alpha/2)|a|^2}
    std::vector<IsometryEntry> entries;
    double max_deviation = 0.0;
    double max_paranormal_residual = 0.0;
};

/// Measured isometry constant and the paranormal identity residuals.
/// Requires an IsometryMultiple operator.
IsometryReport isometry_report(const WeightedCompOp& W,
                               const std::vector<std::pair<std::string, EntireFunction>>& fs);

enum class SupercyclicityCase {
    IsometryMultiple,
    CompactAdjointEigenvalue,
    RealLambdaAngleCriterion,
    FinftyZeroLimitOperator,
    NonRealLambdaSquareCompact,
};

struct DynamicsConfig {
    int N = 64;
    double grid_radius = 2.0;
    int grid_n = 33;
    double norm_tol = 1e-10;
};

struct AdjointEigenEvidence {
    Complex eigenvalue;            // psi(z0)
    Complex fixed_point;           // z0
    double fixed_point_residual;   // |phi(z0) - z0|
    double action_residual;        // max over test f of the eigen-relation defect
};

struct LimitEvidence {
    double norm_F = 0.0;           // sup-norm of the limit function
    bool nonvanishing_ray = false; // some ray of F does not decay
    SequenceReport residuals;      // sup-grid distance of scaled iterates to the limit
};

/// The verdict is structurally NotSupercyclic for every bounded operator in
/// scope; the report selects the matching case and attaches its evidence.
struct SupercyclicityVerdict {
    SupercyclicityCase case_tag;
    Classification classification;
    std::vector<SequenceReport> sequences;
    std::optional<IsometryReport> isometry;
    std::optional<AdjointEigenEvidence> adjoint;
    std::optional<Classification> square_classification;
    std::optional<LimitEvidence> limit;
};

SupercyclicityVerdict supercyclicity_report(const WeightedCompOp& W, const DynamicsConfig& cfg);

/// {1, z, k_{0.3}, exp((alpha/5) z^2)}: the functions the identity checks run on.
std::vector<std::pair<std::string, EntireFunction>> standard_test_functions(double alpha);

std::string to_string(Trend t);
std::string to_string(SupercyclicityCase c);

}  // namespace fockoplab
