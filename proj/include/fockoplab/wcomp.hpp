#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fockoplab/fock.hpp"

namespace fockoplab {

/// phi(z) = a + lambda z.
struct AffineSymbol {
    Complex a{0.0, 0.0};
    Complex lambda{0.0, 0.0};

    Complex operator()(Complex z) const { return a + lambda * z; }
    bool has_fixed_point() const { return lambda != Complex{1.0, 0.0}; }
    Complex fixed_point() const;  // a / (1 - lambda); throws NoFixedPoint for lambda = 1
    double beta() const { return 1.0 - std::norm(lambda); }
    /// this after inner: z -> this(inner(z)).
    AffineSymbol after(const AffineSymbol& inner) const;
};

/// W f = psi * (f o phi) on the given Fock space.
struct WeightedCompOp {
    EntireFunction psi;
    AffineSymbol phi;
    FockContext ctx;

    WeightedCompOp(EntireFunction psi_, AffineSymbol phi_, FockContext ctx_);
};

Complex apply(const WeightedCompOp& W, const EntireFunction& f, Complex z);

/// M_z = |psi(z)|^2 exp(alpha (|phi(z)|^2 - |z|^2)); equals the squared
/// kernel ratio ||W* k_z|| / ||k_z||.
double m_z(const WeightedCompOp& W, Complex z);
double log_m_z(const WeightedCompOp& W, Complex z);

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Mat2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
    std::pair<double, double> eigenvalues() const;  // descending
};

/// log M_z = log_c + 2 Re(t z) + (x y) A (x y)^T + 2 log|Q(z)|.
struct LogMQuadraticForm {
    Mat2 A;
    Complex t;
    double log_c = 0.0;
    std::vector<Complex> poly;  // empty for a pure exp-quadratic multiplier
};

/// Requires |lambda| < 1 and a structured multiplier.
LogMQuadraticForm logm_quadratic_form(const WeightedCompOp& W);

enum class Verdict {
    UnboundedSymbol,
    Unbounded,
    BoundedNotCompact,
    Compact,
    FiniteRankCompact,
    IsometryMultiple,
};

enum class CertGrade { Exact, Numeric };

struct QuadraticFormCert {
    double mu = 0.0;  // 2|a2| - alpha beta
    Complex t{0.0, 0.0};
    double theta2 = 0.0;  // in [0, pi)
    std::string case_tag;
};

struct OrderTypeCert {
    double rho = 0.0;
    std::optional<double> sigma;
    double threshold = 0.0;
};

struct NumericCert {
    double sup_log = 0.0;  // log of the estimated sup of M_z (+inf when divergent)
    bool decays = false;
};

struct UnitModulusCert {
    bool psi_matches_kernel_form = false;
};

using Certificate = std::variant<QuadraticFormCert, OrderTypeCert, NumericCert, UnitModulusCert>;

struct Classification {
    Verdict verdict;
    Certificate certificate;
    CertGrade exactness = CertGrade::Exact;
};

/// Boundedness/compactness trichotomy. Exp-quadratic multipliers take the
/// exact quadratic-form route; structured multipliers with a polynomial
/// factor use the neutral-direction analysis; truncated series fall back to
/// growth estimation and, in the liminal band, to a numeric scan of M_z.
Classification classify(const WeightedCompOp& W);

/// W* k_z = psi(z) k_{phi(z)}. Requires a space with a usable duality
/// pairing (p < infinity or the vanishing sup-norm subspace).
struct AdjointKernelImage {
    Complex scalar;
    Complex point;
};
AdjointKernelImage adjoint_on_kernel(const WeightedCompOp& W, Complex z);

/// W^2 as a weighted composition operator (exp-quadratic multipliers only).
WeightedCompOp square(const WeightedCompOp& W);

/// Grid scan of M_z: expanding rings with divergence / decay detection.
struct MzScanResult {
    double sup_log = 0.0;
    bool diverges = false;
    bool decays = false;
    double radius = 0.0;
    std::vector<std::pair<double, double>> ring_max_log;  // (r, max over the ring)
};
MzScanResult mz_scan(const WeightedCompOp& W, double r_cap = 400.0);

std::string to_string(Verdict v);
std::string to_string(CertGrade g);

}  // namespace fockoplab
