#include "fockoplab/json_io.hpp"

#include <cmath>
#include <limits>

namespace fockoplab::io {

namespace {

json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double real_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ConfigInvalid("expected a number or \"inf\", got \"" + s + "\"");
    }
    if (!j.is_number()) throw ConfigInvalid("expected a number");
    return j.get<double>();
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigInvalid(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigInvalid("complex values must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const EntireFunction& f) {
    return std::visit(
        [](const auto& g) -> json {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ExpQuadratic>) {
                return {{"kind", "exp_quadratic"},
                        {"a0", to_json(g.a0)},
                        {"a1", to_json(g.a1)},
                        {"a2", to_json(g.a2)}};
            } else if constexpr (std::is_same_v<T, PolyTimesExpQuad>) {
                json poly = json::array();
                for (const Complex& c : g.poly) poly.push_back(to_json(c));
                return {{"kind", "poly_exp_quadratic"},
                        {"poly", poly},
                        {"core",
                         {{"a0", to_json(g.core.a0)},
                          {"a1", to_json(g.core.a1)},
                          {"a2", to_json(g.core.a2)}}}};
            } else {
                json coeffs = json::array();
                for (const Complex& c : g.coeffs()) coeffs.push_back(to_json(c));
                return {{"kind", "taylor"},
                        {"coeffs", coeffs},
                        {"tail", {{"scale", g.tail().scale}, {"geometric", g.tail().geometric}}}};
            }
        },
        f);
}

namespace {

ExpQuadratic expquad_from_json(const json& j) {
    return {complex_from_json(require(j, "a0")), complex_from_json(require(j, "a1")),
            complex_from_json(require(j, "a2"))};
}

}  // namespace

EntireFunction function_from_json(const json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    try {
        if (kind == "exp_quadratic") return expquad_from_json(j);
        if (kind == "poly_exp_quadratic") {
            std::vector<Complex> poly;
            for (const json& c : require(j, "poly")) poly.push_back(complex_from_json(c));
            return PolyTimesExpQuad(std::move(poly), expquad_from_json(require(j, "core")));
        }
        if (kind == "taylor") {
            std::vector<Complex> coeffs;
            for (const json& c : require(j, "coeffs")) coeffs.push_back(complex_from_json(c));
            const json& tail = require(j, "tail");
            return TaylorSeries(std::move(coeffs),
                                TaylorTail{require(tail, "scale").get<double>(),
                                           require(tail, "geometric").get<double>()});
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigInvalid(e.what());
    }
    throw ConfigInvalid("unknown function kind \"" + kind + "\"");
}

json to_json(const FockContext& ctx) {
    json j;
    j["p"] = ctx.infinite_p() ? json("inf") : json(ctx.p);
    j["alpha"] = ctx.alpha;
    j["flavor"] = to_string(ctx.flavor);
    return j;
}

FockContext context_from_json(const json& j) {
    const double p = real_from_json(require(j, "p"));
    const double alpha = require(j, "alpha").get<double>();
    SpaceFlavor flavor = std::isinf(p) ? SpaceFlavor::FinftyFull : SpaceFlavor::Fp;
    if (j.contains("flavor")) {
        const std::string s = j.at("flavor").get<std::string>();
        if (s == "fp")
            flavor = SpaceFlavor::Fp;
        else if (s == "finfty")
            flavor = SpaceFlavor::FinftyFull;
        else if (s == "finfty0")
            flavor = SpaceFlavor::FinftyZero;
        else
            throw ConfigInvalid("unknown flavor \"" + s + "\"");
    }
    return FockContext(p, alpha, flavor);
}

json to_json(const WeightedCompOp& W) {
    json j;
    j["psi"] = to_json(W.psi);
    j["a"] = to_json(W.phi.a);
    j["lambda"] = to_json(W.phi.lambda);
    j["p"] = W.ctx.infinite_p() ? json("inf") : json(W.ctx.p);
    j["alpha"] = W.ctx.alpha;
    j["flavor"] = to_string(W.ctx.flavor);
    return j;
}

WeightedCompOp operator_from_json(const json& j) {
    EntireFunction psi = function_from_json(require(j, "psi"));
    AffineSymbol phi{complex_from_json(require(j, "a")), complex_from_json(require(j, "lambda"))};
    try {
        return WeightedCompOp(std::move(psi), phi, context_from_json(j));
    } catch (const std::invalid_argument& e) {
        throw ConfigInvalid(e.what());
    }
}

json to_json(const NormResult& r) {
    return {{"value", real_to_json(r.value)},
            {"method", to_string(r.method)},
            {"error_estimate", r.error_estimate}};
}

json to_json(const GrowthProfile& p) {
    json j;
    j["order"] = real_to_json(p.order);
    j["type"] = p.type ? json(*p.type) : json(nullptr);
    j["exactness"] = p.exactness == ProfileExactness::Exact ? "Exact" : "Estimated";
    return j;
}

json to_json(const Classification& c) {
    json cert;
    if (const auto* q = std::get_if<QuadraticFormCert>(&c.certificate)) {
        cert = {{"type", "quadratic_form"},
                {"mu", q->mu},
                {"t", to_json(q->t)},
                {"theta2", q->theta2},
                {"case", q->case_tag}};
    } else if (const auto* o = std::get_if<OrderTypeCert>(&c.certificate)) {
        cert = {{"type", "order_type"},
                {"rho", real_to_json(o->rho)},
                {"sigma", o->sigma ? json(*o->sigma) : json(nullptr)},
                {"threshold", o->threshold}};
    } else if (const auto* n = std::get_if<NumericCert>(&c.certificate)) {
        cert = {{"type", "numeric"}, {"sup_log", real_to_json(n->sup_log)}, {"decays", n->decays}};
    } else {
        const auto& u = std::get<UnitModulusCert>(c.certificate);
        cert = {{"type", "unit_modulus"}, {"psi_matches_kernel_form", u.psi_matches_kernel_form}};
    }
    return {{"verdict", to_string(c.verdict)},
            {"exactness", to_string(c.exactness)},
            {"certificate", cert}};
}

json to_json(const IterateCoeffs& c) {
    return {{"n", c.n},
            {"log_psi_z0_factor", to_json(c.log_psi_z0_factor)},
            {"c0n", to_json(c.c0n)},
            {"c1n", to_json(c.c1n)},
            {"c2n", to_json(c.c2n)}};
}

json to_json(const SequenceReport& r) {
    json values = json::array();
    for (const auto& [n, v] : r.log_values) values.push_back(json::array({n, real_to_json(v)}));
    json j{{"name", r.name},
           {"trend", to_string(r.trend)},
           {"rate", r.rate ? json(*r.rate) : json(nullptr)},
           {"log_values", values}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const IsometryReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"f", e.fname},
                           {"norm_f", e.norm_f},
                           {"norm_wf", e.norm_wf},
                           {"ratio", e.ratio},
                           {"deviation", e.deviation},
                           {"paranormal_residual_rel", e.paranormal_residual_rel}});
    }
    return {{"kappa", r.kappa},
            {"max_deviation", r.max_deviation},
            {"max_paranormal_residual", r.max_paranormal_residual},
            {"entries", entries}};
}

json to_json(const AdjointEigenEvidence& e) {
    return {{"eigenvalue", to_json(e.eigenvalue)},
            {"fixed_point", to_json(e.fixed_point)},
            {"fixed_point_residual", e.fixed_point_residual},
            {"action_residual", e.action_residual}};
}

json to_json(const LimitEvidence& e) {
    return {{"norm_F", real_to_json(e.norm_F)},
            {"nonvanishing_ray", e.nonvanishing_ray},
            {"residuals", to_json(e.residuals)}};
}

json to_json(const SupercyclicityVerdict& v) {
    json j;
    j["verdict"] = "NotSupercyclic";
    j["case"] = to_string(v.case_tag);
    j["classification"] = to_json(v.classification);
    json seqs = json::array();
    for (const auto& s : v.sequences) seqs.push_back(to_json(s));
    j["sequences"] = seqs;
    if (v.isometry) j["isometry"] = to_json(*v.isometry);
    if (v.adjoint) j["adjoint"] = to_json(*v.adjoint);
    if (v.square_classification) j["square_classification"] = to_json(*v.square_classification);
    if (v.limit) j["limit"] = to_json(*v.limit);
    return j;
}

json to_json(const DecayProfile& p) {
    json rays = json::array();
    for (const auto& r : p.rays) {
        rays.push_back({{"theta", r.theta},
                        {"verdict", to_string(r.verdict)},
                        {"log_slope", r.log_slope},
                        {"last_log_value", real_to_json(r.last_log_value)}});
    }
    return {{"rays", rays}};
}

json to_json(const MzScanResult& s) {
    json rings = json::array();
    for (const auto& [r, v] : s.ring_max_log) rings.push_back(json::array({r, real_to_json(v)}));
    return {{"sup_log", real_to_json(s.sup_log)},
            {"diverges", s.diverges},
            {"decays", s.decays},
            {"radius", s.radius},
            {"ring_max_log", rings}};
}

}  // namespace fockoplab::io
