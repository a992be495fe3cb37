#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fockoplab/json_io.hpp"
#include "fockoplab/verify.hpp"
#include "fockoplab/version.hpp"

namespace py = pybind11;
using namespace fockoplab;

namespace {

py::object py_from_json(const io::json& j) {
    switch (j.type()) {
        case io::json::value_t::null: return py::none();
        case io::json::value_t::boolean: return py::bool_(j.get<bool>());
        case io::json::value_t::number_integer: return py::int_(j.get<long long>());
        case io::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case io::json::value_t::number_float: return py::float_(j.get<double>());
        case io::json::value_t::string: return py::str(j.get<std::string>());
        case io::json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(py_from_json(v));
            return out;
        }
        case io::json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = py_from_json(it.value());
            return out;
        }
        default: return py::none();
    }
}

FockContext make_context(const py::object& p, double alpha, const std::string& flavor) {
    io::json j;
    if (py::isinstance<py::str>(p))
        j["p"] = p.cast<std::string>();
    else
        j["p"] = p.cast<double>();
    j["alpha"] = alpha;
    if (!flavor.empty()) j["flavor"] = flavor;
    return io::context_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted composition operators on Fock spaces: classification, norms, "
              "iterates and dynamics evidence.";
    m.attr("__version__") = kVersion;

    py::register_exception<FockError>(m, "FockError");

    py::class_<ExpQuadratic>(m, "ExpQuadratic")
        .def(py::init<Complex, Complex, Complex>(), py::arg("a0") = Complex{},
             py::arg("a1") = Complex{}, py::arg("a2") = Complex{})
        .def_readonly("a0", &ExpQuadratic::a0)
        .def_readonly("a1", &ExpQuadratic::a1)
        .def_readonly("a2", &ExpQuadratic::a2)
        .def("__call__", &ExpQuadratic::operator());

    py::class_<PolyTimesExpQuad>(m, "PolyTimesExpQuad")
        .def(py::init<std::vector<Complex>, ExpQuadratic>(), py::arg("poly"), py::arg("core"))
        .def_readonly("poly", &PolyTimesExpQuad::poly)
        .def_readonly("core", &PolyTimesExpQuad::core)
        .def("__call__", &PolyTimesExpQuad::operator());

    py::class_<TaylorTail>(m, "TaylorTail")
        .def(py::init<double, double>(), py::arg("scale"), py::arg("geometric"))
        .def_readonly("scale", &TaylorTail::scale)
        .def_readonly("geometric", &TaylorTail::geometric);

    py::class_<TaylorSeries>(m, "TaylorSeries")
        .def(py::init<std::vector<Complex>, TaylorTail>(), py::arg("coeffs"), py::arg("tail"))
        .def_property_readonly("coeffs", &TaylorSeries::coeffs)
        .def_property_readonly("certified_radius", &TaylorSeries::certified_radius)
        .def("truncation_bound", &TaylorSeries::truncation_bound)
        .def("__call__", &TaylorSeries::operator());

    py::class_<FockContext>(m, "FockContext")
        .def(py::init(&make_context), py::arg("p"), py::arg("alpha"), py::arg("flavor") = "")
        .def_readonly("p", &FockContext::p)
        .def_readonly("alpha", &FockContext::alpha)
        .def("infinite_p", &FockContext::infinite_p);

    py::class_<AffineSymbol>(m, "AffineSymbol")
        .def(py::init<Complex, Complex>(), py::arg("a"), py::arg("lambda_"))
        .def_readonly("a", &AffineSymbol::a)
        .def_readonly("lambda_", &AffineSymbol::lambda)
        .def("fixed_point", &AffineSymbol::fixed_point)
        .def("beta", &AffineSymbol::beta)
        .def("__call__", &AffineSymbol::operator());

    py::class_<WeightedCompOp>(m, "WeightedCompOp")
        .def(py::init<EntireFunction, AffineSymbol, FockContext>(), py::arg("psi"),
             py::arg("phi"), py::arg("ctx"))
        .def_readonly("psi", &WeightedCompOp::psi)
        .def_readonly("phi", &WeightedCompOp::phi)
        .def_readonly("ctx", &WeightedCompOp::ctx);

    py::class_<IterateCoeffs>(m, "IterateCoeffs")
        .def_readonly("n", &IterateCoeffs::n)
        .def_readonly("log_psi_z0_factor", &IterateCoeffs::log_psi_z0_factor)
        .def_readonly("c0n", &IterateCoeffs::c0n)
        .def_readonly("c1n", &IterateCoeffs::c1n)
        .def_readonly("c2n", &IterateCoeffs::c2n);

    m.def("eval", &eval, py::arg("f"), py::arg("z"));
    m.def("log_abs_eval", &log_abs_eval, py::arg("f"), py::arg("z"));
    m.def("max_modulus", &max_modulus, py::arg("f"), py::arg("r"), py::arg("n_theta"));
    m.def("expm1_quadratic_over_z", &expm1_quadratic_over_z, py::arg("c"),
          py::arg("quadratic_terms") = 320);
    m.def("order_type", [](const EntireFunction& f) { return py_from_json(io::to_json(order_type(f))); });

    m.def("kernel_norm", &kernel_norm, py::arg("z"), py::arg("ctx"));
    m.def("fock_norm",
          [](const EntireFunction& f, const FockContext& ctx, double tol) {
              return py_from_json(io::to_json(fock_norm(f, ctx, tol)));
          },
          py::arg("f"), py::arg("ctx"), py::arg("tol") = 1e-10);
    m.def("membership", [](const EntireFunction& f, const FockContext& ctx) {
        return to_string(membership(f, ctx));
    });
    m.def("decay_profile",
          [](const EntireFunction& f, double alpha, int n_rays, double r_max) {
              return py_from_json(io::to_json(decay_profile(f, alpha, n_rays, r_max)));
          },
          py::arg("f"), py::arg("alpha"), py::arg("n_rays") = 8, py::arg("r_max") = 10.0);

    m.def("apply", &apply, py::arg("W"), py::arg("f"), py::arg("z"));
    m.def("m_z", &m_z, py::arg("W"), py::arg("z"));
    m.def("classify",
          [](const WeightedCompOp& W) { return py_from_json(io::to_json(classify(W))); });
    m.def("adjoint_on_kernel", [](const WeightedCompOp& W, Complex z) {
        const auto img = adjoint_on_kernel(W, z);
        return py::make_tuple(img.scalar, img.point);
    });
    m.def("square", &square, py::arg("W"));
    m.def("mz_scan",
          [](const WeightedCompOp& W, double r_cap) {
              return py_from_json(io::to_json(mz_scan(W, r_cap)));
          },
          py::arg("W"), py::arg("r_cap") = 400.0);

    m.def("phi_n", &phi_n, py::arg("phi"), py::arg("n"));
    m.def("iterate_coeffs", &iterate_coeffs, py::arg("W"), py::arg("n"));
    m.def("iterate_apply_product", [](const WeightedCompOp& W, const EntireFunction& f, long n,
                                      Complex z) {
        const auto v = iterate_apply_product(W, f, n, z);
        return py::make_tuple(v.log_abs, v.arg);
    });
    m.def("iterate_apply_closed", [](const WeightedCompOp& W, const EntireFunction& f, long n,
                                     Complex z) {
        const auto v = iterate_apply_closed(W, f, n, z);
        return py::make_tuple(v.log_abs, v.arg);
    });
    m.def("limit_function", [](const WeightedCompOp& W) {
        const auto lim = limit_function(W);
        py::dict d;
        d["c0"] = lim.c0;
        d["c1"] = lim.c1;
        d["c"] = lim.c;
        d["z0"] = lim.z0;
        d["c2_limit"] = lim.c2_limit;
        d["F"] = lim.F;
        return d;
    });

    m.def("scaled_iterate_norms",
          [](const WeightedCompOp& W, const EntireFunction& f, int N) {
              return py_from_json(io::to_json(scaled_iterate_norms(W, f, N)));
          },
          py::arg("W"), py::arg("f"), py::arg("N") = 64);
    m.def("angle_criterion_ratio",
          [](const WeightedCompOp& W, const EntireFunction& f, int N) {
              return py_from_json(io::to_json(angle_criterion_ratio(W, f, N)));
          },
          py::arg("W"), py::arg("f"), py::arg("N") = 64);
    m.def("isometry_report", [](const WeightedCompOp& W) {
        return py_from_json(io::to_json(isometry_report(W, standard_test_functions(W.ctx.alpha))));
    });
    m.def("supercyclicity_report",
          [](const WeightedCompOp& W, int N) {
              DynamicsConfig cfg;
              cfg.N = N;
              return py_from_json(io::to_json(supercyclicity_report(W, cfg)));
          },
          py::arg("W"), py::arg("N") = 64);

    m.def("load_operator", [](const std::string& text) {
        return io::operator_from_json(io::json::parse(text));
    });
    m.def("operator_to_json", [](const WeightedCompOp& W) { return io::to_json(W).dump(); });

    m.def("run_acceptance", [](std::uint64_t seed) {
        py::list out;
        for (const auto& r : verify::run_acceptance(seed)) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["seconds"] = r.seconds;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    }, py::arg("seed") = verify::kDefaultSeed);
}
