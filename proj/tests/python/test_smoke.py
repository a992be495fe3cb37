"""End-to-end smoke tests for the python module."""

import json
import math

import pytest

import fockoplab as fo


OP_JSON = json.dumps(
    {
        "psi": {"kind": "exp_quadratic", "a0": [0, 0], "a1": [0, 0], "a2": [0.375, 0]},
        "a": [0, 0],
        "lambda": [0.5, 0],
        "p": 2,
        "alpha": 1.0,
        "flavor": "fp",
    }
)


def boundary_op():
    return fo.load_operator(OP_JSON)


def test_eval_and_kernel_norm():
    f = fo.ExpQuadratic(a1=1.0)
    assert abs(fo.eval(f, 1.0) - math.e) < 1e-14
    ctx = fo.FockContext(2, 1.0)
    assert abs(fo.kernel_norm(1.0, ctx) - math.exp(0.5)) < 1e-14


def test_norm_of_constant_is_one():
    ctx = fo.FockContext(1, 3.0)
    result = fo.fock_norm(fo.ExpQuadratic(), ctx)
    assert abs(result["value"] - 1.0) < 1e-10
    assert result["method"] == "exact_gaussian"


def test_classify_boundary_example():
    cls = fo.classify(boundary_op())
    assert cls["verdict"] == "BoundedNotCompact"
    assert cls["certificate"]["type"] == "quadratic_form"
    assert abs(cls["certificate"]["mu"]) < 1e-14


def test_classify_series_multiplier():
    psi = fo.expm1_quadratic_over_z(0.375)
    ctx = fo.FockContext(2, 1.0)
    W = fo.WeightedCompOp(psi, fo.AffineSymbol(0.0, 0.5), ctx)
    assert fo.classify(W)["verdict"] == "Compact"


def test_iterates_match_product_formula():
    W = boundary_op()
    f = fo.ExpQuadratic()
    for n in (2, 17, 64):
        la, aa = fo.iterate_apply_closed(W, f, n, 1.0 + 0.5j)
        lb, ab = fo.iterate_apply_product(W, f, n, 1.0 + 0.5j)
        assert abs(la - lb) < 1e-10 * (1 + abs(lb))
        assert abs(math.remainder(aa - ab, 2 * math.pi)) < 1e-10


def test_supercyclicity_report_case():
    rep = fo.supercyclicity_report(boundary_op(), 32)
    assert rep["verdict"] == "NotSupercyclic"
    assert rep["case"] == "RealLambdaAngleCriterion"
    assert rep["sequences"][0]["trend"] == "ConvergesToZero"


def test_membership_and_decay():
    liminal = fo.ExpQuadratic(a2=0.5)
    assert fo.membership(liminal, fo.FockContext("inf", 1.0)) == "BoundaryIn"
    assert fo.membership(liminal, fo.FockContext("inf", 1.0, "finfty0")) == "NotIn"
    profile = fo.decay_profile(liminal, 1.0, 4, 10.0)
    verdicts = [ray["verdict"] for ray in profile["rays"]]
    assert "BoundedNonVanishing" in verdicts


def test_hypothesis_violations_raise():
    unbounded = fo.WeightedCompOp(
        fo.ExpQuadratic(a2=0.6), fo.AffineSymbol(0.0, 0.5), fo.FockContext(2, 1.0)
    )
    assert fo.classify(unbounded)["verdict"] == "Unbounded"
    with pytest.raises(fo.FockError):
        fo.scaled_iterate_norms(unbounded, fo.ExpQuadratic(), 8)
