import json
import math
from pathlib import Path

import pytest

from conftest import rel
from sspectrum import (CommutingOperator, KernelKind, Quaternion,
                       QuatMatrix, enclosing_circle, integrate, kernel, qinv,
                       qs_poly, s_spectrum, verify_all, verify_integral,
                       verify_pointwise)
from sspectrum.errors import GeometryError, InputError
from sspectrum.identities import (INTEGRAL_IDENTITIES, POINTWISE_IDENTITIES,
                                  random_commuting_polynomial,
                                  p2_power_shift_alt_terms,
                                  random_commuting_operator,
                                  random_resolvent_point, random_stem,
                                  registry_names, reports_to_csv,
                                  reports_to_json, split_spectrum_operator)

MANIFEST = json.loads(
    (Path(__file__).parent / "data" / "identity_manifest.json").read_text())


def test_registry_matches_manifest():
    assert sorted(POINTWISE_IDENTITIES) == sorted(MANIFEST["pointwise"])
    assert sorted(INTEGRAL_IDENTITIES) == sorted(MANIFEST["integral"])
    assert registry_names() == MANIFEST["pointwise"] + MANIFEST["integral"]


def test_pseudo_split_at_zero_exact():
    T = CommutingOperator.zero(1)
    report = verify_pointwise("pseudo_split_left", T, Quaternion(2, 1, 0, 0))
    assert report.passed
    assert report.residual < 1e-15


def test_power_shift_at_zero():
    T = CommutingOperator.zero(1)
    s = Quaternion(1.5, 0.5, -0.25, 0.0)
    report = verify_pointwise("p2_kernel_power_shift_left", T, s, m=3)
    assert report.residual < 1e-12 * report.scale


def test_pointwise_seeded_all_pass(rng):
    for n in (1, 2, 3):
        T = random_commuting_operator(rng, n)
        s = random_resolvent_point(rng, T)
        p = random_resolvent_point(rng, T, avoid=s)
        for name in POINTWISE_IDENTITIES:
            opts = {}
            if name == "s_resolvent_eq_intertwined":
                opts["B"] = random_commuting_polynomial(rng, T)
            report = verify_pointwise(name, T, s, p, tol=1e-10, **opts)
            assert report.passed, (name, n, report.residual, report.scale)


def test_intertwined_reduces_to_plain(rng):
    T = random_commuting_operator(rng, 2)
    s = random_resolvent_point(rng, T)
    p = random_resolvent_point(rng, T, avoid=s)
    report = verify_pointwise("s_resolvent_eq_intertwined", T, s, p,
                              B=QuatMatrix.identity(2))
    plain = verify_pointwise("s_resolvent_eq", T, s, p)
    assert report.passed and plain.passed


def test_unknown_name():
    T = CommutingOperator.zero(1)
    with pytest.raises(InputError):
        verify_pointwise("no_such_identity", T, Quaternion(1))


def test_verify_all_deterministic():
    a = verify_all(seed=0, nodes=64)
    b = verify_all(seed=0, nodes=64)
    assert reports_to_json(a) == reports_to_json(b)
    assert all(r.passed for r in a)


def test_verify_all_zero_tol_fails_everything():
    reports = verify_all(seed=0, tol=0.0, nodes=64)
    assert all(r.residual > 0.0 for r in reports)
    assert not any(r.passed for r in reports)


def test_report_serialization():
    reports = verify_all(seed=1, nodes=64)
    doc = reports_to_json(reports)
    assert {"name", "inputs", "residual", "scale", "tol", "pass"} <= set(doc[0])
    csv = reports_to_csv(reports)
    lines = csv.strip().splitlines()
    assert lines[0] == "name,residual,scale,pass"
    assert len(lines) == len(reports) + 1
    assert lines[1].split(",")[0] == reports[0].name


def test_closing_rewrite_disagrees(rng):
    # the alternative index bounds for the degree-m sum do not reproduce it
    T = random_commuting_operator(rng, 2)
    s = random_resolvent_point(rng, T)
    for m in (2, 3, 4):
        B_main, B_alt = p2_power_shift_alt_terms(T, s, m)
        deviation = (B_main - B_alt).norm() / max(B_main.norm(), 1.0)
        assert deviation > 1e-3, m


def test_intertwining_cauchy_formula(rng):
    # (1/2pi) oint f(s) ds_J (conj(s) B - B p) (p^2 - 2 s0 p + |s|^2)^{-1}
    # equals B f(p) for intrinsic f, p inside the contour
    T = split_spectrum_operator()
    spheres = s_spectrum(T)
    c = enclosing_circle(spheres, margin=1.0, N=512)
    f = random_stem(rng, 3, intrinsic=True)
    p = Quaternion(0.5, 0.4, 0.3, 0.0)
    B = kernel(KernelKind.P2_LEFT, T, random_resolvent_point(rng, T))

    def K(s):
        return (B.lmul(s.conjugate()) - B.rmul(p)).rmul(qinv(qs_poly(s, p)))

    lhs = integrate(c, K, f.evaluate, "right", n=T.n) * (1.0 / (2.0 * math.pi))
    rhs = B.rmul(f(p))
    assert rel(lhs, rhs) < 1e-10


def test_product_rule_degenerates_for_constant_factor(rng):
    T = random_commuting_operator(rng, 2, zero_e3=True)
    c_in = enclosing_circle(s_spectrum(T), margin=0.5, N=256)
    c_out = enclosing_circle(s_spectrum(T), margin=1.0, N=256)
    one = random_stem(rng, 0, intrinsic=True)
    g = random_stem(rng, 3)
    report = verify_integral("p2_product_rule_left", T, one, g, c_in, c_out,
                             tol=1e-12)
    assert report.passed


def test_verify_integral_nesting_enforced(rng):
    T = random_commuting_operator(rng, 2, zero_e3=True)
    spheres = s_spectrum(T)
    inner = enclosing_circle(spheres, margin=1.0, N=64)
    outer = enclosing_circle(spheres, margin=0.5, N=64)
    f = random_stem(rng, 2, intrinsic=True)
    g = random_stem(rng, 2)
    with pytest.raises(GeometryError):
        verify_integral("q_product_rule", T, f, g, inner, outer)


def test_verify_integral_intrinsic_enforced(rng):
    T = random_commuting_operator(rng, 2, zero_e3=True)
    c = enclosing_circle(s_spectrum(T), margin=0.5, N=64)
    f = random_stem(rng, 2, intrinsic=False)
    from sspectrum.errors import PreconditionError

    with pytest.raises(PreconditionError):
        verify_integral("q_product_rule", T, f, random_stem(rng, 2), c)


def test_power_shift_example_values():
    # at T = 0 both sides collapse to 4 s^(1-m) scalar multiples
    T = CommutingOperator.zero(1)
    s = Quaternion(2.0, 1.0, 0.0, 0.0)
    lhs, rhs = POINTWISE_IDENTITIES["p2_kernel_power_shift_left"](T, s, m=3)[0]
    expect = QuatMatrix.from_scalar(qinv(s * s) * 4.0, 1).rmul(s ** 3)
    assert rel(lhs, expect) < 1e-14
    assert rel(rhs, expect) < 1e-14


def test_random_operator_generator_properties(rng):
    T = random_commuting_operator(rng, 3, zero_e3=True, symmetric_base=True)
    assert T.has_zero_e3()
    assert T.has_real_component_spectra()
    assert abs(T.norm() - 1.0) < 1e-12
