"""Elliptic surface fibers and point counts.

The brute-force oracle counts Weierstrass solutions by direct enumeration;
it agrees with count_fiber exactly on irreducible fibers (smooth, I1, II),
which pins down the character-sum machinery. Multi-component formulas are
validated globally through the trace identity against the CM coefficients,
an independently implemented pipeline.
"""

import json

import pytest

from picard20.arith import kronecker, primes_up_to
from picard20.ellsurf import (
    INFINITY,
    SectionData,
    SurfaceModel,
    classify_fibers,
    count_fiber,
    discriminant,
    good_prime,
    infinity_chart,
    model_from_json,
    model_to_json,
    place_label,
    rank20_effective,
    surface_count,
    trace_ap,
    twist_model,
)
from picard20.ellsurf import _kodaira_from_valuations
from picard20.errors import VerificationError
from picard20.heckecm import CMRule, ap_h1, twist_discriminant
from picard20.models import REGISTRY, get_model
from picard20.polys import pdeg, peval

_INF = 10**9


def kodaira(v4, v6, vd):
    return _kodaira_from_valuations(v4, v6, vd, "t=0")

FROZEN_COUNTS = {
    ("d19", 5): 117,
    ("d19", 7): 185,
    ("d27", 7): 177,
    ("d7-tate", 11): 336,
    ("d4", 5): 120,
    ("d3", 7): 177,
    ("d11", 5): 125,
}

# twelve II fibers over the roots of t^11 + t + 1 and t = oo
II_FRAME = SurfaceModel("ii-frame", (), (), (), (), (1, 1) + (0,) * 9 + (1,), d=-3)
# I0* at t = 0 and t = oo with residual cubic T^3 + 1728 g(0)
ISTAR_FRAME = SurfaceModel(
    "istar-frame", (), (), (), (), (0, 0, 0, 1, 1, 0, 0, 0, 0, 1), d=-3
)


def _brute_fiber_count(model: SurfaceModel, p: int, t0) -> int:
    # direct Weierstrass solution scan; +1 for the point at infinity
    chart = model if t0 != INFINITY else infinity_chart(model)
    s = 0 if t0 == INFINITY else t0
    a1, a2, a3 = (peval(c, s) % p for c in (chart.a1, chart.a2, chart.a3))
    a4, a6 = (peval(c, s) % p for c in (chart.a4, chart.a6))
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y) % p == rhs:
                count += 1
    return count


class TestKodairaTable:
    def test_multiplicative_types(self):
        assert kodaira(0, 0, 1) == "I1"
        assert kodaira(0, 0, 19) == "I19"

    def test_additive_types(self):
        assert kodaira(1, 1, 2) == "II"
        assert kodaira(_INF, 1, 2) == "II"
        assert kodaira(1, 2, 3) == "III"
        assert kodaira(1, _INF, 3) == "III"
        assert kodaira(2, 2, 4) == "IV"
        assert kodaira(_INF, 2, 4) == "IV"
        assert kodaira(2, 3, 6) == "I0*"
        assert kodaira(_INF, 3, 6) == "I0*"
        assert kodaira(2, _INF, 6) == "I0*"
        assert kodaira(2, 3, 7) == "I1*"
        assert kodaira(2, 3, 13) == "I7*"
        assert kodaira(3, 4, 8) == "IV*"
        assert kodaira(_INF, 4, 8) == "IV*"
        assert kodaira(3, 5, 9) == "III*"
        assert kodaira(3, _INF, 9) == "III*"
        assert kodaira(4, 5, 10) == "II*"
        assert kodaira(_INF, 5, 10) == "II*"

    def test_non_minimal(self):
        with pytest.raises(VerificationError) as err:
            kodaira(4, 6, 12)
        assert err.value.code == "NON_MINIMAL"
        with pytest.raises(VerificationError):
            kodaira(_INF, 6, 13)

    def test_unclassifiable_triple(self):
        with pytest.raises(VerificationError) as err:
            kodaira(1, 1, 5)
        assert err.value.code == "PRECONDITION"


def test_place_labels():
    assert place_label((0, 1)) == "t=0"
    assert place_label((1, 1)) == "t=-1"
    assert place_label((-1, 2)) == "t=1/2"
    assert place_label((1, 0, 1)) == "t^2+1=0"
    assert place_label(None) == "t=oo"


def test_registry_configurations_match_declarations():
    for name, model in REGISTRY.items():
        fibers = classify_fibers(model)
        got = tuple((F.place, F.kodaira_type) for F in fibers)
        assert got == model.expected_config, name


def test_registry_euler_numbers_sum_to_24():
    for model in REGISTRY.values():
        total = 0
        for F in classify_fibers(model):
            degree = pdeg(F.poly) if F.poly is not None else 1
            total += degree * F.euler_number
        assert total == 24, model.name


def test_frozen_surface_counts():
    for (name, p), expected in FROZEN_COUNTS.items():
        assert surface_count(get_model(name), p) == expected, (name, p)


def test_smooth_fibers_match_brute_force():
    for name in ("d19", "d27", "d4"):
        model = get_model(name)
        for p in (5, 7, 11):
            if not good_prime(model, p):
                continue
            delta = discriminant(model)
            for t0 in range(p):
                if peval(delta, t0) % p != 0:
                    assert count_fiber(model, p, t0) == _brute_fiber_count(
                        model, p, t0
                    ), (name, p, t0)


def test_singular_irreducible_fibers_match_brute_force():
    # I1 places of d19: roots of the quintic mod p; fiber stays irreducible
    model = get_model("d19")
    quintic = (-31, 14, 3, 18, 5, 4)
    for p in (5, 13, 29):
        if not good_prime(model, p):
            continue
        for t0 in range(p):
            if peval(quintic, t0) % p == 0:
                assert count_fiber(model, p, t0) == _brute_fiber_count(model, p, t0)


def test_type_ii_fibers_match_brute_force():
    # II always counts p + 1, equal to the raw cuspidal-cubic count
    for p in (5, 7, 13):
        assert good_prime(II_FRAME, p)
        counted = 0
        for t0 in list(range(p)) + [INFINITY]:
            n = count_fiber(II_FRAME, p, t0)
            assert n == _brute_fiber_count(II_FRAME, p, t0), (p, t0)
            counted += 1
        assert counted == p + 1


def test_istar_split_residual_cubic():
    # residual cubic T^3 + 1728 splits exactly at p = 1 mod 3
    for p in (7, 13):
        assert count_fiber(ISTAR_FRAME, p, 0) == 5 * p + 1
    for p in (11, 17):
        with pytest.raises(VerificationError) as err:
            count_fiber(ISTAR_FRAME, p, 0)
        assert err.value.code == "COMPONENTS_NOT_RATIONAL"


def test_in_fiber_needs_rational_components():
    # the I2 fiber of d27 splits at p = 1 mod 3 and not at p = 2 mod 3
    model = get_model("d27")
    assert count_fiber(model, 7, 0) == 14
    with pytest.raises(VerificationError) as err:
        count_fiber(model, 17, 0)
    assert err.value.code == "COMPONENTS_NOT_RATIONAL"


def test_gated_additive_fiber_at_inert_prime():
    model = get_model("d3")
    assert count_fiber(model, 7, 7 - 1) == 3 * 7 + 1  # IV at t = -1
    with pytest.raises(VerificationError) as err:
        count_fiber(model, 5, 5 - 1)
    assert err.value.code == "COMPONENTS_NOT_RATIONAL"


def test_star_fibers_count_unconditionally():
    model = get_model("d4")
    for p in (5, 7, 13):  # includes inert p = 7
        assert count_fiber(model, p, 0) == 8 * p + 1  # III*
        assert count_fiber(model, p, 1) == 5 * p + 1  # I0* splits for all p here


def test_trace_identity_against_cm_coefficients():
    # the two pipelines share no code: counts come from character sums,
    # coefficients from quadratic form representations
    for name, model in REGISTRY.items():
        rule = CMRule(_dk(model.d))
        for p in primes_up_to(150):
            if p <= 3 or not good_prime(model, p):
                continue
            if kronecker(model.d, p) != 1:
                continue
            assert trace_ap(model, p) == ap_h1(rule, p), (name, p)


def _dk(d):
    from picard20.qforms import fundamental_decomposition

    return fundamental_decomposition(d)[0]


def test_inert_primes_have_zero_trace():
    # needs every fiber to keep rational components at inert p: true for
    # the models below (square tangent cones, unconditional star types),
    # false for d27 whose I2 node is conjugate at p = 2 mod 3
    for name in ("d19", "d7-tate", "d11", "d4"):
        model = get_model(name)
        for p in primes_up_to(60):
            if p <= 3 or not good_prime(model, p):
                continue
            if kronecker(model.d, p) == -1:
                assert surface_count(model, p) == 1 + p * p + 20 * p, (name, p)


def test_good_prime_examples():
    d19 = get_model("d19")
    assert not good_prime(d19, 2)
    assert not good_prime(d19, 3)
    assert good_prime(d19, 5)
    assert not good_prime(d19, 19)  # divides d
    assert not good_prime(get_model("d7-tate"), 7)
    assert not good_prime(get_model("d27"), 3)


def test_trace_requires_split_prime():
    with pytest.raises(VerificationError) as err:
        trace_ap(get_model("d4"), 7)
    assert err.value.code == "PRECONDITION"


def test_weil_bound_on_traces():
    for model in REGISTRY.values():
        for p in (5, 7, 11, 13, 17, 19, 23):
            if good_prime(model, p) and kronecker(model.d, p) == 1:
                assert abs(trace_ap(model, p)) <= 2 * p


class TestTwists:
    def test_twist_scales_trace_by_character(self):
        base = get_model("d4")
        for delta in (5, -3):
            twisted = twist_model(base, delta)
            assert rank20_effective(twisted)
            dstar = twist_discriminant(delta)
            for p in (13, 17, 29, 37):
                if not (good_prime(base, p) and good_prime(twisted, p)):
                    continue
                assert trace_ap(twisted, p) == trace_ap(base, p) * kronecker(
                    dstar, p
                ), (delta, p)

    def test_double_twist_restores_traces(self):
        base = get_model("d4")
        back = twist_model(twist_model(base, 5), 5)
        for p in (13, 17, 29):
            assert trace_ap(back, p) == trace_ap(base, p)

    def test_twist_preserves_fiber_types(self):
        base = get_model("d19")
        twisted = twist_model(base, 5)
        got = [(F.place, F.kodaira_type) for F in classify_fibers(twisted)]
        want = [(F.place, F.kodaira_type) for F in classify_fibers(base)]
        assert got == want

    def test_twisted_non_minus_four_model_not_effective(self):
        twisted = twist_model(get_model("d19"), 5)
        assert not rank20_effective(twisted)
        with pytest.raises(VerificationError) as err:
            trace_ap(twisted, 11)
        assert err.value.code == "PRECONDITION"

    def test_twist_requires_squarefree_delta(self):
        with pytest.raises(VerificationError):
            twist_model(get_model("d4"), 12)

    def test_twist_names_record_delta(self):
        assert twist_model(get_model("d4"), 5).name == "d4[5]"


def test_json_roundtrip_all_models():
    for name, model in REGISTRY.items():
        blob = json.dumps(model_to_json(model), sort_keys=True)
        back = model_from_json(json.loads(blob))
        assert back == model, name


def test_json_roundtrip_keeps_twist():
    twisted = twist_model(get_model("d4"), 5)
    back = model_from_json(model_to_json(twisted))
    assert back.twist_by == 5
    assert back == twisted


def test_off_curve_section_rejected():
    base = get_model("d4")
    bad = SectionData(x_num=(1,), y_num=(1,))
    with pytest.raises(VerificationError):
        SurfaceModel(
            "broken",
            base.a1,
            base.a2,
            base.a3,
            base.a4,
            base.a6,
            d=base.d,
            sections=(bad,),
        )


def test_degree_bound_enforced():
    with pytest.raises(VerificationError):
        SurfaceModel("toodeep", (), (), (), (), (0,) * 13 + (1,), d=-3)
