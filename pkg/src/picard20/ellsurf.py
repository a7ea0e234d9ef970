"""Elliptic K3 surfaces over Q(t): Weierstrass models, Kodaira fibers, counting.

Models are globally minimal with integer polynomial coefficients, deg a_i <= 2i.
Fiber types come from the characteristic-0 valuation table, so no Tate algorithm
is run in residue characteristic p; instead good_prime() certifies that the
reduction mod p has the same local data as the model over Q, and counting at
p > 3 works fiberwise on the smooth model through component bookkeeping.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .arith import is_prime, kronecker, squarefree_part
from .errors import VerificationError
from .polys import (
    Poly,
    factor_int_poly,
    padd,
    pdeg,
    pderiv,
    pdivmod_mod,
    peval_mod,
    pgcd_mod,
    pmod,
    pmul,
    poly_str,
    ppow,
    pscale,
    psub,
    ptrim,
    reciprocal,
    is_squarefree_mod,
    trailing_zeros,
    valuation,
)

INFINITY = "t=oo"

# stand-in valuation for an identically vanishing c4 or c6
_INF = 10**9

_DEGREE_BOUND = {"a1": 2, "a2": 4, "a3": 6, "a4": 8, "a6": 12}


def place_label(f: Optional[Poly]) -> str:
    """Human-readable name of a place: "t=0", "t=-1", "t=oo", "t^2+t+1=0"."""
    if f is None:
        return INFINITY
    if pdeg(f) == 1:
        return f"t={Fraction(-f[0], f[1])}"
    return poly_str(f) + "=0"


# ---------------------------------------------------------------- Kodaira types


def kodaira_component_count(symbol: str) -> int:
    """Number of irreducible components of the fiber."""
    fixed = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}
    if symbol in fixed:
        return fixed[symbol]
    n = _star_index(symbol)
    if n is not None:
        return n + 5
    n = _cycle_index(symbol)
    if n is not None:
        return n
    raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")


def kodaira_euler_number(symbol: str) -> int:
    """Euler number of the fiber; these sum to 24 on a K3 surface."""
    fixed = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
    if symbol in fixed:
        return fixed[symbol]
    n = _star_index(symbol)
    if n is not None:
        return n + 6
    n = _cycle_index(symbol)
    if n is not None:
        return n
    raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")


def _cycle_index(symbol: str) -> Optional[int]:
    """n for I_n, None otherwise."""
    if symbol.startswith("I") and not symbol.endswith("*") and symbol[1:].isdigit():
        n = int(symbol[1:])
        return n if n >= 1 else None
    return None


def _star_index(symbol: str) -> Optional[int]:
    """n for I_n*, None otherwise."""
    if symbol.startswith("I") and symbol.endswith("*") and symbol[1:-1].isdigit():
        return int(symbol[1:-1])
    return None


def _kodaira_from_valuations(v4: int, v6: int, vd: int, place: str) -> str:
    # characteristic-0 table; v4/v6 may be the _INF sentinel for vanishing c4/c6
    if vd == 0:
        return "good"
    if v4 >= 4 and vd >= 12:
        raise VerificationError(
            "NON_MINIMAL", f"model is not minimal at {place}: v(c4)>=4, v(D)>=12"
        )
    if v4 == 0 and v6 == 0:
        return f"I{vd}"
    if v4 >= 1 and v6 == 1 and vd == 2:
        return "II"
    if v4 == 1 and v6 >= 2 and vd == 3:
        return "III"
    if v4 >= 2 and v6 == 2 and vd == 4:
        return "IV"
    if v4 == 2 and v6 == 3 and vd > 6:
        return f"I{vd - 6}*"
    if ((v4 == 2 and v6 >= 3) or (v4 >= 2 and v6 == 3)) and vd == 6:
        return "I0*"
    if v4 >= 3 and v6 == 4 and vd == 8:
        return "IV*"
    if v4 == 3 and v6 >= 5 and vd == 9:
        return "III*"
    if v4 >= 4 and v6 == 5 and vd == 10:
        return "II*"
    raise VerificationError(
        "PRECONDITION", f"unclassifiable valuation triple ({v4},{v6},{vd}) at {place}"
    )


# ---------------------------------------------------------------- model data


@dataclass(frozen=True)
class SectionData:
    """A point of the generic fiber, coordinates as integer rational functions."""

    x_num: Poly
    x_den: Poly = (1,)
    y_num: Poly = ()
    y_den: Poly = (1,)
    torsion_order: int = 0  # 0 means infinite order
    component_hits: tuple = ()  # ((place label, component index), ...)

    def __post_init__(self):
        for name in ("x_num", "x_den", "y_num", "y_den"):
            object.__setattr__(self, name, ptrim(tuple(getattr(self, name))))
        if not self.x_den or not self.y_den:
            raise VerificationError("PRECONDITION", "section with zero denominator")
        if self.torsion_order < 0:
            raise VerificationError("PRECONDITION", "negative torsion order")
        object.__setattr__(
            self,
            "component_hits",
            tuple((str(pl), int(k)) for pl, k in self.component_hits),
        )


@dataclass(frozen=True)
class FiberDatum:
    """One singular fiber (or a Galois orbit of them, for a place of degree > 1)."""

    place: str
    poly: Optional[Poly]  # irreducible factor of Delta over Q; None at t=oo
    kodaira_type: str
    vc4: int
    vc6: int
    vdelta: int
    component_count: int
    euler_number: int


@dataclass(frozen=True)
class SurfaceModel:
    """Weierstrass model y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q(t)."""

    name: str
    a1: Poly
    a2: Poly
    a3: Poly
    a4: Poly
    a6: Poly
    d: int  # declared Neron-Severi discriminant
    rank20_over_Q: bool = False
    sections: tuple = ()
    expected_config: tuple = ()
    twist_by: int = 1  # accumulated squarefree quadratic twist, 1 = untwisted

    def __post_init__(self):
        for name, bound in _DEGREE_BOUND.items():
            f = ptrim(tuple(getattr(self, name)))
            object.__setattr__(self, name, f)
            if pdeg(f) > bound:
                raise VerificationError(
                    "PRECONDITION", f"deg {name} = {pdeg(f)} exceeds K3 bound {bound}"
                )
            if any(not isinstance(c, int) for c in f):
                raise VerificationError("PRECONDITION", f"{name} has non-integer coefficients")
        if not isinstance(self.d, int) or self.d >= 0:
            raise VerificationError("PRECONDITION", "declared discriminant must be a negative integer")
        if self.twist_by == 0 or squarefree_part(self.twist_by) != self.twist_by:
            raise VerificationError("PRECONDITION", "twist_by must be squarefree and nonzero")
        object.__setattr__(self, "sections", tuple(self.sections))
        object.__setattr__(
            self,
            "expected_config",
            tuple((str(pl), str(sym)) for pl, sym in self.expected_config),
        )
        if not discriminant(self):
            raise VerificationError("PRECONDITION", "discriminant vanishes identically")
        for s in self.sections:
            if not _section_on_model(s, self):
                raise VerificationError(
                    "PRECONDITION", f"section does not satisfy the equation of {self.name}"
                )


def _section_on_model(s: SectionData, m: SurfaceModel) -> bool:
    # clear denominators of y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
    xd2 = pmul(s.x_den, s.x_den)
    xd3 = pmul(xd2, s.x_den)
    yd2 = pmul(s.y_den, s.y_den)
    lhs = pmul(pmul(s.y_num, s.y_num), xd3)
    lhs = padd(lhs, pmul(pmul(m.a1, pmul(s.x_num, s.y_num)), pmul(xd2, s.y_den)))
    lhs = padd(lhs, pmul(pmul(m.a3, s.y_num), pmul(xd3, s.y_den)))
    rhs = pmul(ppow(s.x_num, 3), yd2)
    rhs = padd(rhs, pmul(pmul(m.a2, pmul(s.x_num, s.x_num)), pmul(s.x_den, yd2)))
    rhs = padd(rhs, pmul(pmul(m.a4, s.x_num), pmul(xd2, yd2)))
    rhs = padd(rhs, pmul(m.a6, pmul(xd3, yd2)))
    return psub(lhs, rhs) == ()


# ---------------------------------------------------------------- invariants


@functools.lru_cache(maxsize=None)
def b_invariants(model: SurfaceModel) -> tuple[Poly, Poly, Poly, Poly]:
    """(b2, b4, b6, b8) of the model."""
    a1, a2, a3, a4, a6 = model.a1, model.a2, model.a3, model.a4, model.a6
    b2 = padd(pmul(a1, a1), pscale(a2, 4))
    b4 = padd(pscale(a4, 2), pmul(a1, a3))
    b6 = padd(pmul(a3, a3), pscale(a6, 4))
    b8 = padd(pmul(pmul(a1, a1), a6), pscale(pmul(a2, a6), 4))
    b8 = psub(b8, pmul(a1, pmul(a3, a4)))
    b8 = padd(b8, pmul(a2, pmul(a3, a3)))
    b8 = psub(b8, pmul(a4, a4))
    return b2, b4, b6, b8


@functools.lru_cache(maxsize=None)
def c_invariants(model: SurfaceModel) -> tuple[Poly, Poly]:
    """(c4, c6) of the model."""
    b2, b4, b6, _ = b_invariants(model)
    c4 = psub(pmul(b2, b2), pscale(b4, 24))
    c6 = padd(psub(pscale(pmul(b2, b4), 36), ppow(b2, 3)), pscale(b6, -216))
    return c4, c6


@functools.lru_cache(maxsize=None)
def discriminant(model: SurfaceModel) -> Poly:
    """Delta(t); satisfies 1728 Delta = c4^3 - c6^2."""
    b2, b4, b6, b8 = b_invariants(model)
    delta = pscale(pmul(pmul(b2, b2), b8), -1)
    delta = psub(delta, pscale(ppow(b4, 3), 8))
    delta = psub(delta, pscale(pmul(b6, b6), 27))
    delta = padd(delta, pscale(pmul(b2, pmul(b4, b6)), 9))
    c4, c6 = c_invariants(model)
    assert psub(pscale(delta, 1728), psub(ppow(c4, 3), pmul(c6, c6))) == ()
    return delta


@functools.lru_cache(maxsize=None)
def infinity_chart(model: SurfaceModel) -> SurfaceModel:
    """The model in the chart s = 1/t, weights a_i -> s^(2i) a_i(1/s)."""
    return SurfaceModel(
        name=model.name + "@oo",
        a1=reciprocal(model.a1, 2),
        a2=reciprocal(model.a2, 4),
        a3=reciprocal(model.a3, 6),
        a4=reciprocal(model.a4, 8),
        a6=reciprocal(model.a6, 12),
        d=model.d,
        rank20_over_Q=model.rank20_over_Q,
        twist_by=model.twist_by,
    )


def rank20_effective(model: SurfaceModel) -> bool:
    """Whether the Picard rank 20 over Q flag survives the accumulated twist.

    Quadratic twisting destroys rank 20 over Q except for d = -4, where every
    quadratic twist of the model stays in the family.
    """
    return model.rank20_over_Q and (model.twist_by == 1 or model.d == -4)


# ---------------------------------------------------------------- classification


def _valuation_or_inf(f: Poly, g: Poly) -> int:
    return valuation(f, g) if f else _INF


@functools.lru_cache(maxsize=None)
def _delta_factorization(model: SurfaceModel):
    return factor_int_poly(discriminant(model))


@functools.lru_cache(maxsize=None)
def classify_fibers(model: SurfaceModel) -> tuple[FiberDatum, ...]:
    """Singular fibers of the model, finite places first, t=oo last."""
    c4, c6 = c_invariants(model)
    _, factors = _delta_factorization(model)
    data = []
    euler = 0
    for f, m in factors:
        v4 = _valuation_or_inf(c4, f)
        v6 = _valuation_or_inf(c6, f)
        sym = _kodaira_from_valuations(v4, v6, m, place_label(f))
        datum = FiberDatum(
            place=place_label(f),
            poly=f,
            kodaira_type=sym,
            vc4=v4,
            vc6=v6,
            vdelta=m,
            component_count=kodaira_component_count(sym),
            euler_number=kodaira_euler_number(sym),
        )
        data.append(datum)
        euler += datum.euler_number * pdeg(f)
    chart = infinity_chart(model)
    c4i, c6i = c_invariants(chart)
    di = discriminant(chart)
    v4 = trailing_zeros(c4i) if c4i else _INF
    v6 = trailing_zeros(c6i) if c6i else _INF
    vd = trailing_zeros(di)
    if vd > 0:
        sym = _kodaira_from_valuations(v4, v6, vd, INFINITY)
        datum = FiberDatum(
            place=INFINITY,
            poly=None,
            kodaira_type=sym,
            vc4=v4,
            vc6=v6,
            vdelta=vd,
            component_count=kodaira_component_count(sym),
            euler_number=kodaira_euler_number(sym),
        )
        data.append(datum)
        euler += datum.euler_number
    if euler != 24:
        raise VerificationError(
            "NOT_K3", f"Euler numbers of {model.name} sum to {euler}, not 24"
        )
    return tuple(data)


# ---------------------------------------------------------------- good primes


def _valuation_and_quotient_mod(f: Poly, g: Poly, p: int):
    fb = pmod(f, p)
    v = 0
    while fb:
        q, r = pdivmod_mod(fb, g, p)
        if r:
            break
        fb = q
        v += 1
    return v, fb


def good_prime(model: SurfaceModel, p: int) -> bool:
    """Conservative test that reduction mod p keeps all local fiber data.

    Requires p > 3 prime, p coprime to d, the factorization pattern of Delta
    preserved mod p, and the valuation triple of (c4, c6, Delta) at every place
    (including t=oo) equal to its characteristic-0 value.
    """
    if p <= 3 or not is_prime(p):
        return False
    if model.d % p == 0:
        return False
    fibers = classify_fibers(model)
    content_, factors = _delta_factorization(model)
    if content_ % p == 0:
        return False
    c4, c6 = c_invariants(model)
    fbars = []
    for f, _ in factors:
        if f[-1] % p == 0:
            return False
        fb = pmod(f, p)
        if not is_squarefree_mod(fb, p):
            return False
        fbars.append(fb)
    for i in range(len(fbars)):
        for j in range(i + 1, len(fbars)):
            if pdeg(pgcd_mod(fbars[i], fbars[j], p)) != 0:
                return False
    by_place = {F.place: F for F in fibers}
    for (f, _), fb in zip(factors, fbars):
        F = by_place[place_label(f)]
        for poly, v_char0 in ((c4, F.vc4), (c6, F.vc6)):
            if not poly:
                continue  # identically zero matches any p
            if not pmod(poly, p):
                return False
            v, q = _valuation_and_quotient_mod(poly, fb, p)
            if v != v_char0:
                return False
            # per-root match: the quotient may share no factor with fb
            if pdeg(pgcd_mod(q, fb, p)) != 0:
                return False
    chart = infinity_chart(model)
    c4i, c6i = c_invariants(chart)
    di = discriminant(chart)
    for poly in (c4i, c6i, di):
        if not poly:
            continue
        g = pmod(poly, p)
        if not g or trailing_zeros(g) != trailing_zeros(poly):
            return False
    return True


# ---------------------------------------------------------------- counting


class _ChartData(NamedTuple):
    b2: Poly
    b4: Poly
    b6: Poly
    c4: Poly
    c6: Poly


class _CountingContext(NamedTuple):
    p: int
    chi: tuple
    finite: dict
    at_infinity: Optional[FiberDatum]
    main: _ChartData
    chart: _ChartData
    effective: bool
    split: int


def _chart_data(model: SurfaceModel, p: int) -> _ChartData:
    b2, b4, b6, _ = b_invariants(model)
    c4, c6 = c_invariants(model)
    return _ChartData(pmod(b2, p), pmod(b4, p), pmod(b6, p), pmod(c4, p), pmod(c6, p))


@functools.lru_cache(maxsize=None)
def _counting_context(model: SurfaceModel, p: int) -> _CountingContext:
    if not good_prime(model, p):
        raise VerificationError(
            "PRECONDITION", f"p={p} is not a good prime for {model.name}"
        )
    chi = [-1] * p
    chi[0] = 0
    for x in range(1, p):
        chi[x * x % p] = 1
    fibers = classify_fibers(model)
    finite = {}
    at_infinity = None
    for F in fibers:
        if F.poly is None:
            at_infinity = F
            continue
        for t0 in range(p):
            if peval_mod(F.poly, t0, p) == 0:
                finite[t0] = F
    return _CountingContext(
        p=p,
        chi=tuple(chi),
        finite=finite,
        at_infinity=at_infinity,
        main=_chart_data(model, p),
        chart=_chart_data(infinity_chart(model), p),
        effective=rank20_effective(model),
        split=kronecker(model.d, p),
    )


def _charsum_count(ctx: _CountingContext, side: _ChartData, t0: int) -> int:
    # points on the projective cubic: complete the square, 4x^3+b2x^2+2b4x+b6
    p, chi = ctx.p, ctx.chi
    b2v = peval_mod(side.b2, t0, p)
    b4v = 2 * peval_mod(side.b4, t0, p) % p
    b6v = peval_mod(side.b6, t0, p)
    s = 0
    for x in range(p):
        s += chi[(((4 * x + b2v) * x + b4v) * x + b6v) % p]
    return p + 1 + s


def _shifted_value(fbar: Poly, t0: int, k: int, p: int) -> int:
    """(f / (t - t0)^k)(t0) mod p, for f of valuation >= k at t0."""
    if not fbar:
        return 0
    lin = ((p - t0) % p, 1)
    for _ in range(k):
        fbar, r = pdivmod_mod(fbar, lin, p)
        if r:
            raise VerificationError("PRECONDITION", "valuation dropped under reduction")
    return peval_mod(fbar, t0, p)


def _cycle_count(ctx: _CountingContext, side: _ChartData, t0: int, datum: FiberDatum) -> int:
    # I_n, n >= 2: the smooth model has an n-cycle of rational curves over the
    # node; all components rational iff the node's tangent cone splits over F_p
    p = ctx.p
    n = _cycle_index(datum.kodaira_type)
    b2v = peval_mod(side.b2, t0, p)
    b4v = peval_mod(side.b4, t0, p)
    b6v = peval_mod(side.b6, t0, p)
    g = ptrim((b6v, 2 * b4v % p, b2v, 4))
    h = pgcd_mod(g, pderiv(g), p)
    if pdeg(h) != 1:
        raise VerificationError(
            "PRECONDITION", f"no unique double root for {datum.kodaira_type} at p={p}"
        )
    x0 = (-h[0]) % p
    x1 = (-b2v * pow(4, -1, p) - 2 * x0) % p
    e = ctx.chi[(x0 - x1) % p]
    if e == 1:
        return n * p
    if e == -1:
        raise VerificationError(
            "COMPONENTS_NOT_RATIONAL",
            f"I{n} fiber at {datum.place}: node tangents not rational at p={p}",
        )
    raise VerificationError("PRECONDITION", f"triple root in I{n} fiber at p={p}")


def _star_count(ctx: _CountingContext, side: _ChartData, t0: int, datum: FiberDatum) -> int:
    # I_0*: four simple components, three of which match the roots of the
    # residual cubic T^3 - 3 c4' T - 2 c6' with c4' = (c4/pi^2)(t0) etc.
    p = ctx.p
    a = _shifted_value(side.c4, t0, 2, p)
    b = _shifted_value(side.c6, t0, 3, p)
    cubic = ptrim(((-2 * b) % p, (-3 * a) % p, 0, 1))
    roots = sum(1 for T in range(p) if peval_mod(cubic, T, p) == 0)
    if roots == 3:
        return 5 * p + 1
    raise VerificationError(
        "COMPONENTS_NOT_RATIONAL",
        f"I0* fiber at {datum.place}: residual cubic does not split at p={p}",
    )


def count_fiber(model: SurfaceModel, p: int, t0) -> int:
    """Points on the fiber of the smooth model at t0 in P^1(F_p).

    t0 is an integer (finite place) or the INFINITY constant.
    """
    ctx = _counting_context(model, p)
    if t0 == INFINITY:
        side, datum, t0v = ctx.chart, ctx.at_infinity, 0
    else:
        t0v = int(t0) % p
        side, datum = ctx.main, ctx.finite.get(t0v)
    if datum is None or datum.kodaira_type == "I1":
        # smooth model = Weierstrass model here; both nodal cases are exact
        return _charsum_count(ctx, side, t0v)
    sym = datum.kodaira_type
    if sym == "II":
        return p + 1
    if sym == "III*":
        return 8 * p + 1
    if sym == "II*":
        return 9 * p + 1
    if _cycle_index(sym) is not None:
        return _cycle_count(ctx, side, t0v, datum)
    if sym == "I0*":
        return _star_count(ctx, side, t0v, datum)
    # III, IV, IV*, I_n* (n >= 1): rationality granted by rank 20 over Q at split p
    if ctx.effective and ctx.split == 1:
        return datum.component_count * p + 1
    raise VerificationError(
        "COMPONENTS_NOT_RATIONAL",
        f"{sym} fiber at {datum.place}: components not known rational at p={p}",
    )


def surface_count(model: SurfaceModel, p: int) -> int:
    """#X(F_p) for the smooth elliptic K3 surface, summed fiberwise."""
    total = sum(count_fiber(model, p, t0) for t0 in range(p))
    return total + count_fiber(model, p, INFINITY)


def trace_ap(model: SurfaceModel, p: int) -> int:
    """a_p = #X(F_p) - 1 - p^2 - 20p at a good split prime of a rank-20 model."""
    if not rank20_effective(model):
        raise VerificationError(
            "PRECONDITION", f"{model.name} is not effectively of rank 20 over Q"
        )
    if kronecker(model.d, p) != 1:
        raise VerificationError("PRECONDITION", f"p={p} is not split for d={model.d}")
    ap = surface_count(model, p) - 1 - p * p - 20 * p
    if abs(ap) > 2 * p:
        raise VerificationError("PRECONDITION", f"a_{p}={ap} breaks the Weil bound")
    return ap


# ---------------------------------------------------------------- twisting


def twist_model(model: SurfaceModel, delta: int) -> SurfaceModel:
    """Quadratic twist by squarefree delta: y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6.

    Constant twisting leaves every fiber type in place (c4, c6, Delta scale by
    units of Q[t]), so the expected configuration carries over.  Only sections
    with y = 0 survive twisting rationally; the rest are dropped.
    """
    if delta == 0 or squarefree_part(delta) != delta:
        raise VerificationError("PRECONDITION", "twist must be a nonzero squarefree integer")
    if model.a1 or model.a3:
        raise VerificationError(
            "UNSUPPORTED_SHAPE", "quadratic twisting needs a model with a1 = a3 = 0"
        )
    if delta == 1:
        return model
    kept = tuple(
        SectionData(
            x_num=pscale(s.x_num, delta),
            x_den=s.x_den,
            y_num=(),
            y_den=(1,),
            torsion_order=s.torsion_order,
            component_hits=s.component_hits,
        )
        for s in model.sections
        if s.y_num == ()
    )
    return SurfaceModel(
        name=f"{model.name}[{delta}]",
        a1=(),
        a2=pscale(model.a2, delta),
        a3=(),
        a4=pscale(model.a4, delta * delta),
        a6=pscale(model.a6, delta**3),
        d=model.d,
        rank20_over_Q=model.rank20_over_Q,
        sections=kept,
        expected_config=model.expected_config,
        twist_by=squarefree_part(model.twist_by * delta),
    )


# ---------------------------------------------------------------- serialization


def model_to_json(model: SurfaceModel) -> dict:
    """JSON-ready dict; polynomials as ascending integer coefficient lists."""
    obj = {
        "name": model.name,
        "d": model.d,
        "rank20_over_Q": model.rank20_over_Q,
        "a": {
            "a1": list(model.a1),
            "a2": list(model.a2),
            "a3": list(model.a3),
            "a4": list(model.a4),
            "a6": list(model.a6),
        },
        "sections": [
            {
                "x_num": list(s.x_num),
                "x_den": list(s.x_den),
                "y_num": list(s.y_num),
                "y_den": list(s.y_den),
                "torsion_order": s.torsion_order,
                "component_hits": [[pl, k] for pl, k in s.component_hits],
            }
            for s in model.sections
        ],
        "expected_config": [[pl, sym] for pl, sym in model.expected_config],
    }
    if model.twist_by != 1:
        obj["twist_by"] = model.twist_by
    return obj


def model_from_json(obj: dict) -> SurfaceModel:
    """Inverse of model_to_json; validates through the SurfaceModel constructor."""
    a = obj["a"]
    sections = tuple(
        SectionData(
            x_num=tuple(s["x_num"]),
            x_den=tuple(s.get("x_den", [1])),
            y_num=tuple(s.get("y_num", [])),
            y_den=tuple(s.get("y_den", [1])),
            torsion_order=int(s.get("torsion_order", 0)),
            component_hits=tuple((pl, k) for pl, k in s.get("component_hits", [])),
        )
        for s in obj.get("sections", [])
    )
    return SurfaceModel(
        name=str(obj["name"]),
        a1=tuple(a.get("a1", [])),
        a2=tuple(a.get("a2", [])),
        a3=tuple(a.get("a3", [])),
        a4=tuple(a.get("a4", [])),
        a6=tuple(a.get("a6", [])),
        d=int(obj["d"]),
        rank20_over_Q=bool(obj.get("rank20_over_Q", False)),
        sections=sections,
        expected_config=tuple((pl, sym) for pl, sym in obj.get("expected_config", [])),
        twist_by=int(obj.get("twist_by", 1)),
    )
