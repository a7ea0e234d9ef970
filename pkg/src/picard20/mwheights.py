"""Shioda height pairing and Neron-Severi discriminants on elliptic K3 surfaces.

Everything is exact rational arithmetic.  The height of a section is
h(P) = 4 + 2 (P.O) - sum of fiber correction terms, and the Neron-Severi
discriminant of a rank-20 configuration is
-(product of root lattice discriminants) * det(MW Gram) / torsion^2.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import VerificationError
from .ellsurf import (
    SectionData,
    SurfaceModel,
    _cycle_index,
    _star_index,
    classify_fibers,
)
from .polys import factor_int_poly, pdeg, valuation


def root_disc(symbol: str) -> int:
    """Discriminant of the root lattice of the fiber (A_{n-1} for I_n, etc.)."""
    fixed = {"II": 1, "III": 2, "IV": 3, "IV*": 3, "III*": 2, "II*": 1}
    if symbol in fixed:
        return fixed[symbol]
    if _star_index(symbol) is not None:
        return 4
    n = _cycle_index(symbol)
    if n is not None:
        return n
    raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")


def root_rank(symbol: str) -> int:
    """Rank of the root lattice of the fiber."""
    fixed = {"II": 0, "III": 1, "IV": 2, "IV*": 6, "III*": 7, "II*": 8}
    if symbol in fixed:
        return fixed[symbol]
    n = _star_index(symbol)
    if n is not None:
        return n + 4
    n = _cycle_index(symbol)
    if n is not None:
        return n - 1
    raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")


def component_exponent(symbol: str) -> int:
    """Exponent of the component group; bounds denominators of heights."""
    fixed = {"II": 1, "III": 2, "IV": 3, "IV*": 3, "III*": 2, "II*": 1}
    if symbol in fixed:
        return fixed[symbol]
    n = _star_index(symbol)
    if n is not None:
        return 2 if n % 2 == 0 else 4
    n = _cycle_index(symbol)
    if n is not None:
        return n
    raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")


def contribution(symbol: str, index: int) -> Fraction:
    """Correction term for a section through component `index` of the fiber.

    Index 0 is the identity component.  For I_n the components are indexed
    around the cycle; for I_b* index 1 is the near component and 2, 3 the far
    ones.  II and II* only have the identity component.
    """
    n = _cycle_index(symbol)
    if n is not None:
        if not 0 <= index < n:
            raise VerificationError("PRECONDITION", f"I{n} has no component {index}")
        return Fraction(index * (n - index), n)
    b = _star_index(symbol)
    if b is not None:
        if index == 0:
            return Fraction(0)
        if index == 1:
            return Fraction(1)
        if index in (2, 3):
            return 1 + Fraction(b, 4)
        raise VerificationError("PRECONDITION", f"{symbol} has no component {index}")
    simple = {"II": 1, "III": 2, "IV": 3, "IV*": 3, "III*": 2, "II*": 1}
    if symbol not in simple:
        raise VerificationError("PRECONDITION", f"unknown Kodaira symbol {symbol!r}")
    if not 0 <= index < simple[symbol]:
        raise VerificationError("PRECONDITION", f"{symbol} has no component {index}")
    if index == 0:
        return Fraction(0)
    value = {"III": Fraction(1, 2), "IV": Fraction(2, 3), "IV*": Fraction(4, 3), "III*": Fraction(3, 2)}
    return value[symbol]


@dataclass(frozen=True)
class ConfigLattice:
    """Fiber configuration plus Mordell-Weil data of a rank-20 surface."""

    fibers: tuple  # ((kodaira symbol, multiplicity), ...)
    mw_rank: int = 0
    torsion_order: int = 1
    mw_gram: Optional[tuple] = None  # row tuples of Fractions, size mw_rank
    fiber_places: tuple = ()  # ((place label, kodaira symbol), ...) when known

    def __post_init__(self):
        object.__setattr__(
            self, "fibers", tuple((str(s), int(m)) for s, m in self.fibers)
        )
        object.__setattr__(
            self, "fiber_places", tuple((str(p), str(s)) for p, s in self.fiber_places)
        )
        if self.mw_gram is not None:
            gram = tuple(tuple(Fraction(x) for x in row) for row in self.mw_gram)
            if len(gram) != self.mw_rank or any(len(r) != self.mw_rank for r in gram):
                raise VerificationError("PRECONDITION", "Gram matrix size != MW rank")
            object.__setattr__(self, "mw_gram", gram)
        if self.torsion_order < 1 or self.mw_rank < 0:
            raise VerificationError("PRECONDITION", "bad Mordell-Weil data")

    @property
    def root_discs(self) -> tuple:
        out = []
        for sym, mult in self.fibers:
            out.extend([root_disc(sym)] * mult)
        return tuple(out)

    @property
    def euler_sum(self) -> int:
        from .ellsurf import kodaira_euler_number

        return sum(kodaira_euler_number(sym) * mult for sym, mult in self.fibers)

    @property
    def root_rank_sum(self) -> int:
        return sum(root_rank(sym) * mult for sym, mult in self.fibers)


def _det(gram: tuple) -> Fraction:
    # fraction-free enough for the tiny matrices that occur here
    n = len(gram)
    m = [list(row) for row in gram]
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r][i] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for c in range(i, n):
                m[r][c] -= f * m[i][c]
    return det


def height(section: SectionData, config: ConfigLattice, PO: int) -> Fraction:
    """h(P) = 4 + 2 PO - sum of corrections at the section's component hits."""
    if PO < 0:
        raise VerificationError("PRECONDITION", "P.O must be nonnegative")
    types = dict(config.fiber_places)
    total = Fraction(4 + 2 * PO)
    for place, index in section.component_hits:
        if place not in types:
            raise VerificationError(
                "PRECONDITION", f"component hit at {place}, which carries no reducible fiber"
            )
        total -= contribution(types[place], index)
    return total


def compute_PO(section: SectionData, model: SurfaceModel) -> int:
    """Intersection number P.O from the poles of x(P).

    Each finite pole contributes half its (necessarily even) order times the
    degree of the place; at infinity a polynomial part of degree up to 4 is
    free, beyond that ceil((deg x - 4)/2).
    """
    total = 0
    if pdeg(section.x_den) > 0:
        _, factors = factor_int_poly(section.x_den)
        for g, m in factors:
            cancel = valuation(section.x_num, g) if section.x_num else m
            order = m - min(m, cancel)
            if order <= 0:
                continue
            if order % 2:
                raise VerificationError(
                    "PRECONDITION", f"odd pole order {order} of x(P); not a section"
                )
            total += (order // 2) * pdeg(g)
    deg_x = pdeg(section.x_num) - pdeg(section.x_den)
    if deg_x > 4:
        total += -((4 - deg_x) // 2)  # ceil((deg_x - 4) / 2)
    return total


@functools.lru_cache(maxsize=None)
def config_from_model(model: SurfaceModel) -> ConfigLattice:
    """ConfigLattice of a model: fibers from classification, MW data from sections.

    The Gram matrix is the diagonal of section heights; with more than one
    free section the off-diagonal pairings are not determined by the stored
    data, so that case is refused.
    """
    fibers = classify_fibers(model)
    counts: dict[str, int] = {}
    places = []
    for F in fibers:
        deg = 1 if F.poly is None else pdeg(F.poly)
        counts[F.kodaira_type] = counts.get(F.kodaira_type, 0) + deg
        places.append((F.place, F.kodaira_type))
    torsion = 1
    free = []
    for s in model.sections:
        if s.torsion_order:
            torsion = torsion * s.torsion_order // math.gcd(torsion, s.torsion_order)
        else:
            free.append(s)
    if len(free) > 1:
        raise VerificationError(
            "PRECONDITION", "cannot derive a Gram matrix for MW rank > 1 from sections"
        )
    config = ConfigLattice(
        fibers=tuple(sorted(counts.items())),
        mw_rank=len(free),
        torsion_order=torsion,
        mw_gram=None,
        fiber_places=tuple(places),
    )
    if free:
        h = height(free[0], config, compute_PO(free[0], model))
        config = ConfigLattice(
            fibers=config.fibers,
            mw_rank=1,
            torsion_order=torsion,
            mw_gram=((h,),),
            fiber_places=config.fiber_places,
        )
    if model.rank20_over_Q:
        total = 2 + config.root_rank_sum + config.mw_rank
        if total != 20:
            raise VerificationError(
                "PRECONDITION", f"lattice ranks of {model.name} sum to {total}, not 20"
            )
    return config


def ns_discriminant(config: ConfigLattice) -> int:
    """-(prod root discs) * det(Gram) / torsion^2; must be a negative integer."""
    if config.mw_rank > 0 and config.mw_gram is None:
        raise VerificationError(
            "PRECONDITION", "Gram matrix required when the Mordell-Weil rank is positive"
        )
    det = _det(config.mw_gram) if config.mw_rank > 0 else Fraction(1)
    value = Fraction(-math.prod(config.root_discs)) * det / config.torsion_order**2
    if value.denominator != 1:
        raise VerificationError(
            "NON_INTEGRAL", f"discriminant formula gives non-integer {value}"
        )
    if value >= 0:
        raise VerificationError("PRECONDITION", f"discriminant {value} is not negative")
    return int(value)


def required_gram_determinant(d: int, config: ConfigLattice) -> Fraction:
    """Gram determinant forced by the discriminant identity for a given d.

    For configurations without published generator heights this is all that can
    be checked: it must be positive, with denominator dividing
    (2 * lcm of component exponents)^mw_rank, the a priori bound on height
    denominators in the Mordell-Weil lattice.
    """
    return Fraction(abs(d) * config.torsion_order**2, math.prod(config.root_discs))


def gram_denominator_bound(config: ConfigLattice) -> int:
    bound = 1
    for sym, _ in config.fibers:
        e = component_exponent(sym)
        bound = bound * e // math.gcd(bound, e)
    return (2 * bound) ** max(config.mw_rank, 1)
