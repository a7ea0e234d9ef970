"""Prime coefficients of weight-3 CM newforms, and twist matching.

For an imaginary quadratic field of class number one the Hecke character of
infinity-type 2 gives a newform whose coefficient at a split prime p is
a_p = 2(x^2 - D'y^2) where p = x^2 + D'y^2 with x, y in (1/2)N. The constant
D' normalizes away the extra units for d_K = -3 and -4. Two-torsion class
groups contribute only the magnitude |a_p| = 2x from p^2 = x^2 + D y^2; the
sign is fixed later by the Artin-Tate side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import cornacchia, is_prime, is_square, kronecker, squarefree_part
from .errors import VerificationError
from .qforms import FormClassGroup, class_number

__all__ = [
    "SPLIT",
    "INERT",
    "RAMIFIED",
    "CMRule",
    "TwistVerdict",
    "is_fundamental_discriminant",
    "split_type",
    "ap_h1",
    "ap_two_torsion",
    "twist_quadratic",
    "twist_discriminant",
    "match_twist",
]

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


def is_fundamental_discriminant(d: int) -> bool:
    """d = 1 mod 4 squarefree, or d = 4m with m = 2, 3 mod 4 squarefree."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


@dataclass(frozen=True)
class CMRule:
    """CM field data: fundamental discriminant d_K, the form constant D,
    and the level constant D_prime. twist, when set, is the squarefree
    integer of a quadratic twist; None means the untwisted normalization.
    """

    d_K: int
    twist: int | None = None

    def __post_init__(self):
        if not is_fundamental_discriminant(self.d_K):
            raise VerificationError(
                "PRECONDITION", f"{self.d_K} is not a fundamental discriminant"
            )
        if self.twist is not None:
            if self.twist == 0 or squarefree_part(self.twist) != self.twist:
                raise VerificationError(
                    "PRECONDITION", f"twist {self.twist} is not squarefree"
                )

    @property
    def D(self) -> int:
        return -self.d_K if self.d_K % 4 != 0 else -self.d_K // 4

    @property
    def D_prime(self) -> int:
        if self.d_K == -3:
            return 27
        if self.d_K == -4:
            return 4
        return self.D


def split_type(d_K: int, p: int) -> str:
    if not is_prime(p):
        raise VerificationError("PRECONDITION", f"{p} is not prime")
    chi = kronecker(d_K, p)
    return SPLIT if chi == 1 else INERT if chi == -1 else RAMIFIED


def ap_h1(rule: CMRule, p: int) -> int:
    """Coefficient a_p of the untwisted newform for class number one d_K.

    Split p: solve 4p = X^2 + D'Y^2 (odd d_K; realizes x = X/2, y = Y/2)
    or p = x^2 + D'y^2 (even d_K, where the normalization forces integral
    x, y) and return 2(x^2 - D'y^2). Inert p gives 0.
    """
    if rule.twist is not None:
        raise VerificationError("PRECONDITION", "ap_h1 needs the untwisted rule")
    if class_number(rule.d_K) != 1:
        raise VerificationError(
            "PRECONDITION", f"class number of {rule.d_K} is not one"
        )
    st = split_type(rule.d_K, p)
    if st == RAMIFIED or rule.D_prime % p == 0:
        raise VerificationError("PRECONDITION", f"p = {p} is not unramified")
    if st == INERT:
        return 0
    Dp = rule.D_prime
    if rule.d_K % 4 == 0:
        sol = cornacchia(Dp, p)
        if sol is None:
            raise VerificationError(
                "NO_REPRESENTATION", f"{p} = x^2 + {Dp}y^2 has no solution"
            )
        x, y = sol
        ap = 2 * (x * x - Dp * y * y)
    else:
        sol = cornacchia(Dp, 4 * p)
        if sol is None:
            raise VerificationError(
                "NO_REPRESENTATION", f"4*{p} = X^2 + {Dp}Y^2 has no solution"
            )
        X, Y = sol
        ap = (X * X - Dp * Y * Y) // 2
    assert abs(ap) <= 2 * p
    return ap


def ap_two_torsion(d_K: int, p: int) -> tuple[int, Fraction]:
    """Magnitude data (2x, y) with p^2 = x^2 + D y^2, x, y in (1/2)N,
    for two-torsion class groups. The trivial split (x, y) = (p, 0) is
    excluded; the sign of a_p = +-2x is not determined here.
    """
    if d_K in (-3, -4):
        raise VerificationError("PRECONDITION", "extra units: use ap_h1 route")
    rule = CMRule(d_K)
    if not FormClassGroup(d_K).is_two_torsion():
        raise VerificationError(
            "PRECONDITION", f"class group of {d_K} is not two-torsion"
        )
    if split_type(d_K, p) != SPLIT:
        raise VerificationError("PRECONDITION", f"p = {p} does not split")
    D = rule.D
    sol = cornacchia(D, 4 * p * p)
    if sol is None or sol[1] == 0:
        raise VerificationError(
            "NO_REPRESENTATION",
            f"4*{p}^2 = X^2 + {D}Y^2 has no nontrivial solution",
        )
    X, Y = sol
    return X, Fraction(Y, 2)


def twist_discriminant(delta: int) -> int:
    """Discriminant of Q(sqrt(delta)) for squarefree delta."""
    if delta == 0 or squarefree_part(delta) != delta:
        raise VerificationError("PRECONDITION", f"{delta} is not squarefree")
    return delta if delta % 4 == 1 else 4 * delta


def twist_quadratic(
    ap_sequence: list[tuple[int, int]], delta: int
) -> list[tuple[int, int]]:
    """Twist prime-indexed coefficients: a_p -> a_p * kronecker(delta*, p)."""
    if delta == 1:
        return list(ap_sequence)
    dstar = twist_discriminant(delta)
    return [(p, ap * kronecker(dstar, p)) for p, ap in ap_sequence]


@dataclass(frozen=True)
class TwistVerdict:
    """Outcome of comparing geometric coefficients with the CM rule.

    kind is one of:
        matches_base    -- equal to the untwisted coefficients at every prime
        quadratic_twist -- off by kronecker(delta*, .); delta recorded
        cubic_class     -- d_K = -3 only: every a_p fits some cubic branch
        no_match        -- with the first offending prime
    """

    kind: str
    delta: int | None = None
    failing_prime: int | None = None


_MIN_MATCH_PRIMES = 5
_TWIST_SEARCH_BOUND = 1000


def match_twist(
    geometric: list[tuple[int, int]], rule: CMRule
) -> TwistVerdict:
    """Identify the twist relating geometric a_p data to the base newform.

    Inert and ramified rows are discarded; at least 5 split rows must
    remain. For d_K not in {-3, -4} only the identity twist can occur, so
    the verdict is matches_base or no_match. For d_K = -4 a quadratic twist
    is searched by its sign pattern; for d_K = -3 each coefficient is
    checked against the cubic-branch shape 2p + a_p = (2x)^2,
    (2p - a_p)/3 = (2y)^2.
    """
    rows = [
        (p, ap)
        for p, ap in geometric
        if split_type(rule.d_K, p) == SPLIT
    ]
    if len(rows) < _MIN_MATCH_PRIMES:
        raise VerificationError(
            "INSUFFICIENT_DATA",
            f"need at least {_MIN_MATCH_PRIMES} split primes, got {len(rows)}",
        )
    base_rule = CMRule(rule.d_K)
    base = {p: ap_h1(base_rule, p) for p, _ in rows}

    if all(ap == base[p] for p, ap in rows):
        return TwistVerdict("matches_base")

    if rule.d_K == -4:
        for p, ap in rows:
            if abs(ap) != abs(base[p]):
                # magnitude change means a biquadratic twist, out of scope
                return TwistVerdict("no_match", failing_prime=p)
        signs = {p: 1 if ap == base[p] else -1 for p, ap in rows}
        for adelta in range(2, _TWIST_SEARCH_BOUND + 1):
            for delta in (adelta, -adelta):
                if squarefree_part(delta) != delta:
                    continue
                dstar = twist_discriminant(delta)
                if all(kronecker(dstar, p) == s for p, s in signs.items()):
                    return TwistVerdict("quadratic_twist", delta=delta)
        return TwistVerdict("no_match", failing_prime=rows[0][0])

    if rule.d_K == -3:
        for p, ap in rows:
            plus = 2 * p + ap
            minus = 2 * p - ap
            if not (
                plus >= 0
                and is_square(plus)
                and minus % 3 == 0
                and is_square(minus // 3)
            ):
                return TwistVerdict("no_match", failing_prime=p)
        return TwistVerdict("cubic_class")

    for p, ap in rows:
        if ap != base[p]:
            return TwistVerdict("no_match", failing_prime=p)
    raise AssertionError("unreachable")
