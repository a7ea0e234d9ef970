"""Exact integer and modular arithmetic kernels.

Everything here is deterministic and exact; Python integers make overflow a
non-issue. These routines sit under every other module, so they favour
clarity plus exhaustive-oracle testability over cleverness.
"""

from __future__ import annotations

import math

__all__ = [
    "is_prime",
    "kronecker",
    "sqrt_mod",
    "cornacchia",
    "primes_up_to",
    "squarefree_part",
    "is_square",
]

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10**24,
# comfortably past 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with a fixed witness set)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 1.

    Total in a; extends the Jacobi symbol by the usual rule at 2.
    """
    if n < 1:
        raise ValueError("kronecker requires n >= 1")
    k = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    # n odd >= 1; the Jacobi symbol is periodic in a mod n, signs included
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of a modulo an odd prime p, or None for a non-residue.

    Returns the smaller of the two roots. Tonelli-Shanks in the hard case.
    """
    if p < 3 or not is_prime(p):
        raise ValueError("sqrt_mod requires an odd prime modulus")
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # p = 1 mod 4: write p - 1 = q * 2^s with q odd.
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(a, q, p)
    r = pow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return min(r, p - r)


def is_square(n: int) -> bool:
    """True iff n is a perfect square (n >= 0)."""
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def cornacchia(D: int, m: int) -> tuple[int, int] | None:
    """Solve x^2 + D*y^2 = m in nonnegative integers, D >= 1, m >= 1.

    Returns the solution with maximal y among primitive ones (gcd(x,y) = 1);
    if only imprimitive solutions exist, the one with maximal y overall.
    None exactly when no solution exists. Bounded descent over y; the search
    space is sqrt(m/D), tiny at the scales used here (m up to a few 10^6).
    """
    if D < 1 or m < 1:
        raise ValueError("cornacchia requires D >= 1 and m >= 1")
    fallback = None
    y = math.isqrt(m // D)
    while y >= 0:
        r = m - D * y * y
        x = math.isqrt(r)
        if x * x == r:
            if math.gcd(x, y) == 1:
                return (x, y)
            if fallback is None:
                fallback = (x, y)
        y -= 1
    return fallback


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, by sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def squarefree_part(n: int) -> int:
    """Squarefree kernel of n (sign preserved); squarefree_part(0) is an error."""
    if n == 0:
        raise ValueError("squarefree_part(0) is undefined")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                out *= d
        d += 1 if d == 2 else 2
    return sign * out * n
