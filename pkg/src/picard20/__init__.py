"""Exact arithmetic checks for singular elliptic K3 surfaces.

Subpackage map:
    arith     -- integer kernels: primality, Kronecker symbol, Cornacchia
    qforms    -- binary quadratic forms and form class groups
    heckecm   -- CM Hecke eigenvalue rules and twist matching
    ellsurf   -- elliptic surfaces over Q(t): fibers, reductions, point counts
    mwheights -- Mordell-Weil heights and Neron-Severi discriminants
    atverify  -- Artin-Tate checks, discriminant searches, batch verification
    models    -- the built-in surface registry
    cli       -- command line entry point
"""

from .errors import VerificationError

__version__ = "0.1.0"

__all__ = ["VerificationError", "__version__"]
