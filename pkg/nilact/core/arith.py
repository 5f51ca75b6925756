"""Small number-theory helpers shared by the algebra modules."""
from typing import Optional, Sequence

from sympy import Matrix as SymMatrix, factorint, isprime

from .errors import InvalidPrime


def prime_power(n: int) -> Optional[tuple[int, int]]:
    """(p, k) with n == p**k and k >= 1, or None."""
    if n < 2:
        return None
    factors = factorint(n)
    if len(factors) != 1:
        return None
    (p, k), = factors.items()
    return int(p), int(k)


def is_p_power(n: int, p: int) -> bool:
    """True for 1, p, p**2, ..."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def valuation(n: int, p: int) -> int:
    k = 0
    while n and n % p == 0:
        n //= p
        k += 1
    return k


def require_prime(p: int, allow_zero: bool = False) -> int:
    if allow_zero and p == 0:
        return 0
    if not isprime(p):
        raise InvalidPrime(f"{p} is not a prime")
    return int(p)


def det_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square integer matrix reduced mod a prime p; the empty matrix gives 1."""
    if not len(matrix):
        return 1 % p
    return int(SymMatrix([[int(x) % p for x in row] for row in matrix]).det(method="bareiss")) % p
