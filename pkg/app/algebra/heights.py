"""
Counting points of bounded height on P^1 with unit conditions at a finite set of primes.

Only K = Q is counted exactly; other number fields get the leading constant.
Counted points are affine, (a : b) with b >= 1; the point at infinity is excluded.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence

import numpy as np
import sympy
from pydantic import BaseModel, model_validator

from app.config.settings import settings
from app.models.errors import InputError

# Set up logging
logger = logging.getLogger(__name__)

# Denominators handled per numpy batch
COUNT_CHUNK = 256


class NumberFieldInvariants(BaseModel):
    """Invariants entering the leading constant of the height count."""
    degree: int
    r1: int
    r2: int
    class_number: int
    regulator: float
    roots_of_unity: int
    discriminant: int
    zeta_at_2: float

    @model_validator(mode="after")
    def check_consistency(self) -> "NumberFieldInvariants":
        if self.degree != self.r1 + 2 * self.r2:
            raise ValueError(f"degree {self.degree} != r1 + 2 r2 = {self.r1 + 2 * self.r2}")
        if self.roots_of_unity < 2 or self.roots_of_unity % 2:
            raise ValueError("the number of roots of unity must be even and at least 2")
        if self.class_number < 1 or self.regulator <= 0 or self.zeta_at_2 <= 1:
            raise ValueError("class number, regulator and zeta(2) must be positive (zeta(2) > 1)")
        if self.discriminant == 0:
            raise ValueError("discriminant must be nonzero")
        return self


def rational_invariants() -> NumberFieldInvariants:
    return NumberFieldInvariants(degree=1, r1=1, r2=0, class_number=1, regulator=1.0,
                                 roots_of_unity=2, discriminant=1, zeta_at_2=math.pi ** 2 / 6)


def local_factor(q: int) -> float:
    """(q - 1)^2 / (q^2 - 1)."""
    return (q - 1) ** 2 / (q ** 2 - 1)


def schanuel_constant(inv: NumberFieldInvariants, norms: Iterable[int] = ()) -> float:
    """
    Leading constant C_Sigma of the count of points of height at most X.

    Args:
        inv: invariants of the number field K
        norms: norms of the prime ideals in Sigma

    Returns:
        C_Sigma = (h R / (w zeta_K(2))) * gamma_K * prod_q (q - 1)^2 / (q^2 - 1)
    """
    norms = list(norms)
    for q in norms:
        if q < 2:
            raise InputError(f"prime ideal norm must be at least 2, got {q}", {"norm": q})
    r = inv.r1 + inv.r2 - 1
    gamma = (2 ** inv.r1 * (2 * math.pi) ** inv.r2) ** 2 * 2 ** r / abs(inv.discriminant)
    constant = inv.class_number * inv.regulator / (inv.roots_of_unity * inv.zeta_at_2) * gamma
    for q in norms:
        constant *= local_factor(q)
    return constant


def _validate_primes(primes: Sequence[int]) -> List[int]:
    out = sorted(set(int(q) for q in primes))
    for q in out:
        if not sympy.isprime(q):
            raise InputError(f"{q} is not a prime", {"prime": q})
    return out


def _count_chunk(primes: Sequence[int], X: int, denominators: np.ndarray) -> int:
    a = np.arange(-X, X + 1, dtype=np.int64)
    for q in primes:
        a = a[a % q != 0]
    total = 0
    for start in range(0, denominators.size, COUNT_CHUNK):
        b = denominators[start:start + COUNT_CHUNK]
        total += int(np.count_nonzero(np.gcd(a[None, :], b[:, None]) == 1))
    return total


def brute_count_Q(primes: Sequence[int], X: int, threads: Optional[int] = None) -> int:
    """
    Number of a/b in lowest terms with |a|, b <= X, b >= 1 and q dividing neither a nor b for q in primes.
    """
    if X < 1:
        raise InputError(f"height bound must be at least 1, got {X}", {"X": X})
    primes = _validate_primes(primes)
    b = np.arange(1, X + 1, dtype=np.int64)
    for q in primes:
        b = b[b % q != 0]
    threads = settings.THREADS if threads is None else threads
    if threads <= 1 or b.size < 2 * COUNT_CHUNK:
        return _count_chunk(primes, X, b)
    parts = np.array_split(b, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        counts = pool.map(lambda part: _count_chunk(primes, X, part), parts)
    return int(sum(counts))


def count_ratio_table(primes: Sequence[int], bounds: Iterable[int]) -> List[dict]:
    """Rows X, count, C_Sigma X^2 and count / (C_Sigma X^2)."""
    primes = _validate_primes(primes)
    constant = schanuel_constant(rational_invariants(), primes)
    rows = []
    for X in bounds:
        count = brute_count_Q(primes, X)
        expected = constant * X * X
        rows.append({"X": X, "count": count, "constant_times_X2": expected, "ratio": count / expected})
        logger.info(f"Sigma={primes} X={X}: count {count}, ratio {count / expected:.5f}")
    return rows
