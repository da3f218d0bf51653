"""
Dense linear algebra over finite fields and truncated local rings.

Two kinds of coefficient objects share one scalar/vector protocol
(add, sub, mul, neg, inv, is_unit, residue, valuation, from_int and the
v-prefixed numpy versions, plus matmul):

- FieldDesc from app.algebra.ff
- RingDesc below, for Z/p^N and the dual numbers F_p[e]/(e^2)

Array-level helpers (rref_array, kernel_array, ...) take such an object and a
numpy int64 array; the Mat wrapper is the typed public surface.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.algebra.ff import FieldDesc, Poly, field_create, field_element_decode, field_element_encode
from app.models.errors import InputError, NotSplit
from app.utils.accel import NUMBA_AVAILABLE, njit

# Set up logging
logger = logging.getLogger(__name__)


# -- rings ----------------------------------------------------------------------

@dataclass(frozen=True)
class RingDesc:
    """
    A finite local ring with residue field F_p.

    flavor "field" wraps a FieldDesc, "zmod" is Z/p^N, "dual" is F_p[e]/(e^2)
    with a + b*e encoded as a + b*p. In both truncated flavors the uniformizer
    is encoded as the integer p.
    """
    flavor: str
    p: int
    N: int = 1
    field_desc: Optional[FieldDesc] = None

    zero = 0
    one = 1

    @classmethod
    def finite_field(cls, F: FieldDesc) -> "RingDesc":
        return cls("field", F.p, 1, F)

    @classmethod
    def zmod(cls, p: int, N: int) -> "RingDesc":
        field_create(p, 1)  # validates p
        if N < 1:
            raise ValueError(f"truncation length must be positive, got {N}")
        return cls("zmod", p, N)

    @classmethod
    def dual(cls, p: int) -> "RingDesc":
        field_create(p, 1)
        return cls("dual", p, 2)

    def __str__(self) -> str:
        if self.flavor == "field":
            F = self.field_desc
            return f"Fq[{F.p},{F.k}]"
        if self.flavor == "zmod":
            return f"Zmod[{self.p},{self.N}]"
        return f"Dual[{self.p}]"

    @property
    def is_prime_field(self) -> bool:
        return self.flavor == "field" and self.field_desc.k == 1

    @property
    def size(self) -> int:
        if self.flavor == "field":
            return self.field_desc.q
        return self.p ** self.N if self.flavor == "zmod" else self.p ** 2

    @property
    def residue_field(self) -> FieldDesc:
        return self.field_desc if self.flavor == "field" else field_create(self.p, 1)

    @property
    def uniformizer(self) -> int:
        return 0 if self.flavor == "field" else self.p

    @property
    def _mod(self) -> int:
        return self.p ** self.N

    # -- scalar protocol --

    def from_int(self, n: int) -> int:
        if self.flavor == "field":
            return self.field_desc.from_int(n)
        if self.flavor == "zmod":
            return int(n) % self._mod
        return int(n) % self.p

    def add(self, a: int, b: int) -> int:
        if self.flavor == "field":
            return self.field_desc.add(a, b)
        if self.flavor == "zmod":
            return (a + b) % self._mod
        p = self.p
        return ((a % p + b % p) % p) + ((a // p + b // p) % p) * p

    def neg(self, a: int) -> int:
        if self.flavor == "field":
            return self.field_desc.neg(a)
        if self.flavor == "zmod":
            return (-a) % self._mod
        p = self.p
        return ((-(a % p)) % p) + ((-(a // p)) % p) * p

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.flavor == "field":
            return self.field_desc.mul(a, b)
        if self.flavor == "zmod":
            return (a * b) % self._mod
        p = self.p
        a0, a1 = a % p, a // p
        b0, b1 = b % p, b // p
        return (a0 * b0) % p + ((a0 * b1 + a1 * b0) % p) * p

    def is_unit(self, a: int) -> bool:
        return self.residue(a) != 0

    def residue(self, a: int) -> int:
        if self.flavor == "field":
            return a
        return a % self.p

    def valuation(self, a: int) -> int:
        """Exponent of the uniformizer dividing a (N for zero)."""
        if self.flavor == "field":
            return 0 if a else 1
        if a == 0:
            return self.N
        v = 0
        if self.flavor == "zmod":
            while a % self.p == 0:
                a //= self.p
                v += 1
            return v
        return 0 if a % self.p else 1

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        if self.flavor == "field":
            return self.field_desc.inv(a)
        if self.flavor == "zmod":
            return pow(int(a), -1, self._mod)
        p = self.p
        a0, a1 = a % p, a // p
        i0 = pow(a0, p - 2, p)
        return i0 + ((-a1 * i0 * i0) % p) * p

    def divide(self, a: int, b: int) -> int:
        """Some x with x*b = a; requires valuation(a) >= valuation(b)."""
        if self.flavor == "field":
            return self.field_desc.mul(a, self.field_desc.inv(b))
        vb = self.valuation(b)
        if self.valuation(a) < vb:
            raise ZeroDivisionError(f"{b} does not divide {a} in {self}")
        if vb == 0:
            return self.mul(a, self.inv(b))
        if self.flavor == "zmod":
            scale = self.p ** vb
            unit = (b // scale) % self._mod
            return ((a // scale) * pow(int(unit), -1, self._mod)) % self._mod
        # dual numbers with b = b1*e, a = a1*e
        return ((a // self.p) * pow(b // self.p, self.p - 2, self.p)) % self.p

    def pow(self, a: int, e: int) -> int:
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # -- vector protocol --

    def vadd(self, A, B):
        if self.flavor == "field":
            return self.field_desc.vadd(A, B)
        if self.flavor == "zmod":
            return (A + B) % self._mod
        p = self.p
        return (A % p + B % p) % p + ((A // p + B // p) % p) * p

    def vneg(self, A):
        if self.flavor == "field":
            return self.field_desc.vneg(A)
        if self.flavor == "zmod":
            return (-A) % self._mod
        p = self.p
        return (-(A % p)) % p + ((-(A // p)) % p) * p

    def vsub(self, A, B):
        return self.vadd(A, self.vneg(B))

    def vmul(self, A, B):
        if self.flavor == "field":
            return self.field_desc.vmul(A, B)
        if self.flavor == "zmod":
            return (A * B) % self._mod
        p = self.p
        A0, A1 = A % p, A // p
        B0, B1 = B % p, B // p
        return (A0 * B0) % p + ((A0 * B1 + A1 * B0) % p) * p

    def vresidue(self, A):
        if self.flavor == "field":
            return A
        return A % self.p

    def matmul(self, A, B):
        if self.flavor == "field":
            return self.field_desc.matmul(A, B)
        if self.flavor == "zmod":
            return np.matmul(A, B) % self._mod
        p = self.p
        A0, A1 = A % p, A // p
        B0, B1 = B % p, B // p
        return np.matmul(A0, B0) % p + ((np.matmul(A0, B1) + np.matmul(A1, B0)) % p) * p

    def reduce_to(self, A, M: int):
        """Image under Z/p^N -> Z/p^M."""
        if self.flavor != "zmod" or M > self.N:
            raise ValueError(f"cannot reduce {self} to level {M}")
        return np.asarray(A) % (self.p ** M)


def ring_of(R) -> RingDesc:
    """Wrap a FieldDesc as RingDesc; RingDesc passes through."""
    return RingDesc.finite_field(R) if isinstance(R, FieldDesc) else R


def _is_prime_field(R) -> bool:
    if isinstance(R, FieldDesc):
        return R.k == 1
    return R.is_prime_field


def _prime_of(R) -> int:
    return R.p


def _vis_unit(R, A):
    if isinstance(R, FieldDesc) or R.flavor == "field":
        return A != 0
    return (A % R.p) != 0


# -- modular kernels ---------------------------------------------------------------

@njit(cache=True)
def _inv_mod_kernel(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _rref_kernel(A, p):
    rows, cols = A.shape
    pivots = np.empty(cols, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        inv = _inv_mod_kernel(A[r, c], p)
        for j in range(cols):
            A[r, j] = (A[r, j] * inv) % p
        for i in range(rows):
            if i != r:
                f = A[i, c]
                if f != 0:
                    for j in range(cols):
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots


def _rref_mod_numpy(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        rows_to_fix = np.flatnonzero(col)
        if rows_to_fix.size:
            A[rows_to_fix] = (A[rows_to_fix] - np.outer(col[rows_to_fix], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p, through float64 BLAS when the sums stay below 2^52."""
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2 ** 52:
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.rint(out).astype(np.int64) % p
    return np.matmul(A.astype(np.int64), B.astype(np.int64)) % p


# -- row reduction over any supported ring ----------------------------------------

def rref_array(R, M: np.ndarray) -> Tuple[np.ndarray, List[int], bool]:
    """
    Reduced row echelon form with unit pivots normalized to 1.

    Columns are scanned left to right; a column is a pivot column when some
    remaining row has a unit there. Over a chain ring, rows left over after
    the last unit pivot are nonzero exactly when the row space is not a free
    direct summand.

    Args:
        R: FieldDesc or RingDesc
        M: 2-d integer array of canonical representatives

    Returns:
        (reduced matrix without zero rows, pivot columns, split flag)
    """
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return A[:0], [], True
    if _is_prime_field(R):
        p = _prime_of(R)
        A %= p
        if NUMBA_AVAILABLE:
            r, piv = _rref_kernel(A, p)
            pivots = [int(c) for c in piv[:r]]
        else:
            A, pivots = _rref_mod_numpy(A, p)
        return A[:len(pivots)], pivots, True
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        units = np.flatnonzero(_vis_unit(R, A[r:, c]))
        if units.size == 0:
            continue
        i = r + int(units[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = R.vmul(A[r], np.full(cols, R.inv(int(A[r, c])), dtype=np.int64))
        col = A[:, c].copy()
        col[r] = 0
        fix = np.flatnonzero(col)
        if fix.size:
            A[fix] = R.vsub(A[fix], R.vmul(col[fix, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    split = not np.any(A[r:])
    return A[:r], pivots, split


def rank_array(R, M: np.ndarray) -> int:
    return len(rref_array(R, M)[1])


def kernel_array(R, M: np.ndarray) -> np.ndarray:
    """
    Basis (as rows) of {x : M x = 0}; over chain rings M must be split.

    Returns:
        k x cols array, rows in canonical reduced form
    """
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    A, pivots, split = rref_array(R, M)
    if not split:
        raise NotSplit("linear system has no unit pivot left", {"ring": str(R)})
    free = [j for j in range(cols) if j not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, j in enumerate(free):
        basis[t, j] = 1
        for i, c in enumerate(pivots):
            basis[t, c] = R.neg(int(A[i, j]))
    if basis.shape[0] == 0:
        return basis
    return rref_array(R, basis)[0]


def inverse_array(R, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([np.asarray(M, dtype=np.int64), np.eye(n, dtype=np.int64)], axis=1)
    A, pivots, _ = rref_array(R, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is not invertible")
    return A[:n, n:]


def solve_array(R, A: np.ndarray, B: np.ndarray) -> Optional[np.ndarray]:
    """One solution X of A X = B, or None."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = B[:, None]
    rows, cols = A.shape
    aug = np.concatenate([A, B], axis=1)
    red, pivots, _ = rref_array(R, aug)
    if any(c >= cols for c in pivots):
        return None
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        X[c] = red[i, cols:]
    # remaining equations must vanish
    check = R.vsub(R.matmul(A, X), B)
    if np.any(check):
        return None
    return X


def intersect_rowspaces(F, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Reduced basis of rowspace(U) intersected with rowspace(W) over a field."""
    U = np.asarray(U, dtype=np.int64)
    W = np.asarray(W, dtype=np.int64)
    cols = U.shape[1] if U.size else W.shape[1]
    if U.shape[0] == 0 or W.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.int64)
    rel = kernel_array(F, np.concatenate([U, W]).T)
    if rel.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.int64)
    return rref_array(F, F.matmul(rel[:, :U.shape[0]], U))[0]


def identity(R, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matpow(R, M: np.ndarray, e: int) -> np.ndarray:
    result = identity(R, M.shape[0])
    base = np.asarray(M, dtype=np.int64)
    while e:
        if e & 1:
            result = R.matmul(result, base)
        base = R.matmul(base, base)
        e >>= 1
    return result


class RowSpaceAccumulator:
    """
    Running reduced basis of a growing row space.

    Rows are added in batches; each batch is first reduced against the
    current basis with one matrix product.
    """

    def __init__(self, R, ncols: int):
        self.R = R
        self.ncols = ncols
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def add_rows(self, rows: np.ndarray) -> int:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.ncols)
        if rows.shape[0] == 0 or self.full:
            return self.rank
        R = self.R
        if self.rank:
            coeffs = rows[:, self.pivots]
            if _is_prime_field(R):
                rows = (rows - matmul_mod(coeffs, self.basis, R.p)) % R.p
            else:
                rows = R.vsub(rows, R.matmul(coeffs, self.basis))
        rows = rows[np.any(rows != 0, axis=1)]
        if rows.shape[0] == 0:
            return self.rank
        new_rows, _, _ = rref_array(R, rows)
        if new_rows.shape[0] == 0:
            return self.rank
        self.basis, self.pivots, _ = rref_array(R, np.concatenate([self.basis, new_rows]))
        return self.rank


# -- summands --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Summand:
    """
    A free direct summand of R^n, stored by its canonical basis.

    The basis rows are in reduced echelon form with unit pivots equal to 1, so
    the coordinates of a member v are v[pivots] and equality of summands is
    equality of bases.
    """
    ring: object
    n: int
    basis: np.ndarray
    pivots: Tuple[int, ...] = field(default=())

    @classmethod
    def from_rows(cls, R, n: int, rows) -> "Summand":
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
        red, pivots, split = rref_array(R, rows)
        if not split:
            raise NotSplit("spanning set does not generate a direct summand", {"ring": str(R)})
        return cls(R, n, red, tuple(pivots))

    @classmethod
    def zero(cls, R, n: int) -> "Summand":
        return cls(R, n, np.zeros((0, n), dtype=np.int64), ())

    @classmethod
    def full(cls, R, n: int) -> "Summand":
        return cls(R, n, np.eye(n, dtype=np.int64), tuple(range(n)))

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def columns(self) -> np.ndarray:
        return self.basis.T

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of members (rows of `vectors`) in the canonical basis."""
        return np.asarray(vectors, dtype=np.int64)[..., list(self.pivots)]

    def contains(self, v: np.ndarray) -> bool:
        V = np.asarray(v, dtype=np.int64).reshape(-1, self.n)
        if self.rank == 0:
            return not np.any(V)
        recon = self.ring.matmul(self.coordinates(V), self.basis)
        return bool(np.array_equal(recon, V))

    def contains_summand(self, other: "Summand") -> bool:
        return other.rank == 0 or self.contains(other.basis)

    def __add__(self, other: "Summand") -> "Summand":
        return Summand.from_rows(self.ring, self.n, np.concatenate([self.basis, other.basis]))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Summand) and self.n == other.n
                and self.basis.shape == other.basis.shape
                and bool(np.array_equal(self.basis, other.basis)))

    def __hash__(self) -> int:
        return hash((self.n, self.basis.tobytes()))

    def reduce(self) -> "Summand":
        """Reduction modulo the maximal ideal, as a subspace over F_p."""
        R = self.ring
        if isinstance(R, FieldDesc) or R.flavor == "field":
            return self
        Fp = R.residue_field
        return Summand.from_rows(Fp, self.n, R.vresidue(self.basis))

    def __repr__(self) -> str:
        return f"Summand(rank={self.rank}, n={self.n}, ring={self.ring})"


def summand_saturate(R, span: Sequence[Sequence[int]], n: Optional[int] = None) -> Optional[Summand]:
    """
    Direct-summand test over a chain ring.

    Args:
        R: RingDesc (Z/p^N or dual numbers) or a field
        span: spanning vectors
        n: ambient rank, inferred from the vectors when omitted

    Returns:
        The canonical Summand, or None when the span is not a direct summand
    """
    rows = np.asarray(span, dtype=np.int64)
    if n is None:
        n = rows.shape[-1]
    rows = rows.reshape(-1, n)
    red, pivots, split = rref_array(R, rows)
    if not split:
        logger.debug(f"span of {rows.shape[0]} vectors in {R}^{n} is not a summand")
        return None
    return Summand(R, n, red, tuple(pivots))


# -- Mat ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Mat:
    """A dense matrix over a field or local ring."""
    ring: object
    data: np.ndarray

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __matmul__(self, other: "Mat") -> "Mat":
        return Mat(self.ring, self.ring.matmul(self.data, other.data))

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(self.ring, self.ring.vadd(self.data, other.data))

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.ring, self.ring.vsub(self.data, other.data))

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash(self.data.tobytes())

    @property
    def T(self) -> "Mat":
        return Mat(self.ring, self.data.T.copy())

    def inverse(self) -> "Mat":
        return Mat(self.ring, inverse_array(self.ring, self.data))

    @classmethod
    def identity(cls, R, n: int) -> "Mat":
        return cls(R, np.eye(n, dtype=np.int64))


def kernel(M: Mat) -> Summand:
    """Null space of a matrix over a field (or a split system over a chain ring)."""
    basis = kernel_array(M.ring, M.data)
    if basis.shape[0] == 0:
        return Summand.zero(M.ring, M.cols)
    return Summand.from_rows(M.ring, M.cols, basis)


def rank(M: Mat) -> int:
    return rank_array(M.ring, M.data)


# -- characteristic and minimal polynomials ---------------------------------------

def charpoly_array(R, M: np.ndarray) -> Poly:
    """
    det(xI - M) by Berkowitz's division-free recursion.

    Works over any commutative ring of the protocol.
    """
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("characteristic polynomial of a non-square matrix")

    def vector(A: np.ndarray) -> List[int]:
        m = A.shape[0]
        if m == 0:
            return [R.one]
        if m == 1:
            return [R.one, R.neg(int(A[0, 0]))]
        a = int(A[0, 0])
        row = A[0:1, 1:]
        col = A[1:, 0:1]
        sub = A[1:, 1:]
        diags = [col]
        for i in range(m - 2):
            diags.append(R.matmul(sub, diags[i]))
        entries = [R.one, R.neg(a)] + [R.neg(int(R.matmul(row, d)[0, 0])) for d in diags]
        inner = vector(sub)
        out = []
        for i in range(m + 1):
            acc = 0
            for j in range(m):
                if 0 <= i - j < len(entries) and j < len(inner):
                    acc = R.add(acc, R.mul(entries[i - j], inner[j]))
            out.append(acc)
        return out

    high_to_low = vector(M)
    return Poly(R, tuple(reversed(high_to_low)))


def charpoly(M: Mat) -> Poly:
    return charpoly_array(M.ring, M.data)


def evaluate_poly_at(R, f: Poly, M: np.ndarray) -> np.ndarray:
    """f(M) by Horner's rule."""
    n = M.shape[0]
    acc = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = R.matmul(acc, M)
        acc = R.vadd(acc, (np.eye(n, dtype=np.int64) * c) if c else np.zeros((n, n), dtype=np.int64))
    return acc


def minpoly_array(F, M: np.ndarray) -> Poly:
    """Minimal polynomial over a field from the first linear dependency among powers."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    powers = [np.eye(n, dtype=np.int64).ravel()]
    current = np.eye(n, dtype=np.int64)
    for d in range(1, n + 1):
        current = F.matmul(current, M)
        powers.append(current.ravel())
        stack = np.stack(powers, axis=1)  # n^2 x (d+1)
        ker = kernel_array(F, stack)
        if ker.shape[0]:
            rel = ker[-1]
            # normalize so the top power has coefficient 1
            top = max(i for i in range(d + 1) if rel[i] != 0)
            inv = F.inv(int(rel[top]))
            return Poly(F, tuple(F.mul(int(c), inv) for c in rel[:top + 1]))
    raise RuntimeError("no dependency among powers up to the dimension")


def minpoly(M: Mat) -> Poly:
    return minpoly_array(M.ring, M.data)


# -- Smith forms ---------------------------------------------------------------------

def smith_form_Z(M: Sequence[Sequence[int]]) -> Tuple[List[int], List[List[int]], List[List[int]]]:
    """
    Smith normal form over the integers.

    Args:
        M: integer matrix (list of rows)

    Returns:
        (nonzero elementary divisors d_1 | d_2 | ..., U, V) with U*M*V diagonal
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        A[dst] = [a - c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] -= c * row[src]
        for row in V:
            row[dst] -= c * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        changed = True
            if changed:
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]]
            if bad:
                i, _ = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[i])]
                U[t] = [a + b for a, b in zip(U[t], U[i])]
                continue
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return diag, U, V


def smith_form_local(R: RingDesc, M: np.ndarray) -> Tuple[List[int], np.ndarray, np.ndarray, np.ndarray]:
    """
    Smith-like diagonalization over a chain ring with minimal-valuation pivots.

    Returns:
        (diagonal entries, U, D, V) with U*M*V = D
    """
    A = np.array(M, dtype=np.int64, copy=True)
    m, n = A.shape
    U = np.eye(m, dtype=np.int64)
    V = np.eye(n, dtype=np.int64)
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i, j]:
                    v = R.valuation(int(A[i, j]))
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        _, i, j = best
        A[[t, i]] = A[[i, t]]
        U[[t, i]] = U[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        piv = int(A[t, t])
        for i in range(t + 1, m):
            if A[i, t]:
                c = R.divide(int(A[i, t]), piv)
                A[i] = R.vsub(A[i], R.vmul(np.full(n, c, dtype=np.int64), A[t]))
                U[i] = R.vsub(U[i], R.vmul(np.full(m, c, dtype=np.int64), U[t]))
        for j in range(t + 1, n):
            if A[t, j]:
                c = R.divide(int(A[t, j]), piv)
                A[:, j] = R.vsub(A[:, j], R.vmul(np.full(m, c, dtype=np.int64), A[:, t]))
                V[:, j] = R.vsub(V[:, j], R.vmul(np.full(n, c, dtype=np.int64), V[:, t]))
    diag = [int(A[i, i]) for i in range(min(m, n))]
    return diag, U, A, V


def kernel_local(R: RingDesc, M: np.ndarray) -> Summand:
    """Largest direct summand inside {x : M x = 0} over a chain ring."""
    M = np.asarray(M, dtype=np.int64)
    m, n = M.shape
    diag, _, _, V = smith_form_local(R, M)
    free_dirs = [j for j in range(n) if j >= m or diag[j] == 0]
    if not free_dirs:
        return Summand.zero(R, n)
    return Summand.from_rows(R, n, V[:, free_dirs].T)


# -- text encoding --------------------------------------------------------------------

_TAG = re.compile(r"^\s*(Fq|Zmod|Dual)\[(\d+)(?:,(\d+))?\]\s*:?\s*(.*)$", re.S)


def parse_ring_tag(tag: str):
    m = re.match(r"^\s*(Fq|Zmod|Dual)\[(\d+)(?:,(\d+))?\]\s*$", tag)
    if not m:
        raise InputError(f"unrecognized ring tag {tag!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "Fq":
        return field_create(a, int(b) if b else 1)
    if kind == "Zmod":
        return RingDesc.zmod(a, int(b) if b else 1)
    return RingDesc.dual(a)


def _format_entry(R, x: int) -> str:
    if isinstance(R, FieldDesc):
        return str(x) if R.k == 1 else f"({field_element_encode(R, x)})"
    if R.flavor == "dual":
        return f"({x % R.p},{x // R.p})"
    return str(x)


def _parse_entry(R, text: str) -> int:
    text = text.strip()
    if isinstance(R, FieldDesc):
        return field_element_decode(R, text)
    if R.flavor == "dual":
        parts = [s for s in text.strip("()").split(",") if s.strip()]
        a = int(parts[0]) % R.p
        b = int(parts[1]) % R.p if len(parts) > 1 else 0
        return a + b * R.p
    return R.from_int(int(text))


def parse_matrix(text: str) -> Mat:
    """
    Parse 'Tag[p,k]:row;row' with comma-separated entries.

    Composite entries (extension-field vectors, dual numbers) are wrapped in
    parentheses, e.g. Dual[3]:(1,0),(0,2);0,2
    """
    m = _TAG.match(text)
    if not m:
        raise InputError(f"matrix text must start with a ring tag: {text[:40]!r}")
    tag = f"{m.group(1)}[{m.group(2)}{',' + m.group(3) if m.group(3) else ''}]"
    R = parse_ring_tag(tag)
    rows = []
    for line_no, row in enumerate(m.group(4).strip().split(";"), start=1):
        entries = re.findall(r"\([^)]*\)|[^,\s]+", row)
        try:
            rows.append([_parse_entry(R, e) for e in entries])
        except ValueError as e:
            raise InputError(f"bad matrix entry in row {line_no}: {e}", {"row": line_no})
    if len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    return Mat(R, np.array(rows, dtype=np.int64))


def format_matrix(M: Mat) -> str:
    tag = str(ring_of(M.ring))
    body = ";".join(",".join(_format_entry(M.ring, int(x)) for x in row) for row in M.data)
    return f"{tag}:{body}"
