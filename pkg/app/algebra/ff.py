"""
Finite field arithmetic.

Elements of F_{p^k} are stored as canonical integer indices: the coefficient
vector (c_0, ..., c_{k-1}) over the basis 1, t, ..., t^{k-1} is encoded as
c_0 + c_1 p + ... + c_{k-1} p^{k-1}. For k = 1 the index is the residue itself.
Scalar helpers work on Python ints, the v-prefixed helpers on numpy arrays.
"""
import logging
import math
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Sequence, Tuple

import numpy as np
import sympy

# Set up logging
logger = logging.getLogger(__name__)

# Largest field order for which addition/multiplication tables are built
TABLE_LIMIT = 4096
# Exhaustive root search is used up to this field order
ROOT_SEARCH_LIMIT = 10_000
# Seed for the equal-degree splitting step
FACTOR_SEED = 1729


@dataclass(frozen=True)
class FieldDesc:
    """A finite field F_{p^k} with a fixed monic irreducible modulus."""
    p: int
    k: int
    modulus: Tuple[int, ...]  # low to high, length k + 1, monic

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def is_prime(self) -> bool:
        return self.k == 1

    zero = 0
    one = 1

    def __str__(self) -> str:
        return f"F_{self.p}" if self.k == 1 else f"F_{self.p}^{self.k}"

    # -- encoding ---------------------------------------------------------

    def encode_vector(self, coeffs: Sequence[int]) -> int:
        """Coefficient vector (length k) to canonical index."""
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        index = 0
        for c in reversed(coeffs):
            index = index * self.p + (int(c) % self.p)
        return index

    def decode_index(self, index: int) -> List[int]:
        """Canonical index to coefficient vector."""
        out = []
        for _ in range(self.k):
            index, c = divmod(int(index), self.p)
            out.append(c)
        return out

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F."""
        return int(n) % self.p

    @cached_property
    def _digits(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        powers = self.p ** np.arange(self.k, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.p

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    @cached_property
    def _companion(self) -> np.ndarray:
        """Multiplication-by-t matrix on coefficient vectors."""
        T = np.zeros((self.k, self.k), dtype=np.int64)
        for i in range(1, self.k):
            T[i, i - 1] = 1
        for i in range(self.k):
            T[i, self.k - 1] = (-self.modulus[i]) % self.p
        return T

    def _mult_matrix(self, a: int) -> np.ndarray:
        coeffs = self.decode_index(a)
        M = np.zeros((self.k, self.k), dtype=np.int64)
        Tp = np.eye(self.k, dtype=np.int64)
        for c in coeffs:
            if c:
                M = (M + c * Tp) % self.p
            Tp = (Tp @ self._companion) % self.p
        return M

    # -- tables for extension fields ---------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        D = self._digits
        return (((D[:, None, :] + D[None, :, :]) % self.p) @ self._powers).astype(np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        D = self._digits
        T = self._companion
        # M[a] = sum_i a_i T^i
        M = np.zeros((self.q, self.k, self.k), dtype=np.int64)
        Tp = np.eye(self.k, dtype=np.int64)
        for i in range(self.k):
            M = (M + D[:, i, None, None] * Tp[None, :, :]) % self.p
            Tp = (Tp @ T) % self.p
        prod = np.einsum("aij,bj->abi", M, D) % self.p
        return (prod @ self._powers).astype(np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return (((-self._digits) % self.p) @ self._powers).astype(np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        table = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        table[rows] = cols
        return table

    @property
    def _tabled(self) -> bool:
        return self.k > 1 and self.q <= TABLE_LIMIT

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._tabled:
            return int(self.add_table[a, b])
        return self.encode_vector([(x + y) % self.p for x, y in zip(self.decode_index(a), self.decode_index(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode_vector([(-x) % self.p for x in self.decode_index(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self._tabled:
            return int(self.mul_table[a, b])
        v = (self._mult_matrix(a) @ np.array(self.decode_index(b), dtype=np.int64)) % self.p
        return self.encode_vector(v.tolist())

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(int(a), self.p - 2, self.p)
        if self._tabled:
            return int(self.inv_table[a])
        return self.pow(a, self.q - 2)

    def is_unit(self, a: int) -> bool:
        return a != 0

    def residue(self, a: int) -> int:
        return a

    def valuation(self, a: int) -> int:
        return 0 if a else 1

    # -- vectorized arithmetic ------------------------------------------------

    def vadd(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (A + B) % self.p
        if self._tabled:
            return self.add_table[A, B]
        return np.frompyfunc(self.add, 2, 1)(A, B).astype(np.int64)

    def vneg(self, A: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-A) % self.p
        if self._tabled:
            return self.neg_table[A]
        return np.frompyfunc(self.neg, 1, 1)(A).astype(np.int64)

    def vsub(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (A - B) % self.p
        return self.vadd(A, self.vneg(B))

    def vmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (A * B) % self.p
        if self._tabled:
            return self.mul_table[A, B]
        return np.frompyfunc(self.mul, 2, 1)(A, B).astype(np.int64)

    def vinv(self, A: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return np.array([pow(int(a), self.p - 2, self.p) for a in np.ravel(A)],
                            dtype=np.int64).reshape(np.shape(A))
        if self._tabled:
            return self.inv_table[A]
        return np.frompyfunc(self.inv, 1, 1)(A).astype(np.int64)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched matrix product over the field (numpy broadcasting rules)."""
        if self.k == 1:
            return np.matmul(A, B) % self.p
        A = np.asarray(A)
        B = np.asarray(B)
        inner = A.shape[-1]
        out = None
        for j in range(inner):
            term = self.vmul(A[..., :, j, None], B[..., None, j, :])
            out = term if out is None else self.vadd(out, term)
        return out

    def all_elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)


# -- field construction -------------------------------------------------------

@lru_cache(maxsize=None)
def field_create(p: int, k: int = 1) -> FieldDesc:
    """
    Create F_{p^k} with the lexicographically least monic irreducible modulus.

    Candidates x^k + c_{k-1} x^{k-1} + ... + c_0 are ordered with c_{k-1}
    most significant.

    Args:
        p: Prime characteristic (odd)
        k: Extension degree

    Returns:
        The field descriptor
    """
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    if k < 1:
        raise ValueError(f"extension degree must be positive, got {k}")
    if k == 1:
        return FieldDesc(p, 1, (0, 1))

    prime = FieldDesc(p, 1, (0, 1))
    for m in range(p ** k):
        coeffs = []
        for _ in range(k):
            m, c = divmod(m, p)
            coeffs.append(c)
        candidate = Poly(prime, tuple(coeffs) + (1,))
        if is_irreducible(candidate):
            logger.debug(f"Modulus for F_{p}^{k}: {candidate}")
            return FieldDesc(p, k, tuple(coeffs) + (1,))
    raise RuntimeError(f"no irreducible polynomial of degree {k} over F_{p}")


@lru_cache(maxsize=None)
def prime_field(ell: int) -> FieldDesc:
    """Z/ell as coefficients for Hom(G, Z/ell); ell = 2 is allowed here."""
    if not sympy.isprime(ell):
        raise ValueError(f"{ell} is not prime")
    return FieldDesc(ell, 1, (0, 1))


def field_element_encode(F: FieldDesc, x: int) -> str:
    """Text encoding: k comma-separated coefficients."""
    return ",".join(str(c) for c in F.decode_index(x))


def field_element_decode(F: FieldDesc, text) -> int:
    """Inverse of field_element_encode; plain integers are accepted for any k."""
    if isinstance(text, (int, np.integer)):
        return int(text) % F.p if F.k == 1 else F.encode_vector([int(text)] + [0] * (F.k - 1))
    parts = [s for s in str(text).strip().strip("()").split(",") if s.strip() != ""]
    if len(parts) == 1:
        return field_element_decode(F, int(parts[0]))
    return F.encode_vector([int(s) for s in parts])


def element_order(F: FieldDesc, x: int) -> int:
    """Multiplicative order of a nonzero element."""
    if x == 0:
        raise ValueError("zero has no multiplicative order")
    order = F.q - 1
    for r in sympy.factorint(order):
        while order % r == 0 and F.pow(x, order // r) == 1:
            order //= r
    return order


@lru_cache(maxsize=None)
def primitive_element(F: FieldDesc) -> int:
    """Least index generating F^x."""
    for x in range(1, F.q):
        if element_order(F, x) == F.q - 1:
            return x
    raise RuntimeError(f"{F} has no primitive element")


def frobenius(F: FieldDesc, x: int) -> int:
    return F.pow(x, F.p)


# -- polynomials --------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """
    Univariate polynomial, coefficients low to high.

    The base is any object with the scalar ring protocol of FieldDesc
    (add, sub, mul, neg, inv, is_unit); trailing zeros are stripped.
    """
    base: object
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and i > 0:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    @classmethod
    def monomial(cls, base, degree: int, c: int = 1) -> "Poly":
        return cls(base, (0,) * degree + (c,))

    @classmethod
    def const(cls, base, c: int) -> "Poly":
        return cls(base, (c,))

    @classmethod
    def x_minus(cls, base, a: int) -> "Poly":
        return cls(base, (base.neg(a), 1))

    def __add__(self, other: "Poly") -> "Poly":
        R = self.base
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(R, tuple(R.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.base, tuple(self.base.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        R = self.base
        if self.is_zero or other.is_zero:
            return Poly(R, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = R.add(out[i + j], R.mul(a, b))
        return Poly(R, tuple(out))

    def scale(self, c: int) -> "Poly":
        return Poly(self.base, tuple(self.base.mul(c, x) for x in self.coeffs))

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Division with remainder; the divisor's leading coefficient must be a unit."""
        R = self.base
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if not R.is_unit(other.lead):
            raise ValueError("divisor leading coefficient is not a unit")
        inv_lead = R.inv(other.lead)
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(R, ()), self
        quot = [0] * (len(rem) - dq)
        for i in range(len(rem) - 1 - dq, -1, -1):
            c = R.mul(rem[i + dq], inv_lead)
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = R.sub(rem[i + j], R.mul(c, b))
        return Poly(R, tuple(quot)), Poly(R, tuple(rem[:dq]))

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(self.base.inv(self.lead))

    def derivative(self) -> "Poly":
        R = self.base
        return Poly(R, tuple(R.mul(R.from_int(i), c) for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, x: int) -> int:
        R = self.base
        acc = 0
        for c in reversed(self.coeffs):
            acc = R.add(R.mul(acc, x), c)
        return acc

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly(self.base, (1,)) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over a field."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g monic, over a field."""
    R = a.base
    r0, r1 = a, b
    s0, s1 = Poly(R, (1,)), Poly(R, ())
    t0, t1 = Poly(R, ()), Poly(R, (1,))
    while not r1.is_zero:
        quot, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        t0, t1 = t1, t0 - quot * t1
    if r0.is_zero:
        return r0, s0, t0
    inv = R.inv(r0.lead)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def is_irreducible(f: Poly) -> bool:
    """Rabin's irreducibility test over a finite field."""
    F = f.base
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    x = Poly.monomial(F, 1)
    if (x.powmod(F.q ** n, f) - x) % f != Poly(F, ()):
        return False
    for r in sympy.primefactors(n):
        h = x.powmod(F.q ** (n // r), f) - x
        if poly_gcd(f, h).degree != 0:
            return False
    return True


def _pth_root(f: Poly) -> Poly:
    F = f.base
    e = F.q // F.p  # a^(q/p) is the p-th root of a
    coeffs = [F.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), F.p)]
    return Poly(F, tuple(coeffs))


def _squarefree(f: Poly) -> List[Tuple[Poly, int]]:
    one = Poly(f.base, (1,))
    out = []
    c = poly_gcd(f, f.derivative())
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac.monic(), i))
        w, c, i = y, c // y, i + 1
    if c.degree > 0:
        p = f.base.p
        for g, m in _squarefree(_pth_root(c.monic())):
            out.append((g, m * p))
    return [(g, m) for g, m in out if g != one]


def _distinct_degree(f: Poly) -> List[Tuple[Poly, int]]:
    F = f.base
    x = Poly.monomial(F, 1)
    out = []
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(F.q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _roots_by_search(f: Poly) -> List[int]:
    F = f.base
    xs = F.all_elements()
    acc = np.zeros_like(xs)
    for c in reversed(f.coeffs):
        acc = F.vadd(F.vmul(acc, xs), np.full_like(xs, c))
    return [int(r) for r in xs[acc == 0]]


def _equal_degree(f: Poly, d: int, rng: random.Random) -> List[Poly]:
    F = f.base
    if f.degree == d:
        return [f.monic()]
    if d == 1 and F.q <= ROOT_SEARCH_LIMIT:
        return [Poly.x_minus(F, r) for r in _roots_by_search(f)]
    exponent = (F.q ** d - 1) // 2
    one = Poly(F, (1,))
    while True:
        a = Poly(F, tuple(rng.randrange(F.q) for _ in range(f.degree)))
        if a.degree < 1:
            continue
        b = a.powmod(exponent, f) - one
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def poly_factor(f: Poly) -> List[Tuple[Poly, int]]:
    """
    Factor a nonzero polynomial over a finite field into monic irreducibles.

    Args:
        f: Polynomial over a FieldDesc

    Returns:
        Sorted list of (irreducible factor, multiplicity)
    """
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    f = f.monic()
    rng = random.Random(FACTOR_SEED)
    result = {}
    for g, m in _squarefree(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                result[irr] = result.get(irr, 0) + m
    return sorted(result.items(), key=lambda item: (item[0].degree, item[0].coeffs))


def roots_in_splitting_field(f: Poly) -> Tuple[FieldDesc, List[int]]:
    """
    Roots of an F_p-polynomial in its splitting field F_{p^L}.

    Args:
        f: Nonzero polynomial over a prime field

    Returns:
        (F_{p^L}, sorted multiset of root indices), L = lcm of factor degrees
    """
    if f.is_zero:
        raise ValueError("the zero polynomial has no root multiset")
    if not f.base.is_prime:
        raise ValueError("roots_in_splitting_field expects a prime-field polynomial")
    factors = poly_factor(f)
    L = 1
    for g, _ in factors:
        L = L * g.degree // math.gcd(L, g.degree)
    E = field_create(f.base.p, L)
    rng = random.Random(FACTOR_SEED)
    roots = []
    for g, m in factors:
        lifted = Poly(E, g.coeffs)  # prime-field indices embed as constants
        if lifted.degree == 0:
            continue
        linear = _equal_degree(lifted, 1, rng)
        for lin in linear:
            roots.extend([E.neg(lin.coeffs[0])] * m)
    return E, sorted(roots)
