"""
Invariant direct-summand lifts over Z/p^N and the dual numbers.

Given f over a truncated local ring A and a coprime split of the residual
characteristic polynomial, the factorization is lifted by Hensel's lemma and
the summand ker p(f) is the image of the idempotent q(f) s(f). The same
construction applied to Ad(g) - 1 gives the Lie algebra lift L0 of an
element g of GSp4(A) with semisimple residue.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.algebra.ff import FieldDesc, Poly, field_create, poly_factor, poly_xgcd
from app.algebra.liealg import ClassicalLieData
from app.algebra.linalg import (
    RingDesc,
    Summand,
    charpoly_array,
    evaluate_poly_at,
    inverse_array,
    kernel_array,
    kernel_local,
    matpow,
    summand_saturate,
)
from app.algebra.matgrp import is_semisimple, standard_form
from app.config.settings import settings
from app.models.errors import (
    EigenvaluesNotRational,
    InputError,
    InvariantViolation,
    NotCommuting,
    NotCoprime,
    ResidueNotSemisimple,
)

# Set up logging
logger = logging.getLogger(__name__)


def _residue_field(R: RingDesc) -> FieldDesc:
    return field_create(R.p, 1)


def _to_ring(R: RingDesc, f: Poly) -> Poly:
    """Lift an F_p polynomial coefficientwise (residues are valid encodings)."""
    return Poly(R, f.coeffs)


def _to_residue(R: RingDesc, f: Poly) -> Poly:
    return Poly(_residue_field(R), tuple(R.residue(c) for c in f.coeffs))


def _multiplicity(f: Poly, factor: Poly) -> int:
    m = 0
    while f.degree >= factor.degree and (f % factor).is_zero:
        f = f // factor
        m += 1
    return m


@dataclass
class LiftProblem:
    """f over a chain ring with a coprime split p_bar * q_bar of its residual charpoly."""
    ring: RingDesc
    f: np.ndarray
    p_bar: Poly
    q_bar: Poly

    @classmethod
    def for_factors(cls, ring: RingDesc, f: np.ndarray, factors: Sequence[Poly]) -> "LiftProblem":
        """p_bar collects the given irreducible factors with their full multiplicities."""
        f = np.asarray(f, dtype=np.int64)
        Fp = _residue_field(ring)
        chi_bar = charpoly_array(Fp, ring.vresidue(f))
        p_bar = Poly(Fp, (1,))
        for fac in factors:
            fac = fac.monic()
            for _ in range(_multiplicity(chi_bar, fac)):
                p_bar = p_bar * fac
        return cls(ring, f, p_bar, chi_bar // p_bar)

    @classmethod
    def for_eigenvalue(cls, ring: RingDesc, f: np.ndarray, value: int) -> "LiftProblem":
        Fp = _residue_field(ring)
        return cls.for_factors(ring, f, [Poly.x_minus(Fp, Fp.from_int(value))])

    @property
    def residue_target(self) -> Summand:
        """N_bar = ker p_bar(f_bar)."""
        Fp = _residue_field(self.ring)
        f_bar = self.ring.vresidue(self.f)
        n = f_bar.shape[0]
        basis = kernel_array(Fp, evaluate_poly_at(Fp, self.p_bar, f_bar))
        return Summand.from_rows(Fp, n, basis) if basis.shape[0] else Summand.zero(Fp, n)


def _geometric_inverse(R: RingDesc, u: Poly, steps: int) -> Poly:
    """sum_{k < steps} (1 - u)^k, an inverse of u when 1 - u has nilpotent coefficients."""
    one = Poly(R, (1,))
    t = one - u
    acc, power = one, one
    for _ in range(steps):
        power = power * t
        if power.is_zero:
            break
        acc = acc + power
    return acc


def hensel_factor(ring: RingDesc, chi: Poly, p_bar: Poly, q_bar: Poly) -> Tuple[Poly, Poly, Poly, Poly]:
    """
    Lift chi = p_bar * q_bar (mod p) to chi = p q over the ring.

    Args:
        ring: Z/p^N or the dual numbers
        chi: monic polynomial over the ring
        p_bar, q_bar: monic coprime factors over F_p

    Returns:
        (p, q, r, s) with p q = chi, p and q lifting p_bar and q_bar, r p + s q = 1
    """
    g, r_bar, s_bar = poly_xgcd(p_bar, q_bar)
    if g.degree != 0:
        raise NotCoprime("residual factors share a common factor", {"gcd": str(g)})
    if _to_residue(ring, chi) != p_bar * q_bar:
        raise InputError("residual factors do not multiply to the residual polynomial",
                         {"chi": str(chi), "p_bar": str(p_bar), "q_bar": str(q_bar)})
    p, q = _to_ring(ring, p_bar), _to_ring(ring, q_bar)
    r, s = _to_ring(ring, r_bar), _to_ring(ring, s_bar)
    for _ in range(ring.N):
        e = chi - p * q
        if e.is_zero:
            break
        dp = (e * s) % p
        dq = (e - q * dp) // p
        p, q = p + dp, q + dq
    if not (chi - p * q).is_zero:
        raise InvariantViolation("Hensel iteration did not converge", {"ring": str(ring)})
    # make r p + s q exactly 1
    w = _geometric_inverse(ring, r * p + s * q, ring.N)
    r, s = r * w, s * w
    quot, r = r.divmod(q)
    s = s + quot * p
    check = r * p + s * q
    if check != Poly(ring, (1,)):
        raise InvariantViolation("Bezout identity failed after inversion", {"ring": str(ring)})
    return p, q, r, s


def _idempotents(problem: LiftProblem) -> Tuple[np.ndarray, np.ndarray, Poly]:
    """(e1, e2, p) with e2 = q(f) s(f) projecting onto ker p(f) and e1 = 1 - e2."""
    R, f = problem.ring, problem.f
    chi = charpoly_array(R, f)
    p, q, r, s = hensel_factor(R, chi, problem.p_bar, problem.q_bar)
    e2 = R.matmul(evaluate_poly_at(R, q, f), evaluate_poly_at(R, s, f))
    e1 = R.matmul(evaluate_poly_at(R, p, f), evaluate_poly_at(R, r, f))
    return e1, e2, p


def _image(R, E: np.ndarray) -> Summand:
    n = E.shape[0]
    if not np.any(E):
        return Summand.zero(R, n)
    S = summand_saturate(R, E.T, n)
    if S is None:
        raise InvariantViolation("idempotent image is not a direct summand", {"ring": str(R)})
    return S


def _is_stable(R, S: Summand, f: np.ndarray) -> bool:
    return S.rank == 0 or S.contains(R.matmul(f, S.basis.T).T)


def invariant_summand_lift(problem: LiftProblem) -> Summand:
    """The unique f-stable direct summand reducing to ker p_bar(f_bar)."""
    R, f = problem.ring, problem.f
    e1, e2, _ = _idempotents(problem)
    if not np.array_equal(R.matmul(e2, e2), e2):
        raise InvariantViolation("lifted projector is not idempotent", {"ring": str(R)})
    N = _image(R, e2)
    if not _is_stable(R, N, f):
        raise InvariantViolation("lifted summand is not f-stable", {"ring": str(R)})
    if N.reduce() != problem.residue_target:
        raise InvariantViolation("lifted summand does not reduce to the residual target", {"ring": str(R)})
    logger.debug(f"invariant summand lift over {R}: rank {N.rank} of {f.shape[0]}")
    return N


def family_lift(ring: RingDesc, fs: Sequence[np.ndarray], eigen_tuples: Sequence[Sequence[int]]) -> Summand:
    """
    Image of sum over lambda in S of prod_i e_{i, lambda_i}, for commuting f_i.

    Args:
        ring: coefficient ring
        fs: pairwise commuting square matrices
        eigen_tuples: residual eigenvalue tuples (one entry per matrix)
    """
    R = ring
    fs = [np.asarray(f, dtype=np.int64) for f in fs]
    n = fs[0].shape[0]
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            if not np.array_equal(R.matmul(fs[i], fs[j]), R.matmul(fs[j], fs[i])):
                raise NotCommuting(f"matrices {i} and {j} do not commute", {"pair": [i, j]})
    Fp = _residue_field(R)
    projectors: List[Dict[int, np.ndarray]] = []
    for i, f in enumerate(fs):
        chi_bar = charpoly_array(Fp, R.vresidue(f))
        factors = poly_factor(chi_bar)
        if any(fac.degree > 1 for fac, _ in factors):
            raise EigenvaluesNotRational(f"matrix {i} has residual eigenvalues outside F_{R.p}",
                                         {"charpoly": str(chi_bar)})
        table = {}
        for fac, _ in factors:
            value = Fp.neg(fac.coeffs[0])
            if len(factors) == 1:
                table[value] = np.eye(n, dtype=np.int64)
            else:
                table[value] = _idempotents(LiftProblem.for_factors(R, f, [fac]))[1]
        projectors.append(table)
    total = np.zeros((n, n), dtype=np.int64)
    for lam in eigen_tuples:
        if len(lam) != len(fs):
            raise InputError("eigenvalue tuple length differs from the family size", {"tuple": list(lam)})
        prod = np.eye(n, dtype=np.int64)
        for table, value in zip(projectors, lam):
            value = Fp.from_int(value)
            if value not in table:
                prod = np.zeros((n, n), dtype=np.int64)
                break
            prod = R.matmul(prod, table[value])
        total = R.vadd(total, prod)
    S = _image(R, total)
    for f in fs:
        if not _is_stable(R, S, f):
            raise InvariantViolation("family lift is not stable under every matrix", {"ring": str(R)})
    return S


def topnil_part(ring: RingDesc, f: np.ndarray) -> Summand:
    """Vectors v with f^m v -> 0: the lift of the generalized residual kernel."""
    f = np.asarray(f, dtype=np.int64)
    n = f.shape[0]
    Fp = _residue_field(ring)
    chi_bar = charpoly_array(Fp, ring.vresidue(f))
    x = Poly.monomial(Fp, 1)
    if _multiplicity(chi_bar, x) == 0:
        return Summand.zero(ring, n)
    if chi_bar == Poly.monomial(Fp, n):
        return Summand.full(ring, n)
    return invariant_summand_lift(LiftProblem.for_factors(ring, f, [x]))


def is_topnil_vector(ring: RingDesc, f: np.ndarray, v: np.ndarray) -> bool:
    """f^(n N) v = 0, which in the truncated ring is convergence to zero."""
    f = np.asarray(f, dtype=np.int64)
    w = np.asarray(v, dtype=np.int64).reshape(-1, 1)
    for _ in range(f.shape[0] * ring.N):
        w = ring.matmul(f, w)
    return not np.any(w)


# -- Lie algebra lifts ------------------------------------------------------------------

@dataclass
class LieLift:
    ring: RingDesc
    g: np.ndarray
    lie: ClassicalLieData
    L0: Summand
    L1: Summand


def similitude_over(ring, g: np.ndarray) -> int:
    J = standard_form(ring, "GSp", g.shape[0])
    M = ring.matmul(ring.matmul(g.T, J), g)
    return ring.divide(int(M[0, g.shape[0] - 1]), int(J[0, g.shape[0] - 1]))


def _bracket_closed(lie: ClassicalLieData, S: Summand) -> bool:
    R = lie.ring
    if S.rank == 0:
        return True
    mats = lie.to_matrix(S.basis, "g")
    prods = R.matmul(mats[:, None], mats[None, :])
    comm = R.vsub(prods, np.swapaxes(prods, 0, 1))
    return S.contains(lie.coords(comm, "g").reshape(-1, S.n))


def l0_of(ring: RingDesc, g: np.ndarray, ambient: str = "GSp") -> LieLift:
    """
    L0 = topologically nilpotent part of Ad(g) - 1 on the Lie algebra over the ring.

    Args:
        ring: Z/p^N or the dual numbers
        g: element of GSp4 (or Sp4) over the ring with semisimple residue
        ambient: group g is taken from; it fixes the Lie algebra (gsp or sp) at
            every level, so L0 commutes with reduction to a smaller ring

    Returns:
        LieLift with the Ad(g)-stable decomposition L0 + L1
    """
    g = np.asarray(g, dtype=np.int64)
    n = g.shape[0]
    if ambient not in ("Sp", "GSp"):
        raise InputError(f"L0 is defined inside Sp or GSp, not {ambient}", {"allowed": ["GSp", "Sp"]})
    if ambient == "Sp" and similitude_over(ring, g) != ring.one:
        raise InputError("element is not in Sp over the ring",
                         {"similitude": int(similitude_over(ring, g)), "ring": str(ring)})
    Fp = _residue_field(ring)
    if not is_semisimple(Fp, ring.vresidue(g)):
        raise ResidueNotSemisimple("residue of g is not semisimple", {"ring": str(ring)})
    lie = ClassicalLieData(ring, ambient, n)
    ad = lie.adjoint(g, "g")
    dim = ad.shape[0]
    f = ring.vsub(ad, np.eye(dim, dtype=np.int64))
    chi_bar = charpoly_array(Fp, ring.vresidue(f))
    x = Poly.monomial(Fp, 1)
    if _multiplicity(chi_bar, x) == dim:
        L0, L1 = Summand.full(ring, dim), Summand.zero(ring, dim)
    else:
        problem = LiftProblem.for_factors(ring, f, [x])
        e1, e2, _ = _idempotents(problem)
        L0, L1 = _image(ring, e2), _image(ring, e1)
    if L0.rank + L1.rank != dim or (L0 + L1).rank != dim:
        raise InvariantViolation("L0 and L1 do not span the Lie algebra", {"ranks": [L0.rank, L1.rank]})
    if not (_is_stable(ring, L0, ad) and _is_stable(ring, L1, ad)):
        raise InvariantViolation("L0 or L1 is not Ad(g)-stable", {"ring": str(ring)})
    if not _bracket_closed(lie, L0):
        raise InvariantViolation("L0 is not closed under the bracket", {"ring": str(ring)})
    fixed = kernel_array(Fp, Fp.vsub(ring.vresidue(ad), np.eye(dim, dtype=np.int64)))
    residual = Summand.from_rows(Fp, dim, fixed) if fixed.shape[0] else Summand.zero(Fp, dim)
    if L0.reduce() != residual:
        raise InvariantViolation("L0 does not reduce to the residual fixed subalgebra", {"ring": str(ring)})
    logger.debug(f"L0 over {ring}: rank {L0.rank} in {ambient}{n}")
    return LieLift(ring, g, lie, L0, L1)


def _center_coefficients(lie: ClassicalLieData, S: Summand) -> np.ndarray:
    R = lie.ring
    k = S.rank
    mats = lie.to_matrix(S.basis, "g")
    prods = R.matmul(mats[:, None], mats[None, :])
    comm = R.vsub(prods, np.swapaxes(prods, 0, 1))  # comm[i, j] = [b_i, b_j]
    return np.transpose(comm, (1, 2, 3, 0)).reshape(-1, k)


def center_of_l0(lift: LieLift) -> Summand:
    """Saturated solution of [x, L0] = 0 with x in L0."""
    R, lie, L0 = lift.ring, lift.lie, lift.L0
    if L0.rank == 0:
        return L0
    coeffs = kernel_local(R, _center_coefficients(lie, L0))
    if coeffs.rank == 0:
        return Summand.zero(R, L0.n)
    center = Summand.from_rows(R, L0.n, R.matmul(coeffs.basis, L0.basis))
    Fp = _residue_field(R)
    residual = L0.reduce()
    residue_lie = ClassicalLieData(Fp, lie.ambient, lie.n)
    expected = residue_lie.center_of(residual.basis, "g").shape[0] if residual.rank else 0
    if center.rank != expected:
        raise InvariantViolation("center of L0 does not reduce to the residual center",
                                 {"rank": center.rank, "expected": int(expected)})
    return center


def epsilon_part(lie: ClassicalLieData, g: np.ndarray) -> Summand:
    """
    Over F_p[e]: the X in the residual Lie algebra with 1 + eX commuting with g.
    """
    R = lie.ring
    if R.flavor != "dual":
        raise ValueError("epsilon_part needs the dual numbers")
    Fp = _residue_field(R)
    p = R.p
    X = lie.basis_matrices("g")
    eps_X = R.vmul(X, np.full_like(X, p))
    comm = R.vsub(R.matmul(eps_X, g[None]), R.matmul(g[None], eps_X))
    system = (comm // p).reshape(X.shape[0], -1).T % p
    basis = kernel_array(Fp, system)
    return Summand.from_rows(Fp, X.shape[0], basis) if basis.shape[0] else Summand.zero(Fp, X.shape[0])


# -- sampling -----------------------------------------------------------------------------

def _unipotent(R, i: int, j: int, k: int, l: int, c: int, n: int = 4) -> np.ndarray:
    g = np.eye(n, dtype=np.int64)
    g[i, j] = c
    if k >= 0:
        g[k, l] = R.neg(c)
    return g


def cayley_transform(R, X: np.ndarray) -> np.ndarray:
    """(1 + X)(1 - X)^-1, symplectic for X in sp with 1 - X invertible."""
    n = X.shape[0]
    ident = np.eye(n, dtype=np.int64)
    return R.matmul(R.vadd(ident, X), inverse_array(R, R.vsub(ident, X)))


def random_unit(R, rng: np.random.Generator) -> int:
    while True:
        c = int(rng.integers(R.size))
        if R.is_unit(c):
            return c


def random_sp4_unipotent_word(R, rng: np.random.Generator, length: int = 6) -> np.ndarray:
    shapes = [(0, 1, 2, 3), (1, 0, 3, 2), (1, 2, -1, -1), (2, 1, -1, -1), (0, 3, -1, -1), (3, 0, -1, -1)]
    w = np.eye(4, dtype=np.int64)
    for _ in range(length):
        i, j, k, l = shapes[int(rng.integers(len(shapes)))]
        w = R.matmul(w, _unipotent(R, i, j, k, l, int(rng.integers(R.size))))
    return w


def random_gsp4_element(ring: RingDesc, rng: np.random.Generator, similitude: Optional[int] = None) -> np.ndarray:
    """w t w^-1 cayley(m Y): residue-semisimple, exactly in GSp4 over the ring."""
    R = ring
    a, b = random_unit(R, rng), random_unit(R, rng)
    nu = random_unit(R, rng) if similitude is None else similitude
    t = np.diag([a, b, R.mul(nu, R.inv(b)), R.mul(nu, R.inv(a))]).astype(np.int64)
    w = random_sp4_unipotent_word(R, rng)
    lie = ClassicalLieData(R, "Sp", 4)
    Y = lie.to_matrix(rng.integers(R.size, size=lie.dim0))
    X = R.vmul(Y, np.full_like(Y, R.uniformizer))
    return R.matmul(R.matmul(R.matmul(w, t), inverse_array(R, w)), cayley_transform(R, X))


def random_topnil_element(ring: RingDesc, rng: np.random.Generator) -> np.ndarray:
    """h = cayley(m Y) with Y in sp4, so h reduces to 1."""
    lie = ClassicalLieData(ring, "Sp", 4)
    Y = lie.to_matrix(rng.integers(ring.size, size=lie.dim0))
    return cayley_transform(ring, ring.vmul(Y, np.full_like(Y, ring.uniformizer)))


# -- property suite -----------------------------------------------------------------------

def invariant_lines_bruteforce(ring: RingDesc, f: np.ndarray, target: Summand) -> List[Summand]:
    """Every f-stable rank-one direct summand of A^2 reducing to the given line."""
    f = np.asarray(f, dtype=np.int64)
    found = {}
    size = ring.size
    for a in range(size):
        for b in range(size):
            v = np.array([a, b], dtype=np.int64)
            if not np.any(ring.vresidue(v)):
                continue
            S = summand_saturate(ring, v[None], 2)
            if S is None or not _is_stable(ring, S, f) or S.reduce() != target:
                continue
            found[S.basis.tobytes()] = S
    return list(found.values())


@dataclass
class PropertyTally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0

    def record(self, ok: Optional[bool]) -> None:
        if ok is None:
            self.skipped += 1
        elif ok:
            self.passed += 1
        else:
            self.failed += 1


@dataclass
class LiftCheckSummary:
    seed: int
    trials: int
    ring: str
    properties: Dict[str, PropertyTally] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.properties.values())


def _check_uniqueness(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    f = rng.integers(ring.size, size=(2, 2))
    Fp = _residue_field(ring)
    factors = poly_factor(charpoly_array(Fp, ring.vresidue(f)))
    simple = [fac for fac, m in factors if fac.degree == 1 and m == 1]
    if len(simple) != 2:
        return None
    problem = LiftProblem.for_factors(ring, f, [simple[0]])
    N = invariant_summand_lift(problem)
    lines = invariant_lines_bruteforce(ring, f, problem.residue_target)
    return len(lines) == 1 and lines[0] == N


def _check_containment(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    f = rng.integers(ring.size, size=(3, 3))
    Fp = _residue_field(ring)
    factors = poly_factor(charpoly_array(Fp, ring.vresidue(f)))
    if len(factors) < 2:
        return None
    small = invariant_summand_lift(LiftProblem.for_factors(ring, f, [factors[0][0]]))
    large = invariant_summand_lift(LiftProblem.for_factors(ring, f, [factors[0][0], factors[1][0]]))
    return large.contains_summand(small)


def _check_conjugation(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    g = random_gsp4_element(ring, rng)
    h = random_topnil_element(ring, rng)
    base = l0_of(ring, g)
    moved = l0_of(ring, ring.matmul(ring.matmul(h, g), inverse_array(ring, h)))
    ad_h = base.lie.adjoint(h, "g")
    image = Summand.from_rows(ring, base.L0.n, ring.matmul(ad_h, base.L0.basis.T).T) \
        if base.L0.rank else base.L0
    return image == moved.L0


def _residue_order(ring: RingDesc, g: np.ndarray) -> int:
    Fp = _residue_field(ring)
    g_bar = ring.vresidue(g)
    ident = np.eye(g.shape[0], dtype=np.int64)
    w, m = g_bar, 1
    while not np.array_equal(w, ident):
        if m > Fp.p ** 8:
            raise InvariantViolation("residue of g has no finite order", {"ring": str(ring)})
        w = Fp.matmul(w, g_bar)
        m += 1
    return m


def _check_centralizer_translation(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    # h = g^(m k) reduces to 1 and commutes with g
    g = random_gsp4_element(ring, rng)
    base = l0_of(ring, g)
    h = matpow(ring, g, _residue_order(ring, g) * int(rng.integers(1, ring.p + 1)))
    if not np.array_equal(ring.vresidue(h), np.eye(4, dtype=np.int64)):
        raise InvariantViolation("centralizer element does not reduce to 1", {"ring": str(ring)})
    return l0_of(ring, ring.matmul(g, h)).L0 == base.L0


def _check_change_of_ring(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    if ring.flavor != "zmod" or ring.N < 2:
        return None
    g = random_gsp4_element(ring, rng)
    lower = RingDesc.zmod(ring.p, ring.N - 1)
    top = l0_of(ring, g)
    bottom = l0_of(lower, ring.reduce_to(g, lower.N))
    if top.L0.rank == 0:
        return bottom.L0.rank == 0
    return Summand.from_rows(lower, top.L0.n, ring.reduce_to(top.L0.basis, lower.N)) == bottom.L0


def _check_dual_numbers(p: int, rng: np.random.Generator) -> Optional[bool]:
    R = RingDesc.dual(p)
    Fp = _residue_field(R)
    g_bar = random_gsp4_element(RingDesc.zmod(p, 1), rng)
    residue_lie = ClassicalLieData(Fp, "GSp", 4)
    fixed = residue_lie.fixed_space(g_bar, "g")
    if fixed.shape[0] == 0:
        return None
    delta = residue_lie.to_matrix(Fp.matmul(rng.integers(p, size=(1, fixed.shape[0])), fixed)[0], "g")
    # g = g_bar (1 + e delta)
    g = R.vadd(g_bar, R.vmul(Fp.matmul(g_bar, delta), np.full_like(g_bar, p)))
    lie = ClassicalLieData(R, "GSp", 4)
    expected = Summand.from_rows(Fp, fixed.shape[1], fixed)
    return epsilon_part(lie, g) == expected


def _check_bracket(ring: RingDesc, rng: np.random.Generator) -> Optional[bool]:
    lift = l0_of(ring, random_gsp4_element(ring, rng))
    return _bracket_closed(lift.lie, lift.L0)


def lift_check(seed: Optional[int] = None, trials: int = 5, p: int = 3, N: int = 2) -> LiftCheckSummary:
    """Randomized property suite for the summand and Lie algebra lifts."""
    seed = settings.SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    ring = RingDesc.zmod(p, N)
    checks = {
        "uniqueness": lambda: _check_uniqueness(ring, rng),
        "monotone_containment": lambda: _check_containment(ring, rng),
        "conjugation": lambda: _check_conjugation(ring, rng),
        "centralizer_translation": lambda: _check_centralizer_translation(ring, rng),
        "change_of_ring": lambda: _check_change_of_ring(ring, rng),
        "dual_numbers": lambda: _check_dual_numbers(p, rng),
        "bracket_closure": lambda: _check_bracket(ring, rng),
    }
    summary = LiftCheckSummary(seed, trials, str(ring), {name: PropertyTally() for name in checks})
    for _ in range(trials):
        for name, check in checks.items():
            try:
                summary.properties[name].record(check())
            except (NotCoprime, ResidueNotSemisimple, EigenvaluesNotRational) as e:
                logger.debug(f"{name}: skipped sample ({e.code})")
                summary.properties[name].record(None)
            except InvariantViolation as e:
                logger.warning(f"{name}: {e.message}")
                summary.properties[name].record(False)
    logger.info(f"lift-check over {ring} with seed {seed}: {'ok' if summary.ok else 'FAILED'}")
    return summary
