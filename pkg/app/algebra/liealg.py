"""
Classical Lie algebras, centers of centralizers, spanning conditions and root data.

Matrices in gl_n are flattened row-major; an element of a Lie algebra is
stored by its coordinates in the canonical (reduced echelon) basis of that
algebra, which are simply its entries at the basis pivot positions.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.algebra.ff import FieldDesc, Poly, poly_gcd
from app.algebra.linalg import (
    Summand,
    charpoly_array,
    evaluate_poly_at,
    inverse_array,
    kernel_array,
    minpoly_array,
    rref_array,
    smith_form_Z,
)
from app.algebra.matgrp import EnumeratedGroup, is_semisimple, standard_form
from app.algebra.repmod import GModule, dual, module_from_map, simple_submodules, spin
from app.config.settings import settings
from app.models.errors import InputError, NotSemisimple, ResidueConditionViolated, SubsetBudgetExceeded

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LieFrame:
    """A Lie subalgebra of gl_n with its canonical basis."""
    basis: np.ndarray          # (dim, n*n)
    pivots: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


class ClassicalLieData:
    """
    g-hat and g-hat-zero for a classical ambient group over a field or chain ring.

    Sp/SO/O: g = {A : A^T J + J A = 0}, with complement m = {A : A^T J - J A = 0}.
    GSp: g = sp + scalars, g0 = sp. GL: g = gl, g0 = sl. SL: g = g0 = sl.
    """

    def __init__(self, ring, ambient: str, n: int, form: Optional[np.ndarray] = None):
        if ambient not in ("GL", "SL", "Sp", "GSp", "SO", "O"):
            raise InputError(f"no Lie data for ambient {ambient!r}")
        if ring.p == 2:
            raise ValueError("characteristic 2 is not supported")
        self.ring = ring
        self.ambient = ambient
        self.n = n
        self.J = None if ambient in ("GL", "SL") else (
            standard_form(ring, ambient, n) if form is None else np.asarray(form, dtype=np.int64))
        if ambient in ("GL", "SL") and n % ring.p == 0:
            raise InputError(f"gl_{n} = sl_{n} + scalars needs p not dividing {n}")

    def __repr__(self) -> str:
        return f"ClassicalLieData({self.ambient}{self.n} over {self.ring})"

    # -- frames --

    def _form_constraint(self, sign: int) -> np.ndarray:
        """Matrix of A -> A^T J + sign * J A on flattened matrices."""
        R, n, J = self.ring, self.n, self.J
        ident = np.eye(n, dtype=np.int64)
        # (A^T J)[i,j] = sum_k A[k,i] J[k,j]; (J A)[i,j] = sum_k J[i,k] A[k,j]
        t1 = np.einsum("li,kj->ijkl", ident, J).reshape(n * n, n * n)
        t2 = np.einsum("ik,lj->ijkl", J, ident).reshape(n * n, n * n)
        return R.vadd(t1, t2) if sign > 0 else R.vsub(t1, t2)

    def _frame(self, rows: np.ndarray) -> LieFrame:
        red, pivots, _ = rref_array(self.ring, rows)
        return LieFrame(red, tuple(pivots))

    @cached_property
    def g0(self) -> LieFrame:
        R, n = self.ring, self.n
        if self.ambient in ("GL", "SL"):
            trace = np.eye(n, dtype=np.int64).reshape(1, n * n)
            return self._frame(kernel_array(R, trace))
        return self._frame(kernel_array(R, self._form_constraint(+1)))

    @cached_property
    def g(self) -> LieFrame:
        n = self.n
        if self.ambient == "GL":
            return self._frame(np.eye(n * n, dtype=np.int64))
        if self.ambient == "GSp":
            scalars = np.eye(n, dtype=np.int64).reshape(1, n * n)
            return self._frame(np.concatenate([self.g0.basis, scalars]))
        return self.g0

    @cached_property
    def m_basis(self) -> np.ndarray:
        """Basis of the complement m of g0 in gl_n."""
        R, n = self.ring, self.n
        if self.ambient in ("GL", "SL"):
            return np.eye(n, dtype=np.int64).reshape(1, n * n)
        return rref_array(R, kernel_array(R, self._form_constraint(-1)))[0]

    @property
    def dim(self) -> int:
        return self.g.dim

    @property
    def dim0(self) -> int:
        return self.g0.dim

    @property
    def rank(self) -> int:
        """Rank of the derived group."""
        if self.ambient in ("GL", "SL"):
            return self.n - 1
        return self.n // 2

    def frame(self, space: str = "g0") -> LieFrame:
        return self.g0 if space == "g0" else self.g

    # -- coordinates --

    def coords(self, mats: np.ndarray, space: str = "g0") -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64)
        flat = mats.reshape(mats.shape[:-2] + (self.n * self.n,))
        return flat[..., list(self.frame(space).pivots)]

    def to_matrix(self, coords: np.ndarray, space: str = "g0") -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        fr = self.frame(space)
        lead = coords.shape[:-1]
        flat = self.ring.matmul(coords.reshape(-1, fr.dim), fr.basis)
        return flat.reshape(lead + (self.n, self.n))

    def basis_matrices(self, space: str = "g0") -> np.ndarray:
        return self.frame(space).basis.reshape(-1, self.n, self.n)

    def contains(self, A: np.ndarray, space: str = "g0") -> bool:
        A = np.asarray(A, dtype=np.int64)
        return bool(np.array_equal(self.to_matrix(self.coords(A, space), space), A))

    def project(self, A: np.ndarray) -> np.ndarray:
        """pi: gl_n -> g0 along m."""
        R, n = self.ring, self.n
        A = np.asarray(A, dtype=np.int64)
        if self.ambient in ("GL", "SL"):
            tr = 0
            for i in range(n):
                tr = R.add(tr, int(A[i, i]))
            shift = R.mul(tr, R.inv(R.from_int(n)))
            return R.vsub(A, np.eye(n, dtype=np.int64) * shift)
        J = self.J
        J_inv = inverse_array(R, J)
        twisted = R.matmul(R.matmul(J_inv, A.T), J)
        half = R.inv(R.from_int(2))
        diff = R.vsub(A, twisted)
        return R.vmul(diff, np.full_like(diff, half))

    # -- adjoint action --

    def adjoint(self, gs: np.ndarray, space: str = "g0") -> np.ndarray:
        """Ad(g) in the canonical basis; accepts one matrix or a stack."""
        R = self.ring
        gs = np.asarray(gs, dtype=np.int64)
        single = gs.ndim == 2
        gs = gs[None] if single else gs
        X = self.basis_matrices(space)
        out = []
        for g in gs:
            g_inv = inverse_array(R, g)
            conj = R.matmul(R.matmul(g[None], X), g_inv[None])
            out.append(self.coords(conj, space).T)
        out = np.stack(out)
        return out[0] if single else out

    def adjoint_module(self, G: EnumeratedGroup) -> GModule:
        return module_from_map(G, lambda mats: self.adjoint(mats), self.ring, "adjoint")

    def adjoint_dual_module(self, G: EnumeratedGroup) -> GModule:
        return dual(self.adjoint_module(G))

    def fixed_space(self, g: np.ndarray, space: str = "g0") -> np.ndarray:
        """Coordinates (rows) of the fixed subalgebra g^Ad(g)."""
        R = self.ring
        A = self.adjoint(g, space)
        return kernel_array(R, R.vsub(A, np.eye(A.shape[0], dtype=np.int64)))

    def fixed_dim(self, g: np.ndarray) -> int:
        return int(self.fixed_space(g).shape[0])

    # -- brackets --

    def bracket(self, x: np.ndarray, y: np.ndarray, space: str = "g0") -> np.ndarray:
        R = self.ring
        X, Y = self.to_matrix(x, space), self.to_matrix(y, space)
        return self.coords(R.vsub(R.matmul(X, Y), R.matmul(Y, X)), space)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """c[i, j] = coordinates of [X_i, X_j] in g0."""
        R = self.ring
        X = self.basis_matrices("g0")
        prod = R.matmul(X[:, None], X[None, :])
        return self.coords(R.vsub(prod, np.swapaxes(prod, 0, 1)), "g0")

    def ad(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ad(a) on g0 (columns are images of basis vectors)."""
        R = self.ring
        c = self.structure_constants  # (d, d, d)
        d = self.dim0
        out = np.zeros((d, d), dtype=np.int64)
        for i, ai in enumerate(np.asarray(a, dtype=np.int64)):
            if ai:
                out = R.vadd(out, R.vmul(c[i].T, np.full((d, d), int(ai), dtype=np.int64)))
        return out

    def center_of(self, rows: np.ndarray, space: str = "g0") -> np.ndarray:
        """Center of the subalgebra spanned by the given coordinate rows (over a field)."""
        R = self.ring
        rows = np.asarray(rows, dtype=np.int64)
        k = rows.shape[0]
        if k == 0:
            return rows
        mats = self.to_matrix(rows, space)
        blocks = []
        for j in range(k):
            comm = R.vsub(R.matmul(mats, mats[j][None]), R.matmul(mats[j][None], mats))
            blocks.append(comm.reshape(k, -1).T)
        system = np.concatenate(blocks)  # sum_i c_i [X_i, X_j] = 0 for all j
        sol = kernel_array(R, system)
        if sol.shape[0] == 0:
            return np.zeros((0, rows.shape[1]), dtype=np.int64)
        return rref_array(R, R.matmul(sol, rows))[0]


# -- centers of centralizers ---------------------------------------------------------

def _require_semisimple(F: FieldDesc, gamma: np.ndarray) -> Poly:
    m = minpoly_array(F, gamma)
    if poly_gcd(m, m.derivative()).degree > 0:
        raise NotSemisimple("element is not semisimple", {"minpoly": str(m)})
    return m


def z_centralizer_gl(F: FieldDesc, gamma: np.ndarray) -> Summand:
    """Span of the powers of gamma: the center of its centralizer in gl_n."""
    gamma = np.asarray(gamma, dtype=np.int64)
    n = gamma.shape[0]
    m = _require_semisimple(F, gamma)
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(m.degree - 1):
        powers.append(F.matmul(powers[-1], gamma))
    return Summand.from_rows(F, n * n, np.stack(powers).reshape(len(powers), n * n))


@dataclass
class LieZ:
    """Lie Z(M_gamma) intersected with g0, in g0 coordinates."""
    space: np.ndarray
    lower_bound: bool = False
    corrected: bool = False

    @property
    def dim(self) -> int:
        return int(self.space.shape[0])


def _eigen_multiplicity(F: FieldDesc, gamma: np.ndarray, value: int) -> int:
    n = gamma.shape[0]
    shifted = F.vsub(gamma, np.eye(n, dtype=np.int64) * value)
    return int(kernel_array(F, shifted).shape[0])


def _so_block_algebra(lie: ClassicalLieData, gamma: np.ndarray, alpha: int, m: Poly) -> np.ndarray:
    """so(V_alpha): elements A of g0 with A = P A P, P the projector to the alpha-eigenspace."""
    F = lie.ring
    cofactor = m // Poly.x_minus(F, alpha)
    P = evaluate_poly_at(F, cofactor.scale(F.inv(cofactor.evaluate(alpha))), gamma)
    X = lie.basis_matrices("g0")
    sandwiched = F.matmul(F.matmul(P[None], X), P[None])
    diff = F.vsub(sandwiched, X).reshape(X.shape[0], -1)
    sol = kernel_array(F, diff.T)
    return sol


def lieZ_of_centralizer(gamma: np.ndarray, lie: ClassicalLieData) -> LieZ:
    """
    Lie Z(M_gamma) intersected with g0 as pi of the span of the powers of gamma.

    For SO/O the one-dimensional so(V_{+-1}) is adjoined when the +-1
    multiplicities are {0, 2}; when 2 occurs with both multiplicities positive
    the result is only a lower bound.
    """
    F = lie.ring
    gamma = np.asarray(gamma, dtype=np.int64)
    n = gamma.shape[0]
    z = z_centralizer_gl(F, gamma)
    projected = np.stack([lie.project(b.reshape(n, n)) for b in z.basis])
    rows = lie.coords(projected)
    result = LieZ(rref_array(F, rows)[0])
    if lie.ambient in ("SO", "O"):
        m1 = _eigen_multiplicity(F, gamma, 1)
        m_1 = _eigen_multiplicity(F, gamma, F.neg(1))
        if {m1, m_1} == {0, 2}:
            alpha = 1 if m1 == 2 else F.neg(1)
            extra = _so_block_algebra(lie, gamma, alpha, minpoly_array(F, gamma))
            result = LieZ(rref_array(F, np.concatenate([result.space, extra]))[0], corrected=True)
        elif 2 in (m1, m_1) and m1 > 0 and m_1 > 0:
            result.lower_bound = True
    return result


# -- spanning conditions --------------------------------------------------------------

@dataclass
class SpanResult:
    verdict: Optional[bool]   # None means INDETERMINATE
    dim: int
    lower_bound: bool = False
    contributors: int = 0


def _semisimple_reps(G: EnumeratedGroup) -> np.ndarray:
    reps = G.classes.reps
    orders = G.element_orders(reps)
    return reps[orders % G.field.p != 0]


def regular_semisimple_reps(G: EnumeratedGroup, lie: ClassicalLieData) -> np.ndarray:
    reps = _semisimple_reps(G)
    return np.array([i for i in reps if lie.fixed_dim(G.elements[i]) == lie.rank], dtype=np.int64)


def _module_closure(G: EnumeratedGroup, lie: ClassicalLieData, rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    return spin(lie.ring, rows, lie.adjoint(G.generators))


def spanning_sum_A(G: EnumeratedGroup, lie: ClassicalLieData) -> SpanResult:
    """Does the sum over semisimple gamma of Lie Z(M_gamma) meet g0 in all of g0?"""
    rows, lower = [], False
    reps = _semisimple_reps(G)
    for i in reps:
        lz = lieZ_of_centralizer(G.elements[i], lie)
        lower |= lz.lower_bound
        if lz.dim:
            rows.append(lz.space)
    span = np.concatenate(rows) if rows else np.zeros((0, lie.dim0), dtype=np.int64)
    closed = _module_closure(G, lie, rref_array(lie.ring, span)[0] if span.shape[0] else span)
    dim = int(closed.shape[0])
    full = dim == lie.dim0
    verdict = True if full else (None if lower else False)
    logger.info(f"Condition (A) for {G.label}: span {dim}/{lie.dim0} from {reps.size} semisimple classes")
    return SpanResult(verdict, dim, lower, int(reps.size))


def spanning_sum_B(G: EnumeratedGroup, lie: ClassicalLieData) -> SpanResult:
    """Do the fixed subalgebras of regular semisimple elements span g0 as a module?"""
    reps = regular_semisimple_reps(G, lie)
    rows = [lie.fixed_space(G.elements[i]) for i in reps]
    span = np.concatenate(rows) if rows else np.zeros((0, lie.dim0), dtype=np.int64)
    closed = _module_closure(G, lie, rref_array(lie.ring, span)[0] if span.shape[0] else span)
    dim = int(closed.shape[0])
    logger.info(f"Condition (B) for {G.label}: span {dim}/{lie.dim0} from {reps.size} regular classes")
    return SpanResult(dim == lie.dim0, dim, False, int(reps.size))


def _dual_simples(G: EnumeratedGroup, lie: ClassicalLieData, limit: Optional[int]) -> Optional[List[Summand]]:
    return simple_submodules(lie.adjoint_dual_module(G), limit=limit)


def spanning_sum_A_direct(G: EnumeratedGroup, lie: ClassicalLieData,
                          limit: Optional[int] = None) -> Optional[bool]:
    """
    Every simple submodule W of the dual adjoint pairs nontrivially with some
    Lie Z(M_gamma) intersected with g0. None when the submodule enumeration is
    over its limit.
    """
    F = lie.ring
    simples = _dual_simples(G, lie, limit)
    if simples is None:
        return None
    spaces = [lieZ_of_centralizer(G.elements[i], lie).space for i in _semisimple_reps(G)]
    for W in simples:
        if not any(np.any(F.matmul(W.basis, Z.T)) for Z in spaces if Z.shape[0]):
            return False
    return True


def spanning_sum_B_direct(G: EnumeratedGroup, lie: ClassicalLieData,
                          limit: Optional[int] = None) -> Optional[bool]:
    """Every simple submodule W of the dual adjoint has W^gamma != 0 for a regular semisimple gamma."""
    F = lie.ring
    simples = _dual_simples(G, lie, limit)
    if simples is None:
        return None
    duals = []
    for i in regular_semisimple_reps(G, lie):
        ad = lie.adjoint(G.elements[i])
        duals.append(inverse_array(F, ad).T)
    ident = np.eye(lie.dim0, dtype=np.int64)
    for W in simples:
        cols = W.basis.T
        if not any(kernel_array(F, F.matmul(F.vsub(D, ident), cols)).shape[0] for D in duals):
            return False
    return True


# -- ad-regularity ------------------------------------------------------------------------

def _lowest_degree(f: Poly) -> int:
    return next(i for i, c in enumerate(f.coeffs) if c)


def nilpotent_rank(lie: ClassicalLieData, samples: int = 200, seed: Optional[int] = None) -> Tuple[int, np.ndarray]:
    """
    Least r with c_r(ad a) != 0 for some a in g0, found by sampling.

    Returns:
        (r, witness a); sampling stops once r reaches the group rank
    """
    F = lie.ring
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    best, witness = lie.dim0, np.zeros(lie.dim0, dtype=np.int64)
    for _ in range(samples):
        a = rng.integers(F.q, size=lie.dim0)
        r = _lowest_degree(charpoly_array(F, lie.ad(a)))
        if r < best:
            best, witness = r, a
        if best <= lie.rank:
            break
    return best, witness


def is_ad_regular(a: np.ndarray, lie: ClassicalLieData) -> bool:
    cp = charpoly_array(lie.ring, lie.ad(a))
    return cp.coeffs[lie.rank] != 0 if len(cp.coeffs) > lie.rank else False


# -- root data ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: Tuple[Tuple[int, ...], ...]
    coroots: Tuple[Tuple[int, ...], ...]
    name: str = ""

    @property
    def pairing(self) -> np.ndarray:
        return np.array(self.roots, dtype=np.int64) @ np.array(self.coroots, dtype=np.int64).T

    def validate(self) -> None:
        if len(self.roots) != len(self.coroots):
            raise InputError("roots and coroots differ in number")
        for a in self.roots + self.coroots:
            if len(a) != self.rank:
                raise InputError(f"vector {a} does not have length {self.rank}")
        if not np.all(np.diag(self.pairing) == 2):
            raise InputError("<alpha, alpha^vee> must be 2 for every root")
        if not reflections_permute_roots(self):
            raise InputError("reflections do not permute the roots")


def _reflection(alpha, coalpha) -> np.ndarray:
    a = np.array(alpha, dtype=np.int64)
    c = np.array(coalpha, dtype=np.int64)
    return np.eye(a.size, dtype=np.int64) - np.outer(a, c)


def reflections_permute_roots(datum: RootDatum) -> bool:
    roots = {tuple(r) for r in datum.roots}
    for a, c in zip(datum.roots, datum.coroots):
        s = _reflection(a, c)
        if {tuple(s @ np.array(b)) for b in datum.roots} != roots:
            return False
    return True


def weyl_group_order(datum: RootDatum) -> int:
    """Order of the group generated by the root reflections."""
    gens = [_reflection(a, c) for a, c in zip(datum.roots, datum.coroots)]
    ident = np.eye(datum.rank, dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = w @ s
                key = ws.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(ws)
        frontier = nxt
    return len(seen)


def _torsion_primes(rows: Sequence[Sequence[int]]) -> set:
    if not rows:
        return set()
    divisors, _, _ = smith_form_Z(rows)
    primes = set()
    for d in divisors:
        primes.update(sympy.primefactors(abs(d)))
    return primes


def pretty_good_primes(datum: RootDatum, bound: int) -> List[int]:
    """
    Primes below bound that are NOT pretty good.

    l is bad when some subset of roots gives l-torsion in X*/Z(subset) or in
    X_*/Z(coroots of the subset).
    """
    count = len(datum.roots)
    if count > settings.ROOT_SUBSET_BUDGET:
        raise SubsetBudgetExceeded(f"{count} roots exceed the subset budget {settings.ROOT_SUBSET_BUDGET}",
                                   {"roots": count})
    bad = set()
    for mask in range(1, 2 ** count):
        chosen = [i for i in range(count) if mask >> i & 1]
        bad |= _torsion_primes([datum.roots[i] for i in chosen])
        bad |= _torsion_primes([datum.coroots[i] for i in chosen])
    return sorted(l for l in bad if l < bound)


def _with_negatives(name: str, rank: int, roots, coroots) -> RootDatum:
    neg = lambda v: tuple(-x for x in v)
    return RootDatum(rank, tuple(roots) + tuple(neg(r) for r in roots),
                     tuple(coroots) + tuple(neg(c) for c in coroots), name)


BUILTIN_ROOT_DATA: Dict[str, RootDatum] = {
    "A1": _with_negatives("A1", 1, [(2,)], [(1,)]),
    "PGL2": _with_negatives("PGL2", 1, [(1,)], [(2,)]),
    "A1xA1": _with_negatives("A1xA1", 2, [(2, 0), (0, 2)], [(1, 0), (0, 1)]),
    "GL2": _with_negatives("GL2", 2, [(1, -1)], [(1, -1)]),
    "C2": _with_negatives("C2", 2, [(1, -1), (1, 1), (2, 0), (0, 2)],
                          [(1, -1), (1, 1), (1, 0), (0, 1)]),
    "B2": _with_negatives("B2", 2, [(1, -1), (1, 1), (1, 0), (0, 1)],
                          [(1, -1), (1, 1), (2, 0), (0, 2)]),
    "GSp4": _with_negatives("GSp4", 3, [(1, -1, 0), (1, 1, -1), (2, 0, -1), (0, 2, -1)],
                            [(1, -1, 0), (1, 1, 0), (1, 0, 0), (0, 1, 0)]),
}


def parse_root_datum(text: str, name: str = "") -> RootDatum:
    """
    Root datum file: the rank on the first line, then one 'root ; coroot' per
    line with comma or space separated integers. Blank lines and lines starting
    with '#' are skipped.
    """
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError("empty root datum file")
    try:
        rank = int(lines[0][1])
    except ValueError:
        raise InputError(f"line {lines[0][0]}: expected the rank", {"line": lines[0][0]})
    roots, coroots = [], []
    for no, ln in lines[1:]:
        if ";" not in ln:
            raise InputError(f"line {no}: expected 'root ; coroot'", {"line": no})
        left, right = ln.split(";", 1)
        try:
            root = tuple(int(x) for x in left.replace(",", " ").split())
            coroot = tuple(int(x) for x in right.replace(",", " ").split())
        except ValueError:
            raise InputError(f"line {no}: non-integer entry", {"line": no})
        roots.append(root)
        coroots.append(coroot)
    datum = RootDatum(rank, tuple(roots), tuple(coroots), name)
    datum.validate()
    return datum


# -- Taylor-Wiles places -----------------------------------------------------------------------

@dataclass
class TWDelta:
    n_v: int
    levi_dim: int
    p_exponent: int
    invariants: List[int] = field(default_factory=list)  # cyclic factor orders of Delta_v

    @property
    def order(self) -> int:
        out = 1
        for c in self.invariants:
            out *= c
        return out


def gsp4_torus_element(F: FieldDesc, a: int, b: int, nu: int) -> np.ndarray:
    """diag(a, b, nu/b, nu/a)."""
    return np.diag([a, b, F.mul(nu, F.inv(b)), F.mul(nu, F.inv(a))]).astype(np.int64)


def is_tw_place_residue(F: FieldDesc, g: np.ndarray, q_v: int) -> bool:
    return q_v % F.p == 1 and is_semisimple(F, g)


def levi_dimension(lie: ClassicalLieData, g: np.ndarray) -> int:
    """dim of the centralizer of g in g-hat (the dual Levi)."""
    return int(lie.fixed_space(g, "g").shape[0])


def tw_delta(F: FieldDesc, coords: Tuple[int, int, int], q_v: int) -> TWDelta:
    """
    n_v = dim z(gsp4^g) - 1 and Delta_v = (p-part of Z/(q_v - 1))^{n_v}.

    Args:
        F: residue field of the coefficients
        coords: torus coordinates (a, b, nu) of g = diag(a, b, nu/b, nu/a)
        q_v: size of the residue field at v
    """
    if q_v % F.p != 1:
        raise ResidueConditionViolated(f"q_v = {q_v} is not 1 mod {F.p}", {"q_v": q_v, "p": F.p})
    a, b, nu = coords
    g = gsp4_torus_element(F, a, b, nu)
    lie = ClassicalLieData(F, "GSp", 4)
    fixed = lie.fixed_space(g, "g")
    center = lie.center_of(fixed, "g")
    n_v = int(center.shape[0]) - 1
    e = sympy.multiplicity(F.p, q_v - 1)
    logger.debug(f"tw_delta: Levi dim {fixed.shape[0]}, center dim {center.shape[0]}, p-exponent {e}")
    return TWDelta(n_v, int(fixed.shape[0]), e, [F.p ** e] * n_v)
