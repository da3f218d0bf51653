"""
Modules for enumerated matrix groups.

A GModule stores the images of the group's generators; images of arbitrary
elements come from the Cayley tree of the group. Vectors are columns: g acts
on v by action(g) @ v.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.algebra.ff import FieldDesc, poly_factor
from app.algebra.linalg import (
    RowSpaceAccumulator,
    Summand,
    charpoly_array,
    evaluate_poly_at,
    inverse_array,
    kernel_array,
    rref_array,
)
from app.algebra.matgrp import EnumeratedGroup
from app.config.settings import settings
from app.models.errors import InvariantViolation, RandomnessExhausted

# Set up logging
logger = logging.getLogger(__name__)

MODULE_TAGS = ("trivial", "natural", "natural-dual", "adjoint", "adjoint-dual", "custom")


@dataclass(eq=False)
class GModule:
    """A finite group acting linearly on F^d."""
    group: EnumeratedGroup
    dim: int
    action: np.ndarray  # (ngens, d, d)
    field: FieldDesc
    tag: str = "custom"

    def __repr__(self) -> str:
        return f"GModule({self.tag}, dim={self.dim}, group={self.group.label or self.group.order})"

    @cached_property
    def all_actions(self) -> np.ndarray:
        """Images of every group element, propagated along the Cayley tree."""
        G, F = self.group, self.field
        R = np.zeros((G.order, self.dim, self.dim), dtype=np.int64)
        R[G.identity_index] = np.eye(self.dim, dtype=np.int64)
        for layer in G.layers[1:]:
            R[layer] = F.matmul(R[G.parent[layer]], self.action[G.pgen[layer]])
        return R

    def verify(self, element_map: Callable[[np.ndarray], np.ndarray], samples: int = 8, seed: int = 0) -> None:
        """Compare tree-propagated images of random elements with a direct formula."""
        G = self.group
        rng = np.random.default_rng(seed)
        idx = rng.integers(G.order, size=min(samples, G.order))
        direct = element_map(G.elements[idx])
        if not np.array_equal(self.all_actions[idx], direct):
            raise InvariantViolation(f"{self.tag} action is not multiplicative", {"samples": idx.tolist()})


def module_from_map(G: EnumeratedGroup, element_map: Callable[[np.ndarray], np.ndarray],
                    F: FieldDesc, tag: str, verify: bool = True) -> GModule:
    action = element_map(G.generators)
    M = GModule(G, int(action.shape[-1]), np.asarray(action, dtype=np.int64), F, tag)
    if verify:
        M.verify(element_map)
    return M


def trivial_module(G: EnumeratedGroup, dim: int = 1) -> GModule:
    action = np.broadcast_to(np.eye(dim, dtype=np.int64), (G.ngens, dim, dim)).copy()
    return GModule(G, dim, action, G.field, "trivial")


def natural_module(G: EnumeratedGroup) -> GModule:
    return GModule(G, G.n, G.generators.copy(), G.field, "natural")


def dual(M: GModule) -> GModule:
    """Contragredient: g acts by the inverse transpose."""
    F = M.field
    action = np.stack([inverse_array(F, a).T for a in M.action])
    tags = {"natural": "natural-dual", "natural-dual": "natural",
            "adjoint": "adjoint-dual", "adjoint-dual": "adjoint", "trivial": "trivial"}
    return GModule(M.group, M.dim, action, F, tags.get(M.tag, "custom"))


def restrict(M: GModule, H: EnumeratedGroup) -> GModule:
    """Restriction to a subgroup whose elements lie in M.group."""
    idx = M.group.index_of(H.generators)
    return GModule(H, M.dim, M.all_actions[idx].copy(), M.field, M.tag)


def direct_sum(M1: GModule, M2: GModule) -> GModule:
    d1, d2 = M1.dim, M2.dim
    action = np.zeros((M1.action.shape[0], d1 + d2, d1 + d2), dtype=np.int64)
    action[:, :d1, :d1] = M1.action
    action[:, d1:, d1:] = M2.action
    return GModule(M1.group, d1 + d2, action, M1.field, "custom")


# -- invariants -------------------------------------------------------------------

def h0(M: GModule) -> Summand:
    """Vectors fixed by every generator, hence by the group."""
    F, d = M.field, M.dim
    ident = np.eye(d, dtype=np.int64)
    rows = np.concatenate([F.vsub(a, ident) for a in M.action])
    basis = kernel_array(F, rows)
    return Summand(F, d, basis, tuple(rref_array(F, basis)[1])) if basis.shape[0] else Summand.zero(F, d)


def spin(F: FieldDesc, vectors: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Reduced basis (rows) of the smallest subspace containing the vectors and stable under mats."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    d = vectors.shape[1]
    acc = RowSpaceAccumulator(F, d)
    queue = []
    for v in vectors:
        before = acc.rank
        acc.add_rows(v[None])
        if acc.rank > before:
            queue.append(v)
    while queue and not acc.full:
        v = queue.pop()
        images = F.matmul(mats, v[:, None])[..., 0]
        for w in images:
            before = acc.rank
            acc.add_rows(w[None])
            if acc.rank > before:
                queue.append(w)
    return acc.basis


def abs_irreducible(M: GModule) -> bool:
    """Burnside: the span of the action images is all of End(F^d)."""
    F, d = M.field, M.dim
    acc = RowSpaceAccumulator(F, d * d)
    ident = np.eye(d, dtype=np.int64)
    acc.add_rows(ident.ravel()[None])
    queue = [ident]
    while queue and not acc.full:
        X = queue.pop()
        for a in M.action:
            Y = F.matmul(X, a)
            before = acc.rank
            acc.add_rows(Y.ravel()[None])
            if acc.rank > before:
                queue.append(Y)
    logger.debug(f"Burnside span of {M}: {acc.rank}/{d * d}")
    return acc.full


# -- Meataxe ---------------------------------------------------------------------

def _split_by(M: GModule, basis: np.ndarray) -> Tuple[GModule, GModule]:
    """Submodule spanned by basis rows and the corresponding quotient."""
    F, d = M.field, M.dim
    basis, pivots, _ = rref_array(F, basis)
    k = basis.shape[0]
    comp = [j for j in range(d) if j not in set(pivots)]
    P = np.zeros((d, d), dtype=np.int64)
    P[:, :k] = basis.T
    for t, j in enumerate(comp):
        P[j, k + t] = 1
    P_inv = inverse_array(F, P)
    conj = F.matmul(F.matmul(P_inv, M.action), P)
    if np.any(conj[:, k:, :k]):
        raise InvariantViolation("subspace is not invariant", {"dim": k})
    sub = GModule(M.group, k, conj[:, :k, :k].copy(), F, "custom")
    quo = GModule(M.group, d - k, conj[:, k:, k:].copy(), F, "custom")
    return sub, quo


def _random_algebra_element(M: GModule, rng: np.random.Generator) -> np.ndarray:
    F, d = M.field, M.dim
    theta = np.zeros((d, d), dtype=np.int64)
    for _ in range(3):
        word = np.eye(d, dtype=np.int64)
        for s in rng.integers(M.action.shape[0], size=int(rng.integers(1, 5))):
            word = F.matmul(word, M.action[s])
        c = int(rng.integers(1, F.q))
        theta = F.vadd(theta, F.vmul(word, np.full_like(word, c)))
    return theta


def find_submodule(M: GModule, rng: np.random.Generator, retries: Optional[int] = None) -> Optional[np.ndarray]:
    """
    Basis of a proper nonzero submodule, or None once irreducibility is proved.

    Raises:
        RandomnessExhausted when no proof is found within the retry budget
    """
    F, d = M.field, M.dim
    if d <= 1:
        return None
    retries = settings.MEATAXE_RETRIES if retries is None else retries
    transposed = np.swapaxes(M.action, 1, 2)
    for attempt in range(retries):
        theta = _random_algebra_element(M, rng)
        for f, _ in poly_factor(charpoly_array(F, theta)):
            f_theta = evaluate_poly_at(F, f, theta)
            null = kernel_array(F, f_theta)
            if null.shape[0] == 0:
                continue
            span = spin(F, null[:1], M.action)
            if span.shape[0] < d:
                return span
            if null.shape[0] == f.degree:
                w = kernel_array(F, f_theta.T)[:1]
                tspan = spin(F, w, transposed)
                if tspan.shape[0] < d:
                    return kernel_array(F, tspan)
                return None
        logger.debug(f"Meataxe attempt {attempt} on {M} inconclusive")
    raise RandomnessExhausted(f"no splitting or certifying element for {M}", {"retries": retries, "dim": d})


def chop(M: GModule, seed: Optional[int] = None) -> List[Tuple[GModule, int]]:
    """
    Composition factors with multiplicities.

    Returns:
        (simple module, multiplicity) pairs sorted by dimension
    """
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    simples: List[GModule] = []
    stack = [M]
    while stack:
        N = stack.pop()
        sub = find_submodule(N, rng)
        if sub is None:
            simples.append(N)
        else:
            a, b = _split_by(N, sub)
            stack.extend([a, b])
    factors: List[List] = []
    for S in simples:
        for entry in factors:
            if is_isomorphic(entry[0], S):
                entry[1] += 1
                break
        else:
            factors.append([S, 1])
    factors.sort(key=lambda e: e[0].dim)
    logger.debug(f"chop({M}): dims {[(S.dim, m) for S, m in factors]}")
    return [(S, m) for S, m in factors]


# -- homomorphisms and submodules ---------------------------------------------------

def _kron(F: FieldDesc, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a0, a1 = A.shape
    b0, b1 = B.shape
    return F.vmul(A[:, None, :, None], B[None, :, None, :]).reshape(a0 * b0, a1 * b1)


def hom_space(S: GModule, M: GModule) -> List[np.ndarray]:
    """Basis of intertwiners X (dim M x dim S) with X S(g) = M(g) X."""
    F = M.field
    m, s = M.dim, S.dim
    blocks = []
    for a_s, a_m in zip(S.action, M.action):
        left = _kron(F, np.eye(m, dtype=np.int64), a_s.T)
        right = _kron(F, a_m, np.eye(s, dtype=np.int64))
        blocks.append(F.vsub(left, right))
    basis = kernel_array(F, np.concatenate(blocks))
    return [row.reshape(m, s) for row in basis]


def is_isomorphic(S1: GModule, S2: GModule) -> bool:
    """Isomorphism test for simple modules."""
    return S1.dim == S2.dim and len(hom_space(S1, S2)) > 0


def _canonical(F: FieldDesc, rows: np.ndarray) -> np.ndarray:
    return rref_array(F, rows)[0]


def simple_submodules(M: GModule, factors: Optional[List[Tuple[GModule, int]]] = None,
                      limit: Optional[int] = None) -> Optional[List[Summand]]:
    """
    Every simple submodule, as images of intertwiners from the composition factors.

    Returns:
        Summands in discovery order, or None when more than `limit` projective
        intertwiners would have to be enumerated
    """
    F, d = M.field, M.dim
    limit = settings.SUBMODULE_ENUM_LIMIT if limit is None else limit
    factors = chop(M) if factors is None else factors
    seen = {}
    for S, _ in factors:
        basis = hom_space(S, M)
        h = len(basis)
        if h == 0:
            continue
        count = (F.q ** h - 1) // (F.q - 1)
        if count > limit:
            logger.warning(f"{count} intertwiners from a {S.dim}-dimensional factor exceed the limit {limit}")
            return None
        X = np.stack(basis)  # (h, d, s)
        for lead in range(h):
            free = h - 1 - lead
            tails = (np.stack(np.meshgrid(*[np.arange(F.q)] * free, indexing="ij"), -1).reshape(-1, free)
                     if free else np.zeros((1, 0), dtype=np.int64))
            for tail in tails:
                coeffs = np.zeros(h, dtype=np.int64)
                coeffs[lead] = 1
                coeffs[lead + 1:] = tail
                image = F.matmul(coeffs[None, :], X.reshape(h, -1)).reshape(d, S.dim)
                rows = _canonical(F, image.T)
                key = rows.tobytes() + bytes([rows.shape[0]])
                if key not in seen:
                    seen[key] = Summand(F, d, rows, tuple(rref_array(F, rows)[1]))
    return list(seen.values())


def simple_submodules_bruteforce(M: GModule) -> List[Summand]:
    """Minimal members among all cyclic submodules."""
    F, d = M.field, M.dim
    cyclic = {}
    for code in range(1, F.q ** d):
        v = np.array([(code // F.q ** i) % F.q for i in range(d)], dtype=np.int64)
        nz = np.flatnonzero(v)
        if v[nz[0]] != 1:
            continue
        rows = spin(F, v[None], M.action)
        cyclic.setdefault(rows.tobytes() + bytes([rows.shape[0]]), rows)
    spaces = list(cyclic.values())
    simple = []
    for U in spaces:
        minimal = True
        for W in spaces:
            if W.shape[0] < U.shape[0]:
                joined = rref_array(F, np.concatenate([U, W]))[0]
                if joined.shape[0] == U.shape[0]:
                    minimal = False
                    break
        if minimal:
            simple.append(Summand(F, d, U, tuple(rref_array(F, U)[1])))
    return simple


def self_duality_witness(M: GModule, tries: int = 16, seed: int = 0) -> Optional[np.ndarray]:
    """An invertible intertwiner M -> dual(M), if one turns up."""
    F = M.field
    basis = hom_space(M, dual(M))
    if not basis:
        return None
    rng = np.random.default_rng(seed)
    candidates = list(basis)
    for _ in range(tries):
        coeffs = rng.integers(F.q, size=len(basis))
        candidates.append(F.matmul(coeffs[None], np.stack(basis).reshape(len(basis), -1)).reshape(M.dim, M.dim))
    for X in candidates:
        if rref_array(F, X)[0].shape[0] == M.dim:
            return X
    return None
