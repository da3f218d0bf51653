"""
Matrix groups over finite fields.

A group is given by generator matrices (GroupSpec) and enumerated by a
vectorized breadth-first closure (EnumeratedGroup). Elements are kept sorted by
their canonical code, the row-major entry vector read as a base-q number, so
lookups are a searchsorted away and every ordering is deterministic.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.algebra.ff import FieldDesc, field_create, poly_gcd, prime_field, primitive_element
from app.algebra.linalg import charpoly_array, inverse_array, kernel_array, minpoly_array, rref_array
from app.config.settings import settings
from app.models.errors import CapExceeded, InputError, InvalidGenerator

# Set up logging
logger = logging.getLogger(__name__)

AMBIENTS = ("GL", "SL", "Sp", "GSp", "SO", "O")
FORM_AMBIENTS = ("Sp", "GSp", "SO", "O")


# -- canonical codes ------------------------------------------------------------

def _code_weights(q: int, n: int) -> np.ndarray:
    if q ** (n * n) >= 2 ** 63:
        raise InputError(f"matrices of size {n} over a field of order {q} do not fit the int64 encoding",
                         {"q": q, "n": n})
    return np.array([q ** i for i in range(n * n)], dtype=np.int64)


def encode_matrices(F: FieldDesc, mats: np.ndarray) -> np.ndarray:
    """Canonical codes of a stack of n x n matrices (any leading shape)."""
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    flat = mats.reshape(mats.shape[:-2] + (n * n,))
    return flat @ _code_weights(F.q, n)


def decode_codes(F: FieldDesc, n: int, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64).copy()
    out = np.zeros(codes.shape + (n * n,), dtype=np.int64)
    for i in range(n * n):
        codes, out[..., i] = np.divmod(codes, F.q)
    return out.reshape(codes.shape + (n, n))


def _isin_sorted(values: np.ndarray, sorted_ref: np.ndarray) -> np.ndarray:
    if sorted_ref.size == 0:
        return np.zeros(values.shape, dtype=bool)
    pos = np.searchsorted(sorted_ref, values)
    pos = np.minimum(pos, sorted_ref.size - 1)
    return sorted_ref[pos] == values


def batched_matpow(F: FieldDesc, mats: np.ndarray, exps) -> np.ndarray:
    """mats[i] ** exps[i] for a stack of square matrices."""
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    exps = np.broadcast_to(np.asarray(exps, dtype=np.int64), mats.shape[:1]).copy()
    result = np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape).copy()
    base = mats.copy()
    while np.any(exps):
        odd = (exps & 1).astype(bool)
        if np.any(odd):
            result[odd] = F.matmul(result[odd], base[odd])
        exps >>= 1
        if np.any(exps):
            base = F.matmul(base, base)
    return result


def determinant(F: FieldDesc, g: np.ndarray) -> int:
    n = g.shape[0]
    c0 = charpoly_array(F, g).coeffs[0] if n else 1
    return c0 if n % 2 == 0 else F.neg(c0)


# -- forms and built-in generators ----------------------------------------------

def standard_form(F: FieldDesc, ambient: str, n: int) -> Optional[np.ndarray]:
    """J = antidiag(1,..,1,-1,..,-1) for Sp/GSp, antidiag(1,..,1) for SO/O."""
    if ambient not in FORM_AMBIENTS:
        return None
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        J[i, n - 1 - i] = 1
    if ambient in ("Sp", "GSp"):
        if n % 2:
            raise InputError(f"symplectic ambient needs even size, got {n}")
        for i in range(n // 2, n):
            J[i, n - 1 - i] = F.neg(1)
    return J


def _unit(n: int, entries: Dict[Tuple[int, int], int], F: FieldDesc) -> np.ndarray:
    g = np.eye(n, dtype=np.int64)
    for (i, j), c in entries.items():
        g[i, j] = F.from_int(c) if isinstance(c, int) and c < 0 else c
    return g


def sl2_generators(F: FieldDesc) -> List[np.ndarray]:
    gens = [np.array([[1, 1], [0, 1]], dtype=np.int64), np.array([[1, 0], [1, 1]], dtype=np.int64)]
    if F.k > 1:
        w = primitive_element(F)
        gens.append(np.array([[w, 0], [0, F.inv(w)]], dtype=np.int64))
    return gens


def gl2_generators(F: FieldDesc) -> List[np.ndarray]:
    w = primitive_element(F)
    return sl2_generators(F) + [np.array([[w, 0], [0, 1]], dtype=np.int64)]


def sp4_generators(F: FieldDesc) -> List[np.ndarray]:
    """Root elements for the simple roots of Sp4 and their negatives."""
    gens = [
        _unit(4, {(0, 1): 1, (2, 3): -1}, F),
        _unit(4, {(1, 0): 1, (3, 2): -1}, F),
        _unit(4, {(1, 2): 1}, F),
        _unit(4, {(2, 1): 1}, F),
    ]
    if F.k > 1:
        w = primitive_element(F)
        wi = F.inv(w)
        gens.append(np.diag([w, 1, 1, wi]).astype(np.int64))
        gens.append(np.diag([1, w, wi, 1]).astype(np.int64))
    return gens


def gsp4_generators(F: FieldDesc) -> List[np.ndarray]:
    nu = primitive_element(F)
    return sp4_generators(F) + [np.diag([1, 1, nu, nu]).astype(np.int64)]


# -- GroupSpec -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Generator matrices together with the ambient group they live in."""
    field: FieldDesc
    n: int
    ambient: str
    form: Optional[np.ndarray]
    generators: Tuple[np.ndarray, ...]
    label: str = ""

    @classmethod
    def create(cls, F: FieldDesc, n: int, ambient: str, generators: Sequence,
               form=None, label: str = "", validate: bool = True) -> "GroupSpec":
        if ambient not in AMBIENTS:
            raise InputError(f"unknown ambient {ambient!r}", {"allowed": list(AMBIENTS)})
        if form is None:
            form = standard_form(F, ambient, n)
        elif ambient not in FORM_AMBIENTS:
            form = None
        gens = tuple(np.array(g, dtype=np.int64).reshape(n, n) % F.q for g in generators)
        spec = cls(F, n, ambient, None if form is None else np.array(form, dtype=np.int64) % F.q,
                   gens, label)
        if validate:
            spec.validate()
        return spec

    def with_generators(self, generators: Sequence, label: str = "", ambient: Optional[str] = None) -> "GroupSpec":
        return GroupSpec(self.field, self.n, ambient or self.ambient, self.form,
                         tuple(np.asarray(g, dtype=np.int64) for g in generators), label)

    def similitude(self, g: np.ndarray) -> Optional[int]:
        """nu with g^T J g = nu J, or None when there is no such scalar."""
        F, J = self.field, self.form
        M = F.matmul(F.matmul(g.T, J), g)
        i, j = map(int, np.argwhere(J != 0)[0])
        nu = F.mul(int(M[i, j]), F.inv(int(J[i, j])))
        expected = F.vmul(J, np.full_like(J, nu))
        return nu if np.array_equal(M, expected) else None

    def validate(self) -> None:
        F, n, J = self.field, self.n, self.form
        if F.p == 2:
            raise InvalidGenerator("characteristic 2 is not supported")
        if J is not None:
            if J.shape != (n, n):
                raise InvalidGenerator("form has the wrong shape", {"constraint": "form_shape"})
            if determinant(F, J) == 0:
                raise InvalidGenerator("form is degenerate", {"constraint": "form_nondegenerate"})
            if self.ambient in ("Sp", "GSp"):
                if not np.array_equal(J.T, F.vneg(J)) or np.any(np.diag(J)):
                    raise InvalidGenerator("form is not alternating", {"constraint": "form_alternating"})
            elif not np.array_equal(J.T, J):
                raise InvalidGenerator("form is not symmetric", {"constraint": "form_symmetric"})
        for idx, g in enumerate(self.generators):
            det = determinant(F, g)
            if det == 0:
                raise InvalidGenerator(f"generator {idx} is singular", {"generator": idx, "constraint": "invertible"})
            if self.ambient == "SL" and det != 1:
                raise InvalidGenerator(f"generator {idx} has determinant {det}",
                                       {"generator": idx, "constraint": "det=1"})
            if J is not None:
                nu = self.similitude(g)
                if nu is None:
                    raise InvalidGenerator(f"generator {idx} does not scale the form",
                                           {"generator": idx, "constraint": "g^T J g = nu J"})
                if self.ambient in ("Sp", "SO", "O") and nu != 1:
                    raise InvalidGenerator(f"generator {idx} has similitude {nu}",
                                           {"generator": idx, "constraint": "g^T J g = J"})
                if self.ambient == "SO" and det != 1:
                    raise InvalidGenerator(f"generator {idx} has determinant {det}",
                                           {"generator": idx, "constraint": "det=1"})


def builtin_spec(name: str, p: int, k: int = 1) -> GroupSpec:
    """Standard generators of SL2, GL2, Sp4 or GSp4 over F_{p^k}."""
    F = field_create(p, k)
    table = {
        "SL2": ("SL", 2, sl2_generators),
        "GL2": ("GL", 2, gl2_generators),
        "Sp4": ("Sp", 4, sp4_generators),
        "GSp4": ("GSp", 4, gsp4_generators),
    }
    if name not in table:
        raise InputError(f"no built-in group {name!r}", {"allowed": sorted(table)})
    ambient, n, make = table[name]
    return GroupSpec.create(F, n, ambient, make(F), label=f"{name}(F_{F.q})")


# -- enumerated groups ---------------------------------------------------------------

@dataclass
class ConjugacyClasses:
    labels: np.ndarray   # class label per element
    reps: np.ndarray     # least element index of each class
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.reps.size)


class EnumeratedGroup:
    """
    A finite matrix group with every element listed.

    The breadth-first Cayley tree (parent, pgen, depth) is kept: element i is
    elements[parent[i]] @ generators[pgen[i]].
    """

    def __init__(self, spec: GroupSpec, elements: np.ndarray, codes: np.ndarray,
                 parent: np.ndarray, pgen: np.ndarray, depth: np.ndarray):
        self.spec = spec
        self.field = spec.field
        self.n = spec.n
        self.elements = elements
        self.codes = codes
        self.parent = parent
        self.pgen = pgen
        self.depth = depth
        self.order = int(codes.size)
        self.label = spec.label

    def __repr__(self) -> str:
        return f"EnumeratedGroup({self.label or 'unnamed'}, order={self.order})"

    @property
    def generators(self) -> np.ndarray:
        if not self.spec.generators:
            return np.eye(self.n, dtype=np.int64)[None]
        return np.stack(self.spec.generators)

    @property
    def ngens(self) -> int:
        return self.generators.shape[0]

    def member_mask(self, mats: np.ndarray) -> np.ndarray:
        return _isin_sorted(encode_matrices(self.field, mats), self.codes)

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        codes = encode_matrices(self.field, mats)
        pos = np.minimum(np.searchsorted(self.codes, codes), self.order - 1)
        if not np.all(self.codes[pos] == codes):
            raise KeyError("matrix is not an element of the group")
        return pos

    @cached_property
    def identity_index(self) -> int:
        return int(self.index_of(np.eye(self.n, dtype=np.int64)))

    @cached_property
    def gen_indices(self) -> np.ndarray:
        return self.index_of(self.generators)

    @cached_property
    def layers(self) -> List[np.ndarray]:
        """Element indices grouped by distance from the identity."""
        order = np.argsort(self.depth, kind="stable")
        counts = np.bincount(self.depth)
        return np.split(order, np.cumsum(counts)[:-1])

    @cached_property
    def rmul(self) -> np.ndarray:
        """rmul[s, i] = index of elements[i] @ generators[s]."""
        F = self.field
        return np.stack([self.index_of(F.matmul(self.elements, g)) for g in self.generators])

    @cached_property
    def inverse_index(self) -> np.ndarray:
        inv = batched_matpow(self.field, self.elements, self.order - 1)
        return self.index_of(inv)

    @cached_property
    def conjugation(self) -> np.ndarray:
        """conjugation[s, i] = index of generators[s]^-1 @ elements[i] @ generators[s]."""
        F = self.field
        out = []
        for g in self.generators:
            g_inv = inverse_array(F, g)
            out.append(self.index_of(F.matmul(F.matmul(g_inv, self.elements), g)))
        return np.stack(out)

    @cached_property
    def classes(self) -> ConjugacyClasses:
        return conjugacy_classes(self)

    @cached_property
    def similitudes(self) -> np.ndarray:
        """nu(g) for every element; all ones outside the symplectic similitude ambients."""
        F, J = self.field, self.spec.form
        if J is None or self.spec.ambient not in ("Sp", "GSp"):
            return np.ones(self.order, dtype=np.int64)
        i, j = map(int, np.argwhere(J != 0)[0])
        M = F.matmul(F.matmul(np.swapaxes(self.elements, 1, 2), J), self.elements)
        return F.vmul(M[:, i, j], np.full(self.order, F.inv(int(J[i, j])), dtype=np.int64))

    def element_orders(self, indices) -> np.ndarray:
        """Orders of the given elements, searched among divisors of the group order."""
        indices = np.atleast_1d(np.asarray(indices, dtype=np.int64))
        mats = self.elements[indices]
        orders = np.full(indices.size, self.order, dtype=np.int64)
        ident = np.eye(self.n, dtype=np.int64)
        for r, mult in sympy.factorint(self.order).items():
            for _ in range(mult):
                cand = np.where(orders % r == 0, orders // r, orders)
                powered = batched_matpow(self.field, mats, cand)
                hit = np.all(powered == ident, axis=(1, 2)) & (orders % r == 0)
                orders = np.where(hit, cand, orders)
        return orders

    def subgroup_mask(self, gen_indices: Sequence[int]) -> np.ndarray:
        return closure_mask(self, gen_indices)


def enumerate_group(spec: GroupSpec, cap: Optional[int] = None) -> EnumeratedGroup:
    """
    Closure of the generators under multiplication.

    Args:
        spec: validated group specification
        cap: largest order accepted, settings.MAX_ORDER by default

    Returns:
        The enumerated group, elements sorted by canonical code
    """
    cap = settings.MAX_ORDER if cap is None else cap
    F, n = spec.field, spec.n
    gens = (np.stack(spec.generators) if spec.generators else np.eye(n, dtype=np.int64)[None])
    ngen = gens.shape[0]
    ident = np.eye(n, dtype=np.int64)

    seen = encode_matrices(F, ident[None])
    mats_parts = [ident[None]]
    code_parts = [seen.copy()]
    parent_parts = [np.array([-1])]
    pgen_parts = [np.array([-1])]
    depth_parts = [np.array([0])]
    frontier, frontier_idx = ident[None], np.array([0])
    total, d = 1, 0

    while frontier.shape[0]:
        d += 1
        prods = F.matmul(frontier[None, :, :, :], gens[:, None, :, :]).reshape(-1, n, n)
        codes = encode_matrices(F, prods)
        parents = np.tile(frontier_idx, ngen)
        pgens = np.repeat(np.arange(ngen), frontier.shape[0])
        uniq, first = np.unique(codes, return_index=True)
        fresh = ~_isin_sorted(uniq, seen)
        uniq, first = uniq[fresh], first[fresh]
        if total + uniq.size > cap:
            raise CapExceeded(f"group order exceeds cap {cap}",
                              {"partial_count": int(total + uniq.size), "cap": cap, "label": spec.label})
        new_idx = np.arange(total, total + uniq.size)
        mats_parts.append(prods[first])
        code_parts.append(uniq)
        parent_parts.append(parents[first])
        pgen_parts.append(pgens[first])
        depth_parts.append(np.full(uniq.size, d))
        seen = np.union1d(seen, uniq)
        frontier, frontier_idx = prods[first], new_idx
        total += uniq.size

    codes = np.concatenate(code_parts)
    perm = np.argsort(codes, kind="stable")
    rank = np.empty_like(perm)
    rank[perm] = np.arange(perm.size)
    parent_disc = np.concatenate(parent_parts)[perm]
    parent = np.where(parent_disc < 0, -1, rank[np.maximum(parent_disc, 0)])
    G = EnumeratedGroup(
        spec,
        np.concatenate(mats_parts)[perm],
        codes[perm],
        parent,
        np.concatenate(pgen_parts)[perm],
        np.concatenate(depth_parts)[perm],
    )
    logger.info(f"Enumerated {spec.label or 'group'}: order {G.order}, depth {d - 1}")
    return G


def conjugacy_classes(G: EnumeratedGroup) -> ConjugacyClasses:
    """Orbits of conjugation by the generators, as connected components."""
    rows = np.tile(np.arange(G.order), G.ngens)
    cols = G.conjugation.ravel()
    graph = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(G.order, G.order))
    _, raw = connected_components(graph, directed=True, connection="weak")
    # relabel by least member
    reps = np.full(raw.max() + 1, G.order, dtype=np.int64)
    np.minimum.at(reps, raw, np.arange(G.order))
    order = np.argsort(reps)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    labels = relabel[raw]
    sizes = np.bincount(labels)
    logger.debug(f"{G.label}: {order.size} conjugacy classes")
    return ConjugacyClasses(labels, reps[order], sizes)


# -- semisimplicity ----------------------------------------------------------------

def is_semisimple(F: FieldDesc, g: np.ndarray) -> bool:
    """Order prime to p, equivalently a squarefree minimal polynomial."""
    m = minpoly_array(F, np.asarray(g, dtype=np.int64))
    return poly_gcd(m, m.derivative()).degree == 0


def is_regular_semisimple(F: FieldDesc, g: np.ndarray, lie) -> bool:
    return is_semisimple(F, g) and lie.fixed_dim(g) == lie.rank


# -- subgroups ----------------------------------------------------------------------

def closure_mask(G: EnumeratedGroup, gen_indices: Sequence[int]) -> np.ndarray:
    """Membership mask of the subgroup generated by the given elements."""
    F, n = G.field, G.n
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity_index] = True
    gen_indices = np.asarray(list(gen_indices), dtype=np.int64)
    if gen_indices.size == 0:
        return mask
    gens = G.elements[gen_indices]
    frontier = np.array([G.identity_index])
    while frontier.size:
        prods = F.matmul(G.elements[frontier][None], gens[:, None]).reshape(-1, n, n)
        idx = np.unique(G.index_of(prods))
        new = idx[~mask[idx]]
        mask[new] = True
        frontier = new
    return mask


def subgroup_from_mask(G: EnumeratedGroup, mask: np.ndarray, seed: int = 0,
                       label: str = "", ambient: Optional[str] = None) -> EnumeratedGroup:
    """
    Enumerated subgroup for a membership mask.

    Generators are the generators of G inside the mask, then random members
    outside the current closure until the closure is the whole mask.
    """
    target = int(mask.sum())
    members = np.flatnonzero(mask)
    gens = [int(i) for i in dict.fromkeys(G.gen_indices.tolist()) if mask[i] and i != G.identity_index]
    current = closure_mask(G, gens)
    rng = np.random.default_rng(seed)
    while int(current.sum()) < target:
        outside = members[~current[members]]
        gens.append(int(outside[rng.integers(outside.size)]))
        current = closure_mask(G, gens)
    if not np.array_equal(current, mask):
        raise ValueError("mask is not a subgroup")
    spec = G.spec.with_generators(G.elements[gens] if gens else [], label=label, ambient=ambient)
    return enumerate_group(spec, cap=max(G.order, 1))


def derived_subgroup(G: EnumeratedGroup) -> EnumeratedGroup:
    """Normal closure of the generator commutators."""
    F = G.field
    gm = G.generators
    ginv = np.stack([inverse_array(F, g) for g in gm])
    comms = []
    for a in range(G.ngens):
        for b in range(a + 1, G.ngens):
            c = F.matmul(F.matmul(ginv[a], ginv[b]), F.matmul(gm[a], gm[b]))
            comms.append(c)
    gens = []
    if comms:
        gens = [int(i) for i in np.unique(G.index_of(np.stack(comms))) if i != G.identity_index]
    mask = closure_mask(G, gens)
    while True:
        conj = np.unique(G.conjugation[:, gens].ravel()) if gens else np.array([], dtype=np.int64)
        missing = conj[~mask[conj]]
        if missing.size == 0:
            break
        gens.append(int(missing[0]))
        mask = closure_mask(G, gens)
    return subgroup_from_mask(G, mask, label=f"[{G.label},{G.label}]")


def center(G: EnumeratedGroup) -> EnumeratedGroup:
    F = G.field
    mask = np.ones(G.order, dtype=bool)
    for g in G.generators:
        mask &= np.all(F.matmul(G.elements, g) == F.matmul(g, G.elements), axis=(1, 2))
    return subgroup_from_mask(G, mask, label=f"Z({G.label})")


def sp_part(G: EnumeratedGroup) -> EnumeratedGroup:
    """Gamma = G intersected with Sp, i.e. the kernel of the similitude."""
    mask = G.similitudes == 1
    if mask.all():
        return G
    return subgroup_from_mask(G, mask, label=f"{G.label}∩Sp", ambient="Sp")


def similitude_image(G: EnumeratedGroup) -> List[int]:
    return sorted(set(G.similitudes.tolist()))


def normalizer(G: EnumeratedGroup, H: EnumeratedGroup) -> EnumeratedGroup:
    F = G.field
    inv = G.elements[G.inverse_index]
    mask = np.ones(G.order, dtype=bool)
    for h in H.generators:
        mask &= H.member_mask(F.matmul(F.matmul(G.elements, h), inv))
    return subgroup_from_mask(G, mask, label=f"N({H.label})")


def subgroup_conjugacy_test(H1: EnumeratedGroup, H2: EnumeratedGroup,
                            G: EnumeratedGroup) -> Optional[np.ndarray]:
    """
    Some g in G with g H1 g^-1 = H2, or None.

    Every element of G is tried at once: g works exactly when it carries the
    generators of H1 into H2, since the two orders agree.
    """
    if H1.order != H2.order:
        return None
    if np.array_equal(H1.codes, H2.codes):
        return np.eye(G.n, dtype=np.int64)
    F = G.field
    inv = G.elements[G.inverse_index]
    mask = np.ones(G.order, dtype=bool)
    for h in H1.generators:
        mask &= H2.member_mask(F.matmul(F.matmul(G.elements, h), inv))
        if not mask.any():
            return None
    g = G.elements[int(np.flatnonzero(mask)[0])]
    g_inv = inverse_array(F, g)
    image = np.sort(encode_matrices(F, F.matmul(F.matmul(g, H1.elements), g_inv)))
    if not np.array_equal(image, H2.codes):
        raise ValueError("conjugating element fails the set-equality check")
    return g


# -- homomorphisms to Z/ell ----------------------------------------------------------

def cayley_forms(G: EnumeratedGroup, ell: int) -> np.ndarray:
    """
    Linear forms phi(g) = forms[g] . x in the generator images x, over Z/ell.

    Built along the Cayley tree; they describe a homomorphism exactly when x
    satisfies the edge constraints of hom_basis.
    """
    forms = np.zeros((G.order, G.ngens), dtype=np.int64)
    for layer in G.layers[1:]:
        forms[layer] = forms[G.parent[layer]]
        forms[layer, G.pgen[layer]] = (forms[layer, G.pgen[layer]] + 1) % ell
    return forms


def hom_basis(G: EnumeratedGroup, ell: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Basis of Hom(G, Z/ell) in generator coordinates.

    Returns:
        (forms, basis) where forms @ basis.T gives the values on all elements
    """
    K = prime_field(ell)
    forms = cayley_forms(G, ell)
    rows = []
    for s in range(G.ngens):
        D = (forms[G.rmul[s]] - forms) % ell
        D[:, s] = (D[:, s] - 1) % ell
        rows.append(np.unique(D, axis=0))
    constraints = np.unique(np.concatenate(rows), axis=0)
    constraints = constraints[np.any(constraints != 0, axis=1)]
    if constraints.shape[0] == 0:
        basis = np.eye(G.ngens, dtype=np.int64)
    else:
        basis = kernel_array(K, constraints)
    return forms, basis


def hom_dim(G: EnumeratedGroup, ell: int) -> int:
    return int(hom_basis(G, ell)[1].shape[0])


def hom_to_Fp_dim(G: EnumeratedGroup) -> int:
    """dim Hom(G, F_p), the p-rank of the abelianization."""
    return hom_dim(G, G.field.p)


def index2_subgroups(G: EnumeratedGroup) -> List[EnumeratedGroup]:
    """Kernels of the 2^r - 1 nontrivial maps G -> Z/2."""
    forms, basis = hom_basis(G, 2)
    r = basis.shape[0]
    if r == 0:
        return []
    values = (forms @ basis.T) % 2
    subgroups = []
    for combo in range(1, 2 ** r):
        c = np.array([(combo >> i) & 1 for i in range(r)], dtype=np.int64)
        phi = (values @ c) % 2
        subgroups.append(subgroup_from_mask(G, phi == 0, label=f"{G.label}:ker{combo}"))
    return subgroups


# -- ambient centralizers and forms --------------------------------------------------

def _kron(F: FieldDesc, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a, b = A.shape[0], B.shape[0]
    return F.vmul(A[:, None, :, None], B[None, :, None, :]).reshape(a * b, a * b)


def centralizer_in_ambient(G: EnumeratedGroup, limit: int = 1_000_000) -> Optional[np.ndarray]:
    """
    Elements of the ambient group commuting with G.

    Solves X g = g X over the generators, then keeps the solutions satisfying
    the ambient condition. Returns None when the commutant has more than
    `limit` points.
    """
    F, n, J = G.field, G.n, G.spec.form
    ident = np.eye(n, dtype=np.int64)
    blocks = [F.vsub(_kron(F, ident, g.T), _kron(F, g, ident)) for g in G.generators]
    K = kernel_array(F, np.concatenate(blocks))
    k = K.shape[0]
    if F.q ** k > limit:
        logger.warning(f"commutant of {G.label} has {F.q}^{k} points, skipping enumeration")
        return None
    coeffs = np.stack(np.meshgrid(*[np.arange(F.q)] * k, indexing="ij"), -1).reshape(-1, k) if k else np.zeros((1, 0), dtype=np.int64)
    mats = F.matmul(coeffs, K).reshape(-1, n, n) if k else np.zeros((1, n, n), dtype=np.int64)
    ambient = G.spec.ambient
    if J is not None:
        M = F.matmul(F.matmul(np.swapaxes(mats, 1, 2), J), mats)
        if ambient == "GSp":
            i, j = map(int, np.argwhere(J != 0)[0])
            nu = F.vmul(M[:, i, j], np.full(M.shape[0], F.inv(int(J[i, j])), dtype=np.int64))
            ok = (nu != 0) & np.all(M == F.vmul(J[None], nu[:, None, None]), axis=(1, 2))
        else:
            ok = np.all(M == J, axis=(1, 2))
        if ambient == "SO":
            ok &= np.array([determinant(F, m) == 1 if o else False for m, o in zip(mats, ok)])
    else:
        dets = np.array([determinant(F, m) for m in mats])
        ok = dets != 0 if ambient == "GL" else dets == 1
    return mats[ok]


def symplectic_adapted_basis(F: FieldDesc, gram: np.ndarray) -> np.ndarray:
    """
    P with P^T gram P = standard J for a nondegenerate alternating gram matrix.

    Hyperbolic pairs (u_i, w_i) go to columns i and n-1-i.
    """
    B = np.asarray(gram, dtype=np.int64) % F.q
    n = B.shape[0]

    def form(x, y):
        return int(F.matmul(F.matmul(x[None], B), y[:, None])[0, 0])

    remaining = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    P = np.zeros((n, n), dtype=np.int64)
    for i in range(n // 2):
        u = next(v for v in remaining if any(form(v, w) for w in remaining))
        w = next(v for v in remaining if form(u, v))
        w = F.vmul(w, np.full(n, F.inv(form(u, w)), dtype=np.int64))
        rest = []
        for v in remaining:
            if np.array_equal(v, u) or np.array_equal(v, w):
                continue
            v2 = F.vsub(v, F.vmul(np.full(n, form(v, w), dtype=np.int64), u))
            v2 = F.vadd(v2, F.vmul(np.full(n, form(v, u), dtype=np.int64), w))
            if np.any(v2):
                rest.append(v2)
        # keep a basis of the orthogonal complement
        if rest:
            rest = list(rref_array(F, np.stack(rest))[0])
        P[:, i] = u
        P[:, n - 1 - i] = w
        remaining = rest
    return P


# -- sampling and search ---------------------------------------------------------------

def sample_ambient_elements(spec: GroupSpec, rng: np.random.Generator, count: int,
                            burn_in: int = 50) -> np.ndarray:
    """Near-uniform random elements of <generators> by product replacement."""
    F, n = spec.field, spec.n
    gens = list(spec.generators) or [np.eye(n, dtype=np.int64)]
    state = [gens[i % len(gens)].copy() for i in range(max(10, len(gens)))]
    acc = np.eye(n, dtype=np.int64)

    def step():
        nonlocal acc
        i, j = rng.choice(len(state), size=2, replace=False)
        if rng.random() < 0.5:
            state[i] = F.matmul(state[i], state[j])
        else:
            state[i] = F.matmul(state[j], state[i])
        acc = F.matmul(acc, state[i])

    for _ in range(burn_in):
        step()
    out = np.empty((count, n, n), dtype=np.int64)
    for t in range(count):
        step()
        out[t] = acc
    return out


def random_subgroup_search(ambient: Union[EnumeratedGroup, GroupSpec], seed: int, num_gens: int,
                           samples: int, cap: Optional[int] = None,
                           notes: Optional[List[str]] = None) -> List[EnumeratedGroup]:
    """
    Subgroups generated by random tuples, deduplicated up to conjugacy.

    Args:
        ambient: an enumerated group, or a spec too large to enumerate (sampled
            by product replacement; duplicates are then detected by equality)
        seed: seed of the numpy generator
        num_gens: generators per sample
        samples: number of samples
        cap: enumeration cap for each sampled subgroup
        notes: receives one entry per sample that exceeded the cap

    Returns:
        Pairwise non-conjugate subgroups in order of discovery
    """
    rng = np.random.default_rng(seed)
    G = ambient if isinstance(ambient, EnumeratedGroup) else None
    spec = G.spec if G is not None else ambient
    if G is None and samples:
        pool = sample_ambient_elements(spec, rng, samples * num_gens)
    found: List[EnumeratedGroup] = []
    for t in range(samples):
        if G is not None:
            gens = G.elements[rng.integers(G.order, size=num_gens)]
        else:
            gens = pool[t * num_gens:(t + 1) * num_gens]
        sub_spec = spec.with_generators(gens, label=f"{spec.label}:s{seed}:{t}")
        try:
            H = enumerate_group(sub_spec, cap=cap)
        except CapExceeded as e:
            logger.info(f"Sample {t} exceeded the cap ({e.details.get('partial_count')} elements)")
            if notes is not None:
                notes.append(f"sample {t}: CAP_EXCEEDED")
            continue
        duplicate = False
        for K in found:
            if K.order != H.order:
                continue
            if np.array_equal(K.codes, H.codes):
                duplicate = True
            elif G is not None and subgroup_conjugacy_test(H, K, G) is not None:
                duplicate = True
            if duplicate:
                break
        if not duplicate:
            found.append(H)
    logger.info(f"Subgroup search (seed {seed}): {len(found)} classes from {samples} samples")
    return found


def fingerprint(G: EnumeratedGroup) -> Dict[str, object]:
    """Order, class count, |G^ab|, ell-ranks of G^ab and center order."""
    derived = derived_subgroup(G)
    ab = G.order // derived.order
    ranks = {str(ell): hom_dim(G, ell) for ell in sorted(sympy.factorint(ab))} if ab > 1 else {}
    return {
        "order": G.order,
        "classes": G.classes.count,
        "abelianization_order": ab,
        "abelianization_ranks": ranks,
        "center_order": center(G).order,
    }
