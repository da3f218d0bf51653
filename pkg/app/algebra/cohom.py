"""
First cohomology of enumerated groups with coefficients in a GModule.

A 1-cocycle is determined by its values x_s on the generators. Along the
Cayley tree every c(g) becomes a linear form C[g] x through
c(g s) = c(g) + g c(s); each Cayley edge off the tree gives one block of
linear constraints on x.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.algebra.linalg import RowSpaceAccumulator
from app.algebra.matgrp import EnumeratedGroup
from app.algebra.repmod import GModule, h0, restrict
from app.config.settings import settings
from app.models.errors import CapExceeded

# Set up logging
logger = logging.getLogger(__name__)

# Cayley edges processed per accumulator update
EDGE_CHUNK = 2048


class CocycleSystem:
    """
    Linear forms of a cocycle on every element, in the generator unknowns.

    forms[g] is a d x (d*m) matrix with c(g) = forms[g] @ x, where x stacks the
    m generator values.
    """

    def __init__(self, module: GModule):
        self.module = module
        self.group = module.group
        self.dim = module.dim
        self.unknowns = module.dim * self.group.ngens
        self.forms = self._tree_forms()
        self.constraints = RowSpaceAccumulator(module.field, self.unknowns)

    def _storage_dtype(self):
        return np.int8 if self.module.field.q < 128 else np.int64

    def _tree_forms(self) -> np.ndarray:
        G, M, F = self.group, self.module, self.module.field
        d = self.dim
        acts = M.all_actions
        forms = np.zeros((G.order, d, self.unknowns), dtype=self._storage_dtype())
        for layer in G.layers[1:]:
            parents = G.parent[layer]
            forms[layer] = forms[parents]
            for s in range(G.ngens):
                sel = layer[G.pgen[layer] == s]
                if sel.size == 0:
                    continue
                block = slice(s * d, (s + 1) * d)
                current = forms[sel, :, block].astype(np.int64)
                forms[sel, :, block] = F.vadd(current, acts[G.parent[sel]])
        return forms

    def edge_constraints(self, s: int, chunk: np.ndarray) -> np.ndarray:
        """Rows of C[g s] - C[g] - g E_s for the elements g in chunk."""
        G, F = self.group, self.module.field
        d = self.dim
        target = self.forms[G.rmul[s, chunk]].astype(np.int64)
        source = self.forms[chunk].astype(np.int64)
        diff = F.vsub(target, source)
        block = slice(s * d, (s + 1) * d)
        diff[:, :, block] = F.vsub(diff[:, :, block], self.module.all_actions[chunk])
        rows = diff.reshape(-1, self.unknowns)
        rows = rows[np.any(rows != 0, axis=1)]
        return np.unique(rows, axis=0) if rows.shape[0] else rows

    def solve(self, rank_bound: Optional[int] = None) -> int:
        """
        Harvest constraints from every Cayley edge.

        Args:
            rank_bound: largest possible constraint rank; harvesting stops once reached

        Returns:
            dim Z^1
        """
        G = self.group
        bound = self.unknowns if rank_bound is None else rank_bound
        for s in range(G.ngens):
            for start in range(0, G.order, EDGE_CHUNK):
                chunk = np.arange(start, min(start + EDGE_CHUNK, G.order))
                self.constraints.add_rows(self.edge_constraints(s, chunk))
                if self.constraints.rank >= bound:
                    logger.debug(f"constraint rank reached its bound {bound} at generator {s}")
                    return self.unknowns - self.constraints.rank
        return self.unknowns - self.constraints.rank


def h0_dim(M: GModule) -> int:
    return h0(M).rank


def h1_dim(M: GModule) -> int:
    """
    dim H^1(G, M) = dim Z^1 - dim B^1 with dim B^1 = dim M - dim M^G.

    Coefficients are taken over M.field; dimensions over an extension follow by
    flat base change.
    """
    G = M.group
    fixed = h0_dim(M)
    coboundaries = M.dim - fixed
    system = CocycleSystem(M)
    z1 = system.solve(rank_bound=system.unknowns - coboundaries)
    result = z1 - coboundaries
    logger.info(f"h1({G.label or G.order}, {M.tag}) = {result} (Z1 {z1}, B1 {coboundaries})")
    return result


def h1_bruteforce(M: GModule, max_order: Optional[int] = None) -> int:
    """
    Oracle: one unknown vector per element and the cocycle identity on every pair.
    """
    G, F = M.group, M.field
    cap = settings.BRUTEFORCE_MAX_ORDER if max_order is None else max_order
    if G.order > cap:
        raise CapExceeded(f"brute-force cohomology is limited to order {cap}",
                          {"order": G.order, "cap": cap})
    N, d = G.order, M.dim
    acts = M.all_actions
    unknowns = N * d
    fixed = h0_dim(M)
    bound = unknowns - (d - fixed)
    acc = RowSpaceAccumulator(F, unknowns)
    ident = np.eye(d, dtype=np.int64)
    for i in range(N):
        # c(g_i g_j) - c(g_i) - g_i c(g_j) = 0 for every j
        prod = G.index_of(F.matmul(G.elements[i][None], G.elements))
        rows = np.zeros((N, d, unknowns), dtype=np.int64)
        for j in range(N):
            k = int(prod[j])
            rows[j, :, k * d:(k + 1) * d] = F.vadd(rows[j, :, k * d:(k + 1) * d], ident)
            rows[j, :, i * d:(i + 1) * d] = F.vsub(rows[j, :, i * d:(i + 1) * d], ident)
            rows[j, :, j * d:(j + 1) * d] = F.vsub(rows[j, :, j * d:(j + 1) * d], acts[i])
        acc.add_rows(rows.reshape(-1, unknowns))
        if acc.rank >= bound:
            break
    return (unknowns - acc.rank) - (d - fixed)


@dataclass
class RestrictionCheck:
    applicable: bool
    h1_group: int
    h1_subgroup: int

    @property
    def holds(self) -> bool:
        return not self.applicable or self.h1_group <= self.h1_subgroup


def h1_restriction_check(G: EnumeratedGroup, K: EnumeratedGroup, M: GModule) -> RestrictionCheck:
    """
    Restriction to K is injective on H^1 when p does not divide [G:K].

    The comparison applies when additionally M^K = 0.
    """
    p = M.field.p
    MK = restrict(M, K)
    applicable = (G.order // K.order) % p != 0 and h0_dim(MK) == 0
    result = RestrictionCheck(applicable, h1_dim(M), h1_dim(MK))
    if applicable and not result.holds:
        logger.warning(f"restriction to {K.label or K.order} is not injective on H^1")
    return result
