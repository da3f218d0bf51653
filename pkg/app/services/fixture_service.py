"""
Fixture library and group-file I/O.

This module provides the built-in group constructions used by the CLI and the
test-suite, and converts between group definition files (JSON, validated by
the GroupFile schema) and GroupSpec objects.
"""
import json
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np
from pydantic import TypeAdapter, ValidationError

from app.algebra.ff import FieldDesc, field_create, field_element_decode, field_element_encode, primitive_element
from app.algebra.linalg import inverse_array
from app.algebra.matgrp import (
    GroupSpec,
    builtin_spec,
    sl2_generators,
    symplectic_adapted_basis,
)
from app.models.errors import AlgebraError, InputError
from app.models.schemas import FieldSpec, GroupFile

# Set up logging
logger = logging.getLogger(__name__)

_GROUP_FILES = TypeAdapter(Union[GroupFile, List[GroupFile]])


def _elementary(n: int, entries: Dict[tuple, int], F: FieldDesc) -> np.ndarray:
    g = np.eye(n, dtype=np.int64)
    for (i, j), c in entries.items():
        g[i, j] = c % F.p
    return g


# -- constructions -------------------------------------------------------------------

def imprimitive_sp2_wreath(p: int = 3) -> GroupSpec:
    """
    Sp2(F_p) x Sp2(F_p) on the planes <e0,e3> and <e1,e2>, extended by the
    form-preserving swap e0 <-> e1, e2 <-> e3. Order 1152 for p = 3.
    """
    F = field_create(p)
    swap = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.int64)
    return GroupSpec.create(F, 4, "Sp", block_sp2_generators(F) + [swap], label=f"Sp2xSp2.2(F_{p})")


def block_sp2_generators(F: FieldDesc) -> List[np.ndarray]:
    return [
        _elementary(4, {(0, 3): 1}, F),
        _elementary(4, {(3, 0): 1}, F),
        _elementary(4, {(1, 2): 1}, F),
        _elementary(4, {(2, 1): 1}, F),
    ]


def block_sp2xsp2(p: int = 3) -> GroupSpec:
    F = field_create(p)
    return GroupSpec.create(F, 4, "Sp", block_sp2_generators(F), label=f"Sp2xSp2(F_{p})")


def diagonal_torus(p: int = 3) -> GroupSpec:
    """The split maximal torus diag(a, b, nu/b, nu/a) of GSp4(F_p)."""
    F = field_create(p)
    w = primitive_element(F)
    wi = F.inv(w)
    gens = [
        np.diag([w, 1, 1, wi]).astype(np.int64),
        np.diag([1, w, wi, 1]).astype(np.int64),
        np.diag([1, 1, w, w]).astype(np.int64),
    ]
    return GroupSpec.create(F, 4, "GSp", gens, label=f"T(GSp4(F_{p}))")


def isotropic_stabilizer(p: int = 3) -> GroupSpec:
    """Stabilizer of the isotropic line <e0> in Sp4(F_p)."""
    F = field_create(p)
    gens = [
        np.diag([p - 1, 1, 1, p - 1]).astype(np.int64),
        _elementary(4, {(1, 2): 1}, F),
        _elementary(4, {(2, 1): 1}, F),
        _elementary(4, {(0, 1): 1, (2, 3): -1}, F),
    ]
    return GroupSpec.create(F, 4, "Sp", gens, label=f"Stab(e0)<Sp4(F_{p})")


def sl2_in_gl2(p: int) -> GroupSpec:
    F = field_create(p)
    return GroupSpec.create(F, 2, "GL", sl2_generators(F), label=f"SL2(F_{p})<GL2")


def cyclic4_gl2_f3() -> GroupSpec:
    """C4 generated by a rotation; irreducible over F_3 but split over F_9."""
    F = field_create(3)
    return GroupSpec.create(F, 2, "GL", [np.array([[0, 1], [2, 0]], dtype=np.int64)], label="C4<GL2(F_3)")


def similitude_cyclic_f3() -> GroupSpec:
    """<diag(1,1,2,2)>: similitude 2, which is also an eigenvalue ratio."""
    F = field_create(3)
    return GroupSpec.create(F, 4, "GSp", [np.diag([1, 1, 2, 2]).astype(np.int64)], label="<diag(1,1,2,2)>")


def semilinear_sl2_f9() -> GroupSpec:
    """
    SL2(F_9) extended by the Frobenius, acting on F_9^2 = F_3^4.

    F_9 = F_3[t]/(t^2+1) with F_3-basis (e, te, f, tf); the alternating form is
    Tr(det(u, v)), moved to the standard form by a symplectic adapted basis.
    Order 1440.
    """
    F = field_create(3)
    gram = np.array([[0, 0, 2, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 2, 0, 0]], dtype=np.int64)

    def mult(a: int, b: int) -> np.ndarray:
        # multiplication by a + b t on (x, y) ~ x + y t
        return np.array([[a, -b], [b, a]], dtype=np.int64) % 3

    zero, one = np.zeros((2, 2), dtype=np.int64), np.eye(2, dtype=np.int64)
    x1 = np.block([[one, one], [zero, one]])
    y1 = np.block([[one, zero], [one, one]])
    h = np.block([[mult(1, 1), zero], [zero, mult(2, 1)]])
    frob = np.diag([1, 2, 1, 2]).astype(np.int64)
    P = symplectic_adapted_basis(F, gram)
    P_inv = inverse_array(F, P)
    gens = [F.matmul(F.matmul(P_inv, g % 3), P) for g in (x1, y1, h, frob)]
    return GroupSpec.create(F, 4, "Sp", gens, label="SigmaL2(F_9)<Sp4(F_3)")


def _standard(name: str, p: int) -> Callable[[], GroupSpec]:
    return lambda: builtin_spec(name, p)


FIXTURES: Dict[str, Callable[[], GroupSpec]] = {
    "gsp4_f3": _standard("GSp4", 3),
    "sp4_f3": _standard("Sp4", 3),
    "sp4_f5": _standard("Sp4", 5),
    "gsp4_f5": _standard("GSp4", 5),
    "imprimitive_1152": imprimitive_sp2_wreath,
    "block_sp2xsp2": block_sp2xsp2,
    "diag_torus": diagonal_torus,
    "isotropic_stabilizer": isotropic_stabilizer,
    "sl2_f11": lambda: sl2_in_gl2(11),
    "sl2_f13": lambda: sl2_in_gl2(13),
    "cyclic4_gl2_f3": cyclic4_gl2_f3,
    "similitude_cyclic_f3": similitude_cyclic_f3,
    "sigmal2_f9": semilinear_sl2_f9,
}

EXPERIMENTAL = {"sigmal2_f9"}


def fixture_spec(name: str) -> GroupSpec:
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}", {"allowed": sorted(FIXTURES)})
    return FIXTURES[name]()


# -- group files ------------------------------------------------------------------------

def _matrix_from_file(F: FieldDesc, rows: List[list]) -> np.ndarray:
    return np.array([[field_element_decode(F, x) for x in row] for row in rows], dtype=np.int64)


def _matrix_to_file(F: FieldDesc, g: np.ndarray) -> List[list]:
    if F.k == 1:
        return [[int(x) for x in row] for row in g]
    return [[field_element_encode(F, int(x)) for x in row] for row in g]


def spec_from_group_file(entry: GroupFile) -> GroupSpec:
    """Build and validate a GroupSpec from one parsed group definition."""
    F = field_create(entry.field.p, entry.field.k)
    gens = [_matrix_from_file(F, g) for g in entry.generators]
    form = None if entry.form is None else _matrix_from_file(F, entry.form)
    return GroupSpec.create(F, entry.n, entry.ambient, gens, form=form, label=entry.label)


def group_file_from_spec(spec: GroupSpec, expected: Optional[dict] = None,
                         experimental: bool = False) -> GroupFile:
    F = spec.field
    return GroupFile(
        label=spec.label,
        field=FieldSpec(p=F.p, k=F.k),
        ambient=spec.ambient,
        n=spec.n,
        generators=[_matrix_to_file(F, g) for g in spec.generators],
        form=None if spec.form is None else _matrix_to_file(F, spec.form),
        experimental=experimental,
        expected=expected or {},
    )


def load_group_file(path: Union[str, Path]) -> List[GroupFile]:
    """
    Parse a group definition file holding one group or a list of groups.

    Raises:
        InputError: with file, line and column for malformed JSON, or the
            offending field location for schema violations
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}", {"file": str(path)})
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}",
                         {"file": str(path), "line": e.lineno, "column": e.colno})
    try:
        parsed = _GROUP_FILES.validate_python(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise InputError(f"{path}: {first['msg']} at {'/'.join(str(x) for x in first['loc'])}",
                         {"file": str(path), "location": [str(x) for x in first["loc"]]})
    entries = parsed if isinstance(parsed, list) else [parsed]
    logger.info(f"Loaded {len(entries)} group definition(s) from {path}")
    return entries


def load_specs(path: Union[str, Path]) -> List[GroupSpec]:
    specs = []
    for idx, entry in enumerate(load_group_file(path)):
        try:
            specs.append(spec_from_group_file(entry))
        except AlgebraError as e:
            e.details.setdefault("file", str(path))
            e.details.setdefault("entry", idx)
            raise
    return specs


def write_group_file(path: Union[str, Path], entries: List[GroupFile]) -> None:
    payload = [e.model_dump() for e in entries]
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    logger.debug(f"Wrote {len(entries)} group definition(s) to {path}")
