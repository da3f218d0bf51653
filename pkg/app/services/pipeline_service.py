"""
Pipeline service.

This module drives the CLI commands: it resolves inputs (group files or
built-in fixtures), runs the algebra, consults the report cache and writes
CSV/JSON outputs deterministically.
"""
import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.algebra.cohom import h0_dim, h1_dim
from app.algebra.heights import count_ratio_table, rational_invariants, schanuel_constant
from app.algebra.liealg import (
    BUILTIN_ROOT_DATA,
    RootDatum,
    parse_root_datum,
    pretty_good_primes,
    weyl_group_order,
)
from app.algebra.lift import LiftProblem, invariant_summand_lift, lift_check, topnil_part
from app.algebra.linalg import Mat, format_matrix, parse_matrix, parse_ring_tag, ring_of
from app.algebra.matgrp import GroupSpec, enumerate_group, random_subgroup_search
from app.algebra.repmod import abs_irreducible, dual, natural_module, trivial_module
from app.config.settings import settings
from app.models.errors import AlgebraError, CapExceeded, InputError
from app.models.schemas import (
    HEIGHTS_COLUMNS,
    REPORT_COLUMNS,
    AdequacyReport,
    CohomologyReport,
    JobConfig,
    LiftCheckReport,
    RootDataReport,
    SearchEntry,
    SearchSummary,
)
from app.services import cache_service
from app.services.adequacy_service import assess, lie_data_for
from app.services.fixture_service import (
    EXPERIMENTAL,
    FIXTURES,
    fixture_spec,
    group_file_from_spec,
    load_specs,
    write_group_file,
)

# Set up logging
logger = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"
MODULES = ("trivial", "natural", "natural-dual", "adjoint", "adjoint-dual")
_ASSESS_TAGS = ("natural", "adjoint-dual", "trivial")


def resolve_inputs(inputs: Sequence[str]) -> List[GroupSpec]:
    """Group specs from file paths or 'fixture:<name>' entries, in input order."""
    specs = []
    for item in inputs:
        if item.startswith(FIXTURE_PREFIX):
            name = item[len(FIXTURE_PREFIX):]
            if name in EXPERIMENTAL:
                logger.warning(f"Fixture {name} is experimental")
            specs.append(fixture_spec(name))
        else:
            specs.extend(load_specs(item))
    return specs


# -- assess ------------------------------------------------------------------------------

def _error_row(label: str, error: AlgebraError) -> List[str]:
    row = [""] * len(REPORT_COLUMNS)
    row[-1] = f"{error.code}:{label}"
    return row


def _sort_key(report: AdequacyReport) -> Tuple:
    fp = report.fingerprint
    return (report.order_gamma_prime, report.order_gamma, fp.get("classes", 0),
            fp.get("abelianization_order", 0), fp.get("center_order", 0), report.label)


def assess_spec(spec: GroupSpec, config: JobConfig) -> Union[AdequacyReport, AlgebraError]:
    """Enumerate and assess one group; errors are returned, not raised."""
    try:
        G = enumerate_group(spec, cap=config.max_order)
        key = cache_service.report_key(G, _ASSESS_TAGS + (f"seed={config.seed}",))
        cached = cache_service.get_report(key, config.cache_backend, config.cache_dir)
        if cached is not None:
            report = AdequacyReport.model_validate(cached)
            report.label = spec.label
            return report
        report = assess(G, seed=config.seed)
        cache_service.save_report(key, report.model_dump(), config.cache_backend, config.cache_dir)
        return report
    except CapExceeded as e:
        logger.warning(f"{spec.label}: {e.message}")
        return e
    except AlgebraError as e:
        if e.code == "INVARIANT_VIOLATION":
            raise
        logger.error(f"{spec.label}: {e.code} {e.message}")
        return e


def report_csv(reports: Sequence[AdequacyReport], failures: Sequence[Tuple[str, AlgebraError]] = ()) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for report in reports:
        writer.writerow(report.csv_row())
    for label, error in failures:
        writer.writerow(_error_row(label, error))
    return buffer.getvalue()


def run_assess(config: JobConfig) -> Tuple[List[AdequacyReport], List[Tuple[str, AlgebraError]]]:
    """
    Assess every input group and write the CSV and JSON reports.

    Groups run concurrently on config.threads workers; rows are sorted by
    fingerprint so the output does not depend on scheduling.
    """
    specs = resolve_inputs(config.inputs)
    if config.threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(lambda s: assess_spec(s, config), specs))
    else:
        results = [assess_spec(s, config) for s in specs]
    reports = sorted((r for r in results if isinstance(r, AdequacyReport)), key=_sort_key)
    failures = [(s.label, r) for s, r in zip(specs, results) if isinstance(r, AlgebraError)]
    if config.report_path:
        Path(config.report_path).write_text(report_csv(reports, failures))
        logger.info(f"Wrote {len(reports)} report rows to {config.report_path}")
    if config.json_path:
        payload = {
            "seed": config.seed,
            "version": settings.VERSION,
            "reports": [r.model_dump() for r in reports],
            "failures": [{"label": label, **e.to_response().model_dump()} for label, e in failures],
        }
        Path(config.json_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return reports, failures


# -- search ------------------------------------------------------------------------------

def run_search(config: JobConfig) -> SearchSummary:
    """
    Seeded random subgroup search in one ambient group.

    The ambient is enumerated when its order is within config.max_order and
    sampled by product replacement otherwise.
    """
    specs = resolve_inputs(config.inputs)
    if len(specs) != 1:
        raise InputError("search needs exactly one ambient group", {"inputs": list(config.inputs)})
    spec = specs[0]
    try:
        ambient = enumerate_group(spec, cap=config.max_order)
    except CapExceeded:
        logger.info(f"{spec.label} exceeds the cap; sampling by product replacement")
        ambient = spec
    notes: List[str] = []
    found = random_subgroup_search(ambient, config.seed, config.num_gens, config.samples,
                                   cap=config.max_order, notes=notes)
    out_dir = Path(config.output_dir) if config.output_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for H in found:
        sample = int(H.label.rsplit(":", 1)[1])
        abs_irred = abs_irreducible(natural_module(H))
        entry = SearchEntry(sample=sample, order=H.order, abs_irred=abs_irred)
        if abs_irred:
            report = assess(H, seed=config.seed, oracle=False)
            entry.condA, entry.h0_adjoint_dual, entry.adequate = report.condA, report.h0_adjoint_dual, report.adequate
        if out_dir:
            path = out_dir / f"sample_{sample:04d}_order_{H.order}.json"
            write_group_file(path, [group_file_from_spec(H.spec)])
            entry.file = path.name
        entries.append(entry)
    for note in notes:
        sample, _, code = note.partition(": ")
        entries.append(SearchEntry(sample=int(sample.split()[1]), note=code))
    entries.sort(key=lambda e: e.sample)
    summary = SearchSummary(ambient=spec.label, seed=config.seed, samples=config.samples,
                            num_gens=config.num_gens, version=settings.VERSION, entries=entries)
    if config.json_path:
        Path(config.json_path).write_text(json.dumps(summary.model_dump(), indent=2, sort_keys=True) + "\n")
    return summary


# -- cohomology ----------------------------------------------------------------------------

def module_for(G, tag: str):
    """The coefficient module named by a cohomology tag."""
    if tag == "trivial":
        return trivial_module(G)
    if tag == "natural":
        return natural_module(G)
    if tag == "natural-dual":
        return dual(natural_module(G))
    lie = lie_data_for(G)
    return lie.adjoint_module(G) if tag == "adjoint" else lie.adjoint_dual_module(G)


def run_cohomology(config: JobConfig, modules: Sequence[str] = MODULES) -> List[CohomologyReport]:
    reports = []
    for spec in resolve_inputs(config.inputs):
        G = enumerate_group(spec, cap=config.max_order)
        for tag in modules:
            if tag not in MODULES:
                raise InputError(f"unknown module {tag!r}", {"allowed": list(MODULES)})
            M = module_for(G, tag)
            reports.append(CohomologyReport(label=spec.label, order=G.order, module=tag, dim=M.dim,
                                            h0=h0_dim(M), h1=h1_dim(M), seed=config.seed,
                                            version=settings.VERSION))
    return reports


# -- lifting -------------------------------------------------------------------------------

def parse_split(text: Optional[str]) -> Optional[int]:
    """'eigen=<a>' selects the residual eigenvalue a; 'topnil' or None the nilpotent part."""
    if text is None or text.strip() == "topnil":
        return None
    key, _, value = text.partition("=")
    try:
        if key.strip() != "eigen":
            raise ValueError(key)
        return int(value)
    except ValueError:
        raise InputError(f"split must be 'eigen=<a>' or 'topnil', got {text!r}", {"split": text})


def run_lift_demo(matrix_text: str, eigenvalue: Optional[int] = None,
                  ring_text: Optional[str] = None) -> Dict[str, str]:
    """
    Canonical lift of a residual eigenspace, or the topologically nilpotent part.

    Args:
        matrix_text: square matrix in the text encoding, e.g. 'Zmod[3,2]:1,1;3,2'; the
            ring tag may be left out when ring_text is given
        eigenvalue: residual eigenvalue; None selects the topologically nilpotent part
        ring_text: ring tag such as 'Zmod[3,2]'
    """
    if ring_text is not None and ":" not in matrix_text:
        matrix_text = f"{ring_text.strip()}:{matrix_text}"
    M = parse_matrix(matrix_text)
    ring = ring_of(M.ring)
    if ring_text is not None and str(ring_of(parse_ring_tag(ring_text))) != str(ring):
        raise InputError("matrix ring tag differs from the requested ring", {"ring": ring_text, "matrix": str(ring)})
    if M.rows != M.cols:
        raise InputError("lift-demo needs a square matrix", {"shape": [M.rows, M.cols]})
    if eigenvalue is None:
        summand = topnil_part(ring, M.data)
        kind = "topnil"
    else:
        summand = invariant_summand_lift(LiftProblem.for_eigenvalue(ring, M.data, eigenvalue))
        kind = f"eigenvalue {eigenvalue}"
    basis = format_matrix(Mat(ring, summand.basis)) if summand.rank else f"{ring}:"
    logger.info(f"lift-demo ({kind}): rank {summand.rank}")
    return {"kind": kind, "rank": str(summand.rank), "basis": basis}


def run_lift_check(seed: int, trials: int, p: int = 3, N: int = 2) -> LiftCheckReport:
    summary = lift_check(seed=seed, trials=trials, p=p, N=N)
    properties = {name: {"passed": t.passed, "failed": t.failed, "skipped": t.skipped}
                  for name, t in summary.properties.items()}
    return LiftCheckReport(seed=summary.seed, trials=summary.trials, ring=summary.ring,
                           properties=properties, ok=summary.ok)


# -- heights and root data -------------------------------------------------------------------

def run_heights(primes: Sequence[int], bounds: Sequence[int], csv_path: Optional[str] = None) -> str:
    """CSV of counts against the leading constant; written to csv_path when given."""
    rows = count_ratio_table(primes, bounds)
    constant = schanuel_constant(rational_invariants(), sorted(set(primes)))
    buffer = io.StringIO()
    buffer.write(f"# Sigma={','.join(str(q) for q in sorted(set(primes)))} C={constant:.9f} affine points only\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(HEIGHTS_COLUMNS)
    for row in rows:
        writer.writerow([row["X"], row["count"], f"{row['constant_times_X2']:.6f}", f"{row['ratio']:.6f}"])
    text = buffer.getvalue()
    if csv_path:
        Path(csv_path).write_text(text)
    return text


def run_rootdata(builtin: Optional[str] = None, path: Optional[str] = None, bound: int = 50) -> RootDataReport:
    if builtin:
        if builtin not in BUILTIN_ROOT_DATA:
            raise InputError(f"unknown root datum {builtin!r}", {"allowed": sorted(BUILTIN_ROOT_DATA)})
        datum: RootDatum = BUILTIN_ROOT_DATA[builtin]
    elif path:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e}", {"file": path})
        datum = parse_root_datum(text, name=Path(path).stem)
    else:
        raise InputError("rootdata needs --builtin or --file")
    return RootDataReport(name=datum.name, rank=datum.rank, roots=len(datum.roots),
                          bad_primes=pretty_good_primes(datum, bound),
                          weyl_order=weyl_group_order(datum), bound=bound)


def list_fixtures() -> List[str]:
    return sorted(FIXTURES)
