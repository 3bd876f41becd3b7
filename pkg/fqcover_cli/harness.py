"""
Experiment campaigns behind the CLI commands.

Each `run_*` function returns a `RunReport`. Sweeps are split into shards of
at most CHUNK sets; shards run on a thread pool and their outcomes are merged
by adding tallies, taking maxima of scores and sorting counterexamples, so a
report does not depend on the number of workers.
"""

import time
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb, isqrt
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from fqcover_cli.config import settings
from fqcover_cli.covering import (
    ScalarSet,
    bilinear_cover,
    cover_threshold_met,
    covers_units,
    degree_for_epsilon,
    dot_product_set,
    dot_threshold_met,
    key_lower_bound_check,
    least_cover_size,
    positive_proportion_check,
    sum_of_products,
)
from fqcover_cli.errors import BadSpec, FqCoverWarning, ReducibleModulus, SpectralMismatch
from fqcover_cli.families import (
    check_budget,
    colex_masks,
    mask_elements,
    point_families,
    sample_rng,
    sample_subset,
    scalar_families,
    shard_ranges,
)
from fqcover_cli.fourier import (
    SpectralFn,
    character_matrix,
    fourier_forward,
    fourier_forward_direct,
    fourier_invert,
    identity_report,
    plancherel_check,
    space_of,
    tolerance,
)
from fqcover_cli.gf import FieldCtx, field_of_order, make_field
from fqcover_cli.incidence import (
    NuProfile,
    PointSet,
    nu,
    nu_bruteforce,
    nu_positive_units,
    nu_spectral,
    remainder_bound_check,
    rotating_planes_apply,
    second_moment_check,
    strip_origin,
    verify_convolution_identity,
    verify_hyperplane_identity,
    verify_plane_average_identity,
)
from fqcover_cli.model import (
    CheckTally,
    Counterexample,
    ExperimentSpec,
    IdentityReport,
    RunReport,
)

T = TypeVar("T")

CHUNK = 512
SELFTEST_ROSTER = (2, 3, 4, 5, 7, 8, 9, 13, 16, 25)
SELFTEST_DIMS = (1, 2, 3)
# q^d up to which the O(q^{2d}) oracles run in the selftest
HEAVY_POINTS = 4096
SELFTEST_SET_SIZE = 256
AXIOM_EXHAUSTIVE = 512
AXIOM_SAMPLES = 10**5
MISSING_SHOWN = 8


@dataclass
class Outcome:
    """Mergeable result of a shard."""

    passed: Counter = field(default_factory=Counter)
    failed: Counter = field(default_factory=Counter)
    counterexamples: List[Counterexample] = field(default_factory=list)
    sharpness: Dict[str, float] = field(default_factory=dict)
    non_covering: Counter = field(default_factory=Counter)
    worst: Optional[Tuple[float, List[int], NuProfile]] = None

    def record(
        self,
        check: str,
        ok: bool,
        size: int = 0,
        elements: Sequence[int] = (),
        detail: str = "",
    ):
        if ok:
            self.passed[check] += 1
            return
        self.failed[check] += 1
        self.counterexamples.append(
            Counterexample(check=check, size=size, elements=list(elements), detail=detail)
        )

    def score(self, name: str, value: float):
        self.sharpness[name] = max(self.sharpness.get(name, value), value)

    def keep_worst(self, score: float, elements: List[int], profile: NuProfile):
        self.worst = _worse(self.worst, (score, elements, profile))

    def merge(self, other: "Outcome") -> "Outcome":
        sharpness = dict(self.sharpness)
        for name, value in other.sharpness.items():
            sharpness[name] = max(sharpness.get(name, value), value)
        return Outcome(
            passed=self.passed + other.passed,
            failed=self.failed + other.failed,
            counterexamples=self.counterexamples + other.counterexamples,
            sharpness=sharpness,
            non_covering=self.non_covering + other.non_covering,
            worst=_worse(self.worst, other.worst),
        )

    def tallies(self) -> Dict[str, CheckTally]:
        return {
            check: CheckTally(passed=self.passed[check], failed=self.failed[check])
            for check in sorted(set(self.passed) | set(self.failed))
        }


def _worse(a, b):
    # highest score wins, ties go to the smaller element list
    if a is None:
        return b
    if b is None:
        return a
    if b[0] > a[0] or (b[0] == a[0] and b[1] < a[1]):
        return b
    return a


def _run_sharded(tasks: List[T], work: Callable[[T], Outcome], workers: Optional[int]) -> Outcome:
    workers = settings.workers if workers is None else workers
    if workers < 1:
        raise BadSpec(f"Worker count must be at least 1, got {workers}")
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, tasks))
    else:
        parts = [work(task) for task in tasks]
    return reduce(Outcome.merge, parts, Outcome())


def _report(
    command: str,
    outcome: Outcome,
    started: float,
    spec: Optional[ExperimentSpec] = None,
    F: Optional[FieldCtx] = None,
    results: Optional[Dict[str, Any]] = None,
) -> RunReport:
    return RunReport(
        command=command,
        spec=spec,
        field=F.descriptor() if F is not None else None,
        tallies=outcome.tallies(),
        sharpness=dict(sorted(outcome.sharpness.items())),
        counterexamples=sorted(outcome.counterexamples, key=lambda c: c.sort_key()),
        results=results or {},
        wall_clock=time.perf_counter() - started,
    )


def _size_range(sizes: Optional[Tuple[int, int]], lo: int, hi: int, cap: int) -> List[int]:
    lo, hi = sizes or (lo, hi)
    return list(range(lo, min(hi, cap) + 1))


# per-set checks


def check_scalar_set(
    A: ScalarSet, d: int, checks: Sequence[str], outcome: Outcome, label: str = ""
) -> bool:
    """Runs the requested checks on A and dA^2; returns whether dA^2 covers F_q^*."""
    F = A.field
    size = A.count
    elements = A.elements.tolist()
    S = sum_of_products(A, d)
    covered, missing = covers_units(S)
    if not covered:
        outcome.non_covering[size] += 1

    if "cover" in checks and cover_threshold_met(A, d):
        outcome.record(
            "cover", covered, size, elements, f"{label} misses {missing[:MISSING_SHOWN]}"
        )

    units = A.without(0)
    if "keylowerbound" in checks:
        verdict = positive_proportion_check(units, d)
        outcome.record(
            "keylowerbound",
            verdict.holds,
            size,
            elements,
            f"{label} {verdict.witness_lhs} < {verdict.witness_rhs}",
        )

    if "bilinear" in checks:
        verdict = bilinear_cover([A] * d, [A] * d)
        outcome.record(
            "bilinear",
            verdict.holds,
            size,
            elements,
            f"{label} weight {verdict.witness_lhs} > {verdict.witness_rhs} without cover",
        )

    if "identities" in checks and size:
        E = PointSet.product(F, [A.elements] * d)
        outcome.record(
            "dot_product_reduction",
            dot_product_set(E) == S,
            size,
            elements,
            f"{label} dot-product set of A^{d} differs from dA^2",
        )

    point_checks = [c for c in checks if c in ("remainder", "identities", "second_moment")]
    if point_checks and units.count:
        E = PointSet.product(F, [units.elements] * d)
        check_point_set(E, point_checks, outcome, f"{label} (A minus 0)^{d}")
    return covered


def check_point_set(E: PointSet, checks: Sequence[str], outcome: Outcome, label: str = ""):
    size = E.count
    elements = E.indices.tolist()
    profile = nu(E)

    if "cover" in checks and dot_threshold_met(E):
        covered, missing = covers_units(dot_product_set(E))
        outcome.record(
            "cover",
            covered and nu_positive_units(profile),
            size,
            elements,
            f"{label} dot products miss {missing[:MISSING_SHOWN]}",
        )

    if "remainder" in checks:
        report = remainder_bound_check(E, profile)
        outcome.record(
            "remainder", report.holds, size, elements, f"{label} fails at t={report.violations[:1]}"
        )
        outcome.score("remainder", report.sharpness)
        outcome.keep_worst(report.sharpness, elements, profile)

    E0 = strip_origin(E)
    if "identities" in checks:
        reports = [verify_convolution_identity(E), verify_plane_average_identity(E)]
        if E0.count:
            reports.append(verify_hyperplane_identity(E0))
        for report in reports:
            outcome.record(
                report.name,
                report.holds,
                size,
                elements,
                f"{label} error {report.max_error:.3e}",
            )

    if not E0.count:
        return
    origin_free = nu(E0) if E.contains_origin else profile

    if "second_moment" in checks:
        report = second_moment_check(E0, origin_free)
        ok = report.holds and report.plane_bound_holds and report.cauchy_schwarz_holds
        outcome.record(
            "second_moment", ok, size, elements, f"{label} {report.lhs} > {report.rhs}"
        )

    if "keylowerbound" in checks:
        verdict = key_lower_bound_check(E0)
        outcome.record(
            "keylowerbound",
            verdict.holds,
            size,
            elements,
            f"{label} {verdict.witness_lhs} < {verdict.witness_rhs}",
        )
        outcome.score("keylowerbound", verdict.witness_rhs / verdict.witness_lhs)


# selftest


def _field_axioms(F: FieldCtx, seed: int) -> List[str]:
    """Names of the field axioms that fail."""
    e = F.elements
    a, b = e[:, None], e[None, :]
    p = F.p
    failures = []

    if not np.array_equal(F.vadd(a, b), F.vadd(b, a)):
        failures.append("additive commutativity")
    if not np.array_equal(F.vmul(a, b), F.vmul(b, a)):
        failures.append("multiplicative commutativity")
    if not (np.array_equal(F.vadd(e, 0), e) and np.array_equal(F.vmul(e, 1), e)):
        failures.append("identities")
    if not np.all(F.vadd(e, F.vneg(e)) == 0):
        failures.append("additive inverses")
    if not np.all(F.vmul(e[1:], F.vinv(e[1:])) == 1):
        failures.append("multiplicative inverses")
    if not np.array_equal(F.vpow(F.vadd(a, b), p), F.vadd(F.vpow(a, p), F.vpow(b, p))):
        failures.append("frobenius")

    def triples_hold(x, y, z) -> bool:
        return (
            np.array_equal(F.vadd(F.vadd(x, y), z), F.vadd(x, F.vadd(y, z)))
            and np.array_equal(F.vmul(F.vmul(x, y), z), F.vmul(x, F.vmul(y, z)))
            and np.array_equal(F.vmul(x, F.vadd(y, z)), F.vadd(F.vmul(x, y), F.vmul(x, z)))
        )

    if F.q <= AXIOM_EXHAUSTIVE:
        ok = all(triples_hold(x, a, b) for x in range(F.q))
    else:
        x, y, z = sample_rng(seed, F.q, 0).integers(0, F.q, size=(3, AXIOM_SAMPLES))
        ok = triples_hold(x, y, z)
    if not ok:
        failures.append("associativity/distributivity")
    return failures


def _record_identity(outcome: Outcome, report: IdentityReport, size: int, label: str):
    outcome.record(
        report.name,
        report.holds,
        size,
        [],
        f"{label}: error {report.max_error:.3e} over {report.tolerance:.3e}",
    )


def _selftest_field(F: FieldCtx, dims: Sequence[int], seed: int) -> Outcome:
    outcome = Outcome()
    q = F.q
    label = f"GF({q})"

    failures = _field_axioms(F, seed)
    outcome.record("field_axioms", not failures, q, [], f"{label}: {', '.join(failures)}")

    sums = character_matrix(F).sum(axis=1)
    expected = np.zeros(q)
    expected[0] = q
    report = identity_report("orthogonality", sums, expected, q)
    outcome.record("orthogonality", report.holds, q, [], f"{label}: character sums")
    outcome.record(
        "trace",
        np.unique(F.trace_table).size == F.p
        and bool(np.any(np.abs(F.chi_table - 1) > tolerance(q))),
        q,
        [],
        f"{label}: trace not surjective or character trivial",
    )

    for d in dims:
        _selftest_space(F, d, sample_rng(seed, q, d), outcome)
    return outcome


def _selftest_space(F: FieldCtx, d: int, rng: np.random.Generator, outcome: Outcome):
    space = space_of(F, d)
    q, N = F.q, space.size
    label = f"GF({q})^{d}"

    f = SpectralFn(F, d, rng.standard_normal(N) + 1j * rng.standard_normal(N))
    g = SpectralFn(F, d, rng.standard_normal(N) + 1j * rng.standard_normal(N))
    fhat = fourier_forward(f)

    delta = fourier_forward(SpectralFn.delta(F, d)).values
    for report in (
        identity_report("inversion", fourier_invert(fhat).values, f.values, N),
        plancherel_check(f, g),
        identity_report("orthogonality", delta, np.full(N, q ** (-d)), N),
    ):
        _record_identity(outcome, report, N, label)

    size = max(1, min(N // 2, SELFTEST_SET_SIZE))
    E = PointSet.from_indices(F, d, sample_subset(rng, N, size))
    elements = E.indices.tolist()
    t = 1 % q

    if N <= HEAVY_POINTS:
        direct = identity_report(
            "direct_transform", fourier_forward_direct(f).values, fhat.values, N
        )
        _record_identity(outcome, direct, N, label)
        rotated = rotating_planes_apply(E.indicator(), t).values
        pairs = int(np.rint(rotated[E.indices].sum().real))
        outcome.record(
            "rotating_planes",
            pairs == int(nu_bruteforce(E).nu[t]),
            size,
            elements,
            f"{label}: plane sum disagrees with nu({t})",
        )

    brute = nu_bruteforce(E)
    try:
        spectral = nu_spectral(E, sample_t=t)
        agree = np.array_equal(brute.nu, spectral.nu) and brute.total == size**2
    except SpectralMismatch:
        agree = False
    outcome.record("nu_consistency", agree, size, elements, f"{label}: spectral nu differs")

    check_point_set(E, ("remainder", "identities", "second_moment"), outcome, label)

    A = ScalarSet.from_elements(F, sample_subset(rng, q, max(1, q // 2)))
    check_scalar_set(A, d, ("identities",), outcome, label)


def _corrupted_modulus(n: int) -> Tuple[int, ...]:
    # x^n is reducible for every n > 1
    return (0,) * n + (1,)


def run_selftest(
    roster: Sequence[int] = SELFTEST_ROSTER,
    dims: Sequence[int] = SELFTEST_DIMS,
    seed: int = 0,
    corrupt_modulus: bool = False,
    workers: Optional[int] = None,
) -> RunReport:
    started = time.perf_counter()
    fields = [field_of_order(q) for q in roster]

    if corrupt_modulus:
        target = next((F for F in fields if F.n > 1), fields[0])
        n = max(2, target.n)
        FieldCtx(target.p, n, _corrupted_modulus(n))

    outcome = _run_sharded(fields, lambda F: _selftest_field(F, dims, seed), workers)

    for F in fields:
        if F.n == 1:
            continue
        try:
            FieldCtx(F.p, F.n, _corrupted_modulus(F.n))
            rejected = False
        except ReducibleModulus:
            rejected = True
        outcome.record(
            "reducible_modulus_rejected", rejected, F.q, [], f"GF({F.q}) accepted x^{F.n}"
        )

    return _report(
        "selftest",
        outcome,
        started,
        results={"roster": list(roster), "dims": list(dims), "seed": seed},
    )


# coverage sweeps


def _enumerate_scalar_sets(
    F: FieldCtx, d: int, sizes: Sequence[int], checks: Sequence[str], workers: Optional[int]
) -> Outcome:
    tasks = [
        (k, start, stop) for k in sizes for start, stop in shard_ranges(comb(F.q, k), CHUNK)
    ]

    def work(task) -> Outcome:
        k, start, stop = task
        outcome = Outcome()
        for mask in colex_masks(k, start, stop):
            A = ScalarSet.from_elements(F, mask_elements(mask))
            check_scalar_set(A, d, checks, outcome, f"|A|={k}")
        return outcome

    return _run_sharded(tasks, work, workers)


def run_cover_exhaustive(spec: ExperimentSpec, workers: Optional[int] = None) -> RunReport:
    """
    Every A in the size range; coverage is asserted where |A|^{2d} > q^{d+1}.

    When every set of the smallest enumerated size covers, smaller sizes are
    enumerated for coverage only, while the budget lasts, to locate the least
    size at which every set covers.
    """
    started = time.perf_counter()
    F = make_field(spec.p, spec.n)
    q, d = F.q, spec.d
    theorem_size = least_cover_size(q, d)
    sizes = _size_range(spec.sizes, theorem_size, q, q)
    total = check_budget(q, sizes)

    outcome = _enumerate_scalar_sets(F, d, sizes, spec.checks, workers)
    # coverage is monotone in A, so the first fully covering size is the threshold
    empirical = next((k for k in sizes if outcome.non_covering[k] == 0), None)
    exact = empirical is not None and empirical != sizes[0]

    descent: Dict[str, int] = {}
    budget_left = settings.enumeration_budget - total
    k = empirical - 1 if empirical is not None and not exact else 0
    while k >= 1 and comb(q, k) <= budget_left:
        below = _enumerate_scalar_sets(F, d, [k], (), workers)
        budget_left -= comb(q, k)
        descent[str(k)] = below.non_covering[k]
        if below.non_covering[k]:
            break
        empirical = k
        k -= 1
    exact = empirical is not None and (exact or k == 0 or str(k) in descent)

    return _report(
        "cover-exhaustive",
        outcome,
        started,
        spec,
        F,
        {
            "subsets": total,
            "sizes": sizes,
            "theorem_threshold": theorem_size,
            "empirical_threshold": empirical,
            "empirical_threshold_exact": exact,
            "non_covering_below": descent,
            "non_covering_by_size": {str(k): outcome.non_covering[k] for k in sizes},
        },
    )


def run_cover_sample(spec: ExperimentSpec, workers: Optional[int] = None) -> RunReport:
    """Uniform random A of each size; structured mode adds the scalar families."""
    started = time.perf_counter()
    F = make_field(spec.p, spec.n)
    q, d = F.q, spec.d
    theorem_size = least_cover_size(q, d)
    sizes = _size_range(spec.sizes, theorem_size, q, q)

    tasks = [
        (k, start, stop) for k in sizes for start, stop in shard_ranges(spec.samples, CHUNK)
    ]

    def work(task) -> Outcome:
        k, start, stop = task
        outcome = Outcome()
        for i in range(start, stop):
            A = ScalarSet.from_elements(F, sample_subset(sample_rng(spec.seed, k, i), q, k))
            check_scalar_set(A, d, spec.checks, outcome, f"draw {i} of size {k}")
        return outcome

    outcome = _run_sharded(tasks, work, workers)

    structured = []
    if spec.mode == "structured":
        for name, A in scalar_families(F):
            covered = check_scalar_set(A, d, spec.checks, outcome, name)
            structured.append(
                {
                    "name": name,
                    "size": A.count,
                    "covers_units": covered,
                    "threshold_met": cover_threshold_met(A, d),
                }
            )

    return _report(
        "cover-sample",
        outcome,
        started,
        spec,
        F,
        {
            "draws": spec.samples * len(sizes),
            "sizes": sizes,
            "theorem_threshold": theorem_size,
            "non_covering_by_size": {str(k): outcome.non_covering[k] for k in sizes},
            "structured": structured,
        },
    )


def run_sharpness(spec: ExperimentSpec) -> RunReport:
    """
    Sets just below the coverage threshold that fail to cover: the subfield of
    size sqrt(q) and the structured scalar families.
    """
    started = time.perf_counter()
    F = make_field(spec.p, spec.n)
    q, d = F.q, spec.d
    scale = q ** (0.5 + 1 / (2 * d))
    outcome = Outcome()
    results: Dict[str, Any] = {"threshold_scale": scale}

    if F.n % 2 == 0:
        half = ScalarSet.from_elements(F, F.subfield(F.n // 2))
        elements = half.elements.tolist()
        for depth in range(1, settings.subfield_max_d + 1):
            outcome.record(
                "subfield_closure",
                sum_of_products(half, depth) == half,
                half.count,
                elements,
                f"{depth}A^2 leaves the subfield",
            )
        covered, missing = covers_units(sum_of_products(half, d))
        outcome.record(
            "subfield_noncover", not covered, half.count, elements, "subfield covers F_q^*"
        )
        results["subfield"] = {
            "elements": elements,
            "size": half.count,
            "ratio": half.count / scale,
            "missing_count": len(missing),
        }
    else:
        warnings.warn(
            f"GF({q}) has no subfield of size sqrt(q); subfield check skipped", FqCoverWarning
        )
        results["subfield"] = {"skipped": f"extension degree {F.n} is odd"}

    rows = []
    for name, A in scalar_families(F):
        covered, missing = covers_units(sum_of_products(A, d))
        if cover_threshold_met(A, d):
            outcome.record(
                "cover",
                covered,
                A.count,
                A.elements.tolist(),
                f"{name} misses {missing[:MISSING_SHOWN]}",
            )
        rows.append(
            {"name": name, "size": A.count, "covers_units": covered, "ratio": A.count / scale}
        )

    failing = [row for row in rows if not row["covers_units"]]
    if failing:
        largest = max(failing, key=lambda row: (row["size"], row["name"]))
        outcome.score("largest_noncovering_ratio", largest["ratio"])
        results["largest_noncovering"] = largest
    results["families"] = rows

    return _report("sharpness", outcome, started, spec, F, results)


# geometry


def run_geometry(
    spec: ExperimentSpec, csv_path: Optional[Path] = None, workers: Optional[int] = None
) -> RunReport:
    """Incidence checks on point sets E in F_q^d, exhaustive, sampled or structured."""
    started = time.perf_counter()
    F = make_field(spec.p, spec.n)
    q, d = F.q, spec.d
    N = q**d
    # least |E| with |E|^2 > q^{d+1}
    threshold = isqrt(q ** (d + 1)) + 1
    results: Dict[str, Any] = {"threshold_size": threshold}

    if spec.mode == "exhaustive":
        sizes = _size_range(spec.sizes, threshold, N, N)
        results["sets"] = check_budget(N, sizes)
        tasks = [
            (k, start, stop) for k in sizes for start, stop in shard_ranges(comb(N, k), CHUNK)
        ]

        def work(task) -> Outcome:
            k, start, stop = task
            outcome = Outcome()
            for mask in colex_masks(k, start, stop):
                E = PointSet.from_indices(F, d, mask_elements(mask))
                check_point_set(E, spec.checks, outcome, f"|E|={k}")
            return outcome

    elif spec.mode == "sample":
        size = min(threshold, N)
        sizes = _size_range(spec.sizes, size, size, N)
        results["sets"] = spec.samples * len(sizes)
        tasks = [
            (k, start, stop) for k in sizes for start, stop in shard_ranges(spec.samples, CHUNK)
        ]

        def work(task) -> Outcome:
            k, start, stop = task
            outcome = Outcome()
            for i in range(start, stop):
                indices = sample_subset(sample_rng(spec.seed, k, i), N, k)
                check_point_set(
                    PointSet.from_indices(F, d, indices), spec.checks, outcome, f"draw {i}"
                )
            return outcome

    else:
        families = point_families(F, d, spec.seed)
        results["sets"] = len(families)
        results["families"] = [{"name": name, "size": E.count} for name, E in families]
        tasks = families

        def work(task) -> Outcome:
            name, E = task
            outcome = Outcome()
            check_point_set(E, spec.checks, outcome, name)
            return outcome

    outcome = _run_sharded(tasks, work, workers)

    if outcome.worst is not None:
        score, elements, profile = outcome.worst
        results["worst"] = {"sharpness": score, "elements": elements, "nu": profile.nu.tolist()}
        if csv_path is not None:
            profile.to_csv(csv_path)

    return _report("geometry", outcome, started, spec, F, results)


def run_d_of_eps(eps) -> RunReport:
    started = time.perf_counter()
    d_cover, d_proportion = degree_for_epsilon(eps)

    return _report(
        "d-of-eps",
        Outcome(),
        started,
        results={
            "eps": str(Fraction(eps)),
            "d_cover": d_cover,
            "d_proportion": d_proportion,
        },
    )
