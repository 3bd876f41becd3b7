"""
Where the sets under test come from: structured families, exhaustive
enumeration in colex order and seeded sampling.

Subsets of an n-element ground set are bit masks. Colex order lists every
k-subset of {0, ..., n-1} by increasing mask value, so the rank of a subset
does not depend on n and a size class can be split into rank ranges.

Sampling uses numpy's counter-based Philox generator. Each draw gets its own
stream keyed by (seed, size, draw number), so a sample does not depend on how
the draws are split between workers.
"""

from math import comb, isqrt
from typing import Iterable, Iterator, List, Optional, Tuple

import galois
import numpy as np

from fqcover_cli.config import settings
from fqcover_cli.covering import ScalarSet, least_cover_size
from fqcover_cli.errors import BudgetExceeded
from fqcover_cli.fourier import VecFq, space_of
from fqcover_cli.gf import FieldCtx, multiplicative_generator
from fqcover_cli.incidence import PointSet, strip_origin

Family = List[Tuple[str, ScalarSet]]
PointFamily = List[Tuple[str, PointSet]]


# enumeration


def subset_count(n: int, sizes: Iterable[int]) -> int:
    return sum(comb(n, k) for k in sizes)


def check_budget(n: int, sizes: Iterable[int], budget: Optional[int] = None) -> int:
    """Number of subsets in the given size classes; refuses above the budget."""
    budget = settings.enumeration_budget if budget is None else budget
    count = subset_count(n, sizes)
    if count > budget:
        raise BudgetExceeded(count, budget)
    return count


def colex_unrank(rank: int, k: int) -> int:
    """The k-subset of colex rank `rank`, as a mask."""
    mask = 0
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        rank -= comb(c, i)
        mask |= 1 << c
    return mask


def next_colex(mask: int) -> int:
    """Next mask with the same popcount (Gosper)."""
    low = mask & -mask
    ripple = mask + low
    return (((ripple ^ mask) >> 2) // low) | ripple


def colex_masks(k: int, start: int, stop: int) -> Iterator[int]:
    """k-subsets with colex rank in [start, stop)."""
    if start >= stop:
        return
    if k == 0:
        yield 0
        return
    mask = colex_unrank(start, k)
    for _ in range(stop - start):
        yield mask
        mask = next_colex(mask)


def mask_elements(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def shard_ranges(total: int, chunk: int) -> List[Tuple[int, int]]:
    return [(start, min(total, start + chunk)) for start in range(0, total, chunk)]


# sampling


def sample_rng(seed: int, *key: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(sequence))


def sample_subset(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """A uniform k-subset of range(n), sorted."""
    return np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)


# structured scalar sets


def subfields(F: FieldCtx) -> Family:
    return [
        (f"subfield_{F.p}^{k}", ScalarSet.from_elements(F, F.subfield(k)))
        for k in galois.divisors(F.n)
        if k < F.n
    ]


def subgroup(F: FieldCtx, order: int) -> ScalarSet:
    """The multiplicative subgroup of the given order (order must divide q - 1)."""
    h = F.pow(multiplicative_generator(F), (F.q - 1) // order)
    return ScalarSet.from_elements(F, [F.pow(h, j) for j in range(order)])


def subgroups(F: FieldCtx) -> Family:
    out: Family = []
    for order in galois.divisors(F.q - 1):
        if order == F.q - 1:
            continue
        H = subgroup(F, order)
        out.append((f"subgroup_{order}", H))
        out.append((f"subgroup_{order}+0", ScalarSet(F, H.bits | (F.elements == 0))))
    return out


def geometric_progression(F: FieldCtx, ratio: int, length: int, start: int = 1) -> ScalarSet:
    """{start, start r, ..., start r^{length-1}}."""
    return ScalarSet.from_elements(
        F, [F.mul(start, F.pow(ratio, j)) for j in range(length)]
    )


def geometric_progressions(F: FieldCtx) -> Family:
    g = multiplicative_generator(F)
    root = isqrt(F.q)
    lengths = sorted({root, root + 1, least_cover_size(F.q, 2)})
    return [
        (f"geometric_{length}", geometric_progression(F, g, length))
        for length in lengths
        if 1 <= length < F.q
    ]


def scalar_families(F: FieldCtx) -> Family:
    return subfields(F) + subgroups(F) + geometric_progressions(F)


# structured point sets


def unit_vector(d: int, i: int = 0) -> VecFq:
    return tuple(1 if j == i else 0 for j in range(d))


def hyperplane(F: FieldCtx, d: int, m: VecFq) -> PointSet:
    """m^perp = {x : x.m = 0}."""
    space = space_of(F, d)
    normal = np.asarray(m, dtype=np.int64)[None, :]
    return PointSet(F, d, space.dots(space.coords, normal)[:, 0] == 0)


def random_points(F: FieldCtx, d: int, count: int, rng: np.random.Generator) -> PointSet:
    return PointSet.from_indices(F, d, sample_subset(rng, F.q**d, count))


def point_families(F: FieldCtx, d: int, seed: int = 0) -> PointFamily:
    space = space_of(F, d)
    rng = sample_rng(seed, 0, 0)

    axis = PointSet.line(F, d, unit_vector(d))
    diagonal = PointSet.line(F, d, (1,) * d)
    out: PointFamily = [
        ("line_axis", axis),
        ("line_diagonal", diagonal),
        ("punctured_line", strip_origin(diagonal)),
        ("full_minus_origin", strip_origin(PointSet.full(F, d))),
    ]

    if d >= 2:
        out.append(("hyperplane_axis", hyperplane(F, d, unit_vector(d))))
        normal = space.vector(int(rng.integers(1, space.size)))
        out.append(("hyperplane_random", hyperplane(F, d, normal)))

    extra = min(F.q, space.size - F.q)
    if extra > 0:
        out.append(("line_plus_random", diagonal.union(random_points(F, d, extra, rng))))

    for name, A in scalar_families(F):
        out.append((f"product_{name}", PointSet.product(F, [A.elements] * d)))
    return out
