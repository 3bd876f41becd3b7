"""
Incidence counts for point sets E in F_q^d.

The central object is the dot-product profile

    nu(t) = |{(x, y) in E x E : x.y = t}|,

computed either by direct enumeration of pairs or through character sums.
Every inequality here is checked on exact Python integers: the remainder
R(t) = nu(t) - |E|^2/q is carried as its numerator q*nu(t) - |E|^2.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fqcover_cli.config import settings
from fqcover_cli.errors import OriginInSet, SpectralMismatch, ZeroDirection
from fqcover_cli.fourier import (
    FqSpace,
    SpectralFn,
    VecFq,
    character_matrix,
    convolve_diff,
    fourier_forward,
    identity_report,
    space_of,
    tolerance,
)
from fqcover_cli.gf import FieldCtx, FqElem
from fqcover_cli.model import IdentityReport, RemainderEntry, RemainderReport, SecondMomentReport

# rounded spectral counts must sit closer than this to an integer
ROUNDING_LIMIT = 0.25
# rows of E checked directly when nu takes the spectral path
SPECTRAL_SAMPLE_ROWS = 64


@dataclass(frozen=True, eq=False)
class PointSet:
    """A subset of F_q^d as a dense membership vector."""

    field: FieldCtx
    d: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        if bits.shape != (self.field.q**self.d,):
            raise ValueError(f"Expected {self.field.q ** self.d} bits, got {bits.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_indices(cls, field: FieldCtx, d: int, indices) -> "PointSet":
        bits = np.zeros(field.q**d, dtype=bool)
        bits[np.asarray(indices, dtype=np.int64)] = True
        return cls(field, d, bits)

    @classmethod
    def from_vectors(cls, field: FieldCtx, d: int, vectors: Sequence[VecFq]) -> "PointSet":
        space = space_of(field, d)
        return cls.from_indices(field, d, [space.flat(v) for v in vectors])

    @classmethod
    def empty(cls, field: FieldCtx, d: int) -> "PointSet":
        return cls(field, d, np.zeros(field.q**d, dtype=bool))

    @classmethod
    def full(cls, field: FieldCtx, d: int) -> "PointSet":
        return cls(field, d, np.ones(field.q**d, dtype=bool))

    @classmethod
    def product(cls, field: FieldCtx, factors: Sequence) -> "PointSet":
        """A_1 x ... x A_d for element collections A_i."""
        d = len(factors)
        grids = np.meshgrid(
            *[np.asarray(list(a), dtype=np.int64) for a in factors], indexing="ij"
        )
        flat = sum(grid.ravel() * field.q**i for i, grid in enumerate(grids))
        return cls.from_indices(field, d, np.asarray(flat, dtype=np.int64))

    @classmethod
    def line(cls, field: FieldCtx, d: int, y: VecFq) -> "PointSet":
        """l_y = {t y : t in F_q}, origin included."""
        space = space_of(field, d)
        idx = space.flat(y)
        if idx == 0:
            raise ZeroDirection("A line needs a nonzero direction")
        return cls.from_indices(field, d, space.scale(field.elements, idx))

    @property
    def space(self) -> FqSpace:
        return space_of(self.field, self.d)

    @cached_property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    @property
    def points(self) -> np.ndarray:
        return self.space.coords[self.indices]

    @property
    def contains_origin(self) -> bool:
        return bool(self.bits[0])

    def __contains__(self, idx: int) -> bool:
        return bool(self.bits[idx])

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other: object):
        if not isinstance(other, PointSet):
            return False
        return (
            self.field == other.field
            and self.d == other.d
            and np.array_equal(self.bits, other.bits)
        )

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.field, self.d, self.bits | other.bits)

    def indicator(self) -> SpectralFn:
        return SpectralFn(self.field, self.d, self.bits.astype(np.complex128))


def strip_origin(E: PointSet) -> PointSet:
    bits = E.bits.copy()
    bits[0] = False
    return PointSet(E.field, E.d, bits)


def require_origin_free(E: PointSet):
    if E.contains_origin:
        raise OriginInSet("The set must not contain the origin; strip it first")


@dataclass(frozen=True, eq=False)
class NuProfile:
    field: FieldCtx
    size: int
    nu: np.ndarray

    @property
    def total(self) -> int:
        return int(self.nu.sum())

    def r_numerators(self) -> List[int]:
        """q * nu(t) - |E|^2 for every t."""
        return [self.field.q * int(v) - self.size**2 for v in self.nu]

    def attained(self) -> int:
        """|{x.y : x, y in E}|."""
        return int(np.count_nonzero(self.nu))

    def to_csv(self, path: Path) -> Path:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["t_index", "nu", "r_numerator"])
            for t, (v, r) in enumerate(zip(self.nu.tolist(), self.r_numerators())):
                writer.writerow([t, v, r])
        return path


def _dot_histogram(E: PointSet, rows: slice) -> np.ndarray:
    pts = E.points
    return np.bincount(
        E.space.dots(pts[rows], pts).ravel(), minlength=E.field.q
    ).astype(np.int64)


def nu_bruteforce(E: PointSet, workers: Optional[int] = None) -> NuProfile:
    workers = settings.workers if workers is None else workers
    blocks = list(E.space.blocks(E.count, E.count))
    nu = np.zeros(E.field.q, dtype=np.int64)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda rows: _dot_histogram(E, rows), blocks))
    else:
        parts = [_dot_histogram(E, rows) for rows in blocks]

    for part in parts:
        nu += part
    return NuProfile(E.field, E.count, nu)


def count_pairs(E: PointSet, t: FqElem) -> int:
    """nu(t) for a single t by direct enumeration."""
    pts = E.points
    return sum(
        int(np.count_nonzero(E.space.dots(pts[rows], pts) == t))
        for rows in E.space.blocks(E.count, E.count)
    )


def _character_sums(E: PointSet, ehat: np.ndarray, rows: slice) -> np.ndarray:
    """S_rows(s) = q^d sum over x in E[rows] of Ehat(-s x), for every s."""
    F, space = E.field, E.space
    negatives = F.vneg(F.elements)[:, None]
    scaled = space.scale(negatives, E.indices[None, rows])
    return space.size * ehat[scaled].sum(axis=1)


def _round_profile(F: FieldCtx, sums: np.ndarray, terms: int) -> np.ndarray:
    raw = np.conj(character_matrix(F)) @ sums / F.q
    nu = np.rint(raw.real).astype(np.int64)
    defect = float(np.max(np.abs(raw - nu)))
    allowed = min(ROUNDING_LIMIT, tolerance(terms) * max(1.0, float(np.max(np.abs(nu)))))
    if defect > allowed:
        raise SpectralMismatch(f"Character sum is {defect:.3e} away from an integer")
    return nu


def nu_spectral(
    E: PointSet, sample_t: Optional[FqElem] = None, sample_rows: int = 0
) -> NuProfile:
    """
    nu through nu(t) = q^{-1} sum_s chi(-s t) S(s), where
    S(s) = sum_{x, y in E} chi(s x.y) = q^d sum_{x in E} Ehat(-s x).

    S is accumulated over blocks of E. `sample_t` compares one entry with a
    full direct count; `sample_rows` compares the counts restricted to the
    first rows of E with a direct count over those rows only.
    """
    F, space = E.field, E.space
    q = F.q
    if E.count == 0:
        return NuProfile(F, 0, np.zeros(q, dtype=np.int64))

    ehat = fourier_forward(E.indicator()).values
    sums = np.zeros(q, dtype=np.complex128)
    for rows in space.blocks(E.count, q * E.d):
        sums += _character_sums(E, ehat, rows)

    nu = _round_profile(F, sums, q * E.count)
    if int(nu.sum()) != E.count**2:
        raise SpectralMismatch(f"Spectral total {int(nu.sum())} != |E|^2 = {E.count ** 2}")
    if sample_t is not None and int(nu[sample_t]) != count_pairs(E, sample_t):
        raise SpectralMismatch(f"Spectral nu({sample_t}) disagrees with direct count")
    if sample_rows > 0:
        first = next(space.blocks(E.count, E.count))
        rows = slice(0, min(first.stop, sample_rows))
        partial = _round_profile(F, _character_sums(E, ehat, rows), q * (rows.stop or 1))
        if not np.array_equal(partial, _dot_histogram(E, rows)):
            raise SpectralMismatch(
                f"Spectral counts for the first {rows.stop} points disagree with direct count"
            )
    return NuProfile(F, E.count, nu)


def nu(E: PointSet) -> NuProfile:
    if E.count**2 <= settings.brute_force_limit:
        return nu_bruteforce(E)
    return nu_spectral(E, sample_rows=SPECTRAL_SAMPLE_ROWS)


def nu_positive_units(profile: NuProfile) -> bool:
    """True when every nonzero t is a dot product."""
    return bool(np.all(profile.nu[1:] > 0))


def remainder_bound_check(E: PointSet, profile: Optional[NuProfile] = None) -> RemainderReport:
    """
    Checks (q nu(t) - |E|^2)^2 <= |E|^2 q^{d+1} for t != 0. The t = 0 ratio is
    reported but not asserted: an isotropic line makes it exceed 1.
    """
    profile = profile if profile is not None else nu(E)
    q, d, size = E.field.q, E.d, E.count
    bound = size**2 * q ** (d + 1)

    entries = []
    violations = []
    ratios = []
    for t, (value, r) in enumerate(zip(profile.nu.tolist(), profile.r_numerators())):
        holds = r * r <= bound
        entries.append(RemainderEntry(t=t, nu=value, r_numerator=r, holds=holds))
        ratios.append(Fraction(r * r, bound) if bound else Fraction(0))
        if t != 0 and not holds:
            violations.append(t)

    return RemainderReport(
        field=E.field.descriptor(),
        d=d,
        size=size,
        entries=entries,
        sharpness=float(max(ratios[1:], default=Fraction(0))),
        zero_ratio=float(ratios[0]),
        violations=violations,
    )


def rotating_planes_apply(f: SpectralFn, t: FqElem) -> SpectralFn:
    """(R_t f)(x) = sum of f(y) over y with x.y = t."""
    space = f.space
    coords = space.coords
    out = np.zeros(space.size, dtype=np.complex128)
    for rows in space.blocks(space.size, space.size):
        on_plane = space.dots(coords[rows], coords) == t
        out[rows] = on_plane @ f.values
    return SpectralFn(f.field, f.d, out)


def line_intersection(E: PointSet, y: VecFq) -> int:
    space = E.space
    idx = space.flat(y)
    if idx == 0:
        raise ZeroDirection("Line direction must be nonzero")
    return int(np.count_nonzero(E.bits[space.scale(E.field.elements, idx)]))


def line_counts(E: PointSet) -> np.ndarray:
    """|E cap l| for each line through the origin, in `space.lines` order."""
    return np.count_nonzero(E.bits[E.space.lines.points], axis=0)


def max_line_intersection(E: PointSet) -> Tuple[int, Optional[VecFq]]:
    if E.count == 0:
        return 0, None
    lines = E.space.lines
    counts = line_counts(E)
    j = int(np.argmax(counts))
    return int(counts[j]), E.space.vector(int(lines.directions[j]))


def hyperplane_sum(E: PointSet) -> SpectralFn:
    """F(m) = |E cap m^perp|."""
    space = E.space
    pts = E.points
    out = np.zeros(space.size, dtype=np.int64)
    for rows in space.blocks(space.size, E.count):
        out[rows] = np.count_nonzero(space.dots(space.coords[rows], pts) == 0, axis=1)
    return SpectralFn(E.field, E.d, out)


def verify_hyperplane_identity(E: PointSet) -> IdentityReport:
    """Fhat(k) = q^{-1} |E cap l_k| for k != 0 and q^{-1} |E| at k = 0."""
    require_origin_free(E)
    space, q = E.space, E.field.q
    lhs = fourier_forward(hyperplane_sum(E)).values

    per_point = np.zeros(space.size, dtype=np.float64)
    per_point[1:] = line_counts(E)[space.lines.line_of[1:]]
    per_point[0] = E.count
    rhs = per_point / q

    return identity_report("hyperplane_transform", lhs, rhs, E.space.size)


def verify_convolution_identity(E: PointSet) -> IdentityReport:
    """Ghat(k) = q^d |Ehat(k)|^2 for G = E * E."""
    indicator = E.indicator()
    lhs = fourier_forward(convolve_diff(indicator, indicator)).values
    rhs = E.space.size * np.abs(fourier_forward(indicator).values) ** 2
    return identity_report("convolution_transform", lhs, rhs, E.space.size)


def verify_plane_average_identity(E: PointSet) -> IdentityReport:
    """sum_s Ehat(s m) = q^{1-d} F(m)."""
    F, space = E.field, E.space
    ehat = fourier_forward(E.indicator()).values
    points = np.arange(space.size, dtype=np.int64)
    lhs = np.zeros(space.size, dtype=np.complex128)
    for rows in space.blocks(space.size, F.q):
        scaled = space.scale(F.elements[:, None], points[None, rows])
        lhs[rows] = ehat[scaled].sum(axis=0)
    rhs = hyperplane_sum(E).values * float(F.q) ** (1 - E.d)
    return identity_report("plane_average", lhs, rhs, E.space.size)


def second_moment_check(E: PointSet, profile: Optional[NuProfile] = None) -> SecondMomentReport:
    """
    q sum_t nu(t)^2 <= M |E|^2 q^d + |E|^4 with M the largest line count,
    together with the two exact steps that produce it:
    sum_t nu(t)^2 <= |E| sum_m F(m) G(m) and |E|^4 <= |{x.y}| sum_t nu(t)^2.
    """
    require_origin_free(E)
    profile = profile if profile is not None else nu(E)
    q, d, size = E.field.q, E.d, E.count

    sum_sq = sum(int(v) ** 2 for v in profile.nu.tolist())
    max_line, _ = max_line_intersection(E)

    indicator = E.indicator()
    hyperplanes = np.rint(hyperplane_sum(E).values.real).astype(np.int64)
    differences = np.rint(convolve_diff(indicator, indicator).values.real).astype(np.int64)
    plane_bound = size * sum(
        int(a) * int(b) for a, b in zip(hyperplanes.tolist(), differences.tolist())
    )

    return SecondMomentReport(
        size=size,
        max_line=max_line,
        dot_set_size=profile.attained(),
        sum_nu_squared=sum_sq,
        lhs=q * sum_sq,
        rhs=max_line * size**2 * q**d + size**4,
        plane_bound=plane_bound,
        cauchy_schwarz_lhs=size**4,
        cauchy_schwarz_rhs=profile.attained() * sum_sq,
    )
