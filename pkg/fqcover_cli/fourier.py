"""
Fourier analysis on F_q^d.

A point x of F_q^d is addressed by its flat index sum(x_i * q**i). The forward
transform carries the q^{-d} normalisation and the inverse carries none:

    fhat(m) = q^{-d} sum_x chi(-x.m) f(x)
    f(x)    = sum_m chi(x.m) fhat(m)

so that sum_m fhat(m) conj(ghat(m)) = q^{-d} sum_x f(x) conj(g(x)).
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple, Tuple

import numpy as np

from fqcover_cli.errors import BadArity, DimensionMismatch
from fqcover_cli.gf import FieldCtx, FqElem
from fqcover_cli.model import IdentityReport

VecFq = Tuple[int, ...]

# cells per block when materialising pairwise tables
BLOCK_CELLS = 1 << 20


def tolerance(terms: int) -> float:
    """Allowed error for a quantity accumulated from `terms` summands."""
    return max(1e-9, 1e-12 * terms)


def relative_error(actual, expected) -> float:
    actual, expected = np.asarray(actual), np.asarray(expected)
    scale = max(1.0, float(np.max(np.abs(expected), initial=0.0)))
    return float(np.max(np.abs(actual - expected), initial=0.0)) / scale


def identity_report(name: str, actual, expected, terms: int) -> IdentityReport:
    return IdentityReport(
        name=name, max_error=relative_error(actual, expected), tolerance=tolerance(terms)
    )


class LineTable(NamedTuple):
    directions: np.ndarray  # canonical flat index of each line through 0
    points: np.ndarray  # (q, lines): points[s, j] = s * directions[j]
    line_of: np.ndarray  # column of the line through each point, -1 at 0


class FqSpace:
    """The vector space F_q^d."""

    def __init__(self, field: FieldCtx, d: int):
        if d < 1:
            raise BadArity(f"Dimension must be at least 1, got {d}")
        self.field = field
        self.d = d
        self.q = field.q
        self.size = field.q**d
        self._weights = field.q ** np.arange(d, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        flat = np.arange(self.size, dtype=np.int64)
        coords = (flat[:, None] // self._weights) % self.q
        coords.setflags(write=False)
        return coords

    def index(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self._weights

    def vector(self, idx: int) -> VecFq:
        return tuple(int(c) for c in (idx // self._weights) % self.q)

    def flat(self, x: VecFq) -> int:
        if len(x) != self.d:
            raise DimensionMismatch(f"Expected {self.d} coordinates, got {len(x)}")
        return int(self.index(x))

    def dot(self, x: VecFq, y: VecFq) -> FqElem:
        if len(x) != self.d or len(y) != self.d:
            raise DimensionMismatch(
                f"Dot product of vectors of length {len(x)} and {len(y)} in dimension {self.d}"
            )
        F = self.field
        acc = 0
        for xi, yi in zip(x, y):
            acc = F.add(acc, F.mul(xi, yi))
        return acc

    def dots(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """All pairwise dot products of two coordinate arrays (k, d), (l, d)."""
        F = self.field
        acc = np.zeros((len(xs), len(ys)), dtype=np.int64)
        for i in range(self.d):
            acc = F.vadd(acc, F.vmul(xs[:, None, i], ys[None, :, i]))
        return acc

    def blocks(self, rows: int, cols: int):
        """Row slices so that each block has about BLOCK_CELLS cells."""
        step = max(1, BLOCK_CELLS // max(1, cols))
        for start in range(0, rows, step):
            yield slice(start, min(rows, start + step))

    def scale(self, s, idx) -> np.ndarray:
        """Flat index of s * x, broadcasting s against the points idx."""
        coords = self.coords[np.asarray(idx, dtype=np.int64)]
        return self.index(self.field.vmul(np.asarray(s, dtype=np.int64)[..., None], coords))

    def sub(self, x_idx, y_idx) -> np.ndarray:
        """Flat index of x - y, broadcasting."""
        cx = self.coords[np.asarray(x_idx, dtype=np.int64)]
        cy = self.coords[np.asarray(y_idx, dtype=np.int64)]
        return self.index(self.field.vsub(cx, cy))

    @cached_property
    def lines(self) -> LineTable:
        F = self.field
        nonzero = np.arange(1, self.size, dtype=np.int64)
        scaled = self.scale(F.elements[1:, None], nonzero)
        canonical = scaled.min(axis=0)
        directions = nonzero[canonical == nonzero]
        points = self.scale(F.elements[:, None], directions)

        slot = np.full(self.size, -1, dtype=np.int64)
        slot[directions] = np.arange(len(directions), dtype=np.int64)
        line_of = np.full(self.size, -1, dtype=np.int64)
        line_of[1:] = slot[canonical]

        for table in (directions, points, line_of):
            table.setflags(write=False)
        return LineTable(directions, points, line_of)

    def __repr__(self):
        return f"FqSpace({self.field!r}, d={self.d})"


@lru_cache(maxsize=None)
def space_of(field: FieldCtx, d: int) -> FqSpace:
    return FqSpace(field, d)


@dataclass(frozen=True, eq=False)
class SpectralFn:
    """A complex-valued function on F_q^d, stored densely by flat index."""

    field: FieldCtx
    d: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.field.q**self.d,):
            raise DimensionMismatch(
                f"Expected {self.field.q ** self.d} values, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def space(self) -> FqSpace:
        return space_of(self.field, self.d)

    @classmethod
    def constant(cls, field: FieldCtx, d: int, value: complex = 1.0) -> "SpectralFn":
        return cls(field, d, np.full(field.q**d, value, dtype=np.complex128))

    @classmethod
    def delta(cls, field: FieldCtx, d: int, idx: int = 0) -> "SpectralFn":
        values = np.zeros(field.q**d, dtype=np.complex128)
        values[idx] = 1.0
        return cls(field, d, values)

    def dump(self) -> str:
        """One `index re im` line per point."""
        return "".join(
            f"{i} {v.real!r} {v.imag!r}\n" for i, v in enumerate(self.values.tolist())
        )

    @classmethod
    def load(cls, field: FieldCtx, d: int, text: str) -> "SpectralFn":
        """Inverse of `dump`; points that are not listed are 0."""
        values = np.zeros(field.q**d, dtype=np.complex128)
        for line in text.splitlines():
            if line.strip():
                i, real, imag = line.split()
                values[int(i)] = complex(float(real), float(imag))
        return cls(field, d, values)


@lru_cache(maxsize=None)
def character_matrix(field: FieldCtx) -> np.ndarray:
    """X[m, x] = chi(m * x) on F_q."""
    e = field.elements
    matrix = field.chi_table[field.vmul(e[:, None], e[None, :])]
    matrix.setflags(write=False)
    return matrix


def _axis_transform(values: np.ndarray, kernel: np.ndarray, q: int, d: int) -> np.ndarray:
    # chi(x.m) factors over coordinates, so every axis gets the same q-point kernel
    arr = values.reshape((q,) * d)
    for axis in range(d):
        arr = np.moveaxis(np.tensordot(kernel, arr, axes=([1], [axis])), 0, axis)
    return np.ascontiguousarray(arr).reshape(-1)


def fourier_forward(f: SpectralFn) -> SpectralFn:
    q, d = f.field.q, f.d
    kernel = np.conj(character_matrix(f.field))
    return SpectralFn(f.field, d, _axis_transform(f.values, kernel, q, d) / q**d)


def fourier_invert(fhat: SpectralFn) -> SpectralFn:
    q, d = fhat.field.q, fhat.d
    kernel = character_matrix(fhat.field)
    return SpectralFn(fhat.field, d, _axis_transform(fhat.values, kernel, q, d))


def fourier_forward_direct(f: SpectralFn) -> SpectralFn:
    """The O(q^{2d}) double sum, kept as an oracle for the factorised transform."""
    F, space = f.field, f.space
    out = np.empty(space.size, dtype=np.complex128)
    for rows in space.blocks(space.size, space.size):
        products = space.dots(space.coords[rows], space.coords)
        out[rows] = F.chi_table[F.vneg(products)] @ f.values
    return SpectralFn(F, f.d, out / space.q**f.d)


def plancherel_check(f: SpectralFn, g: SpectralFn) -> IdentityReport:
    """sum_m fhat conj(ghat) = q^{-d} sum_x f conj(g)."""
    if f.field != g.field or f.d != g.d:
        raise DimensionMismatch("Plancherel needs functions on the same space")
    fhat, ghat = fourier_forward(f), fourier_forward(g)
    lhs = complex(np.vdot(ghat.values, fhat.values))
    rhs = complex(np.vdot(g.values, f.values)) / f.field.q**f.d
    return identity_report("plancherel", lhs, rhs, f.space.size)


def convolve_diff(f: SpectralFn, g: SpectralFn) -> SpectralFn:
    """(f * g)(m) = sum over y - y' = m of f(y) g(y')."""
    if f.field != g.field or f.d != g.d:
        raise DimensionMismatch("Convolution needs functions on the same space")
    space = f.space
    points = np.arange(space.size, dtype=np.int64)
    support = np.flatnonzero(f.values)
    out = np.zeros(space.size, dtype=np.complex128)
    for rows in space.blocks(len(support), space.size):
        ys = support[rows]
        # y' = y - m
        shifted = space.sub(ys[:, None], points[None, :])
        out += f.values[ys] @ g.values[shifted]
    return SpectralFn(f.field, f.d, out)
