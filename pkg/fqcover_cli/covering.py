"""
Product sets, iterated sumsets and the coverage checks built on them.

All thresholds with fractional exponents are compared after raising both sides
to an integer power, e.g. |A| > q^{1/2 + 1/(2d)} becomes |A|^{2d} > q^{d+1}.
Equality is never enough.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fqcover_cli.config import settings
from fqcover_cli.errors import ArityMismatch, BadArity, BadEpsilon, FqCoverWarning
from fqcover_cli.gf import FieldCtx, FqElem
from fqcover_cli.incidence import PointSet, max_line_intersection, require_origin_free
from fqcover_cli.model import CoverageVerdict


@dataclass(frozen=True, eq=False)
class ScalarSet:
    """A subset of F_q as a membership vector."""

    field: FieldCtx
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        if bits.shape != (self.field.q,):
            raise ValueError(f"Expected {self.field.q} bits, got {bits.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_elements(cls, field: FieldCtx, elements: Iterable[FqElem]) -> "ScalarSet":
        bits = np.zeros(field.q, dtype=bool)
        bits[np.asarray(list(elements), dtype=np.int64)] = True
        return cls(field, bits)

    @classmethod
    def empty(cls, field: FieldCtx) -> "ScalarSet":
        return cls(field, np.zeros(field.q, dtype=bool))

    @classmethod
    def full(cls, field: FieldCtx) -> "ScalarSet":
        return cls(field, np.ones(field.q, dtype=bool))

    @cached_property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __contains__(self, a: FqElem) -> bool:
        return bool(self.bits[a])

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other: object):
        if not isinstance(other, ScalarSet):
            return False
        return self.field == other.field and np.array_equal(self.bits, other.bits)

    def issubset(self, other: "ScalarSet") -> bool:
        return not np.any(self.bits & ~other.bits)

    def without(self, a: FqElem) -> "ScalarSet":
        bits = self.bits.copy()
        bits[a] = False
        return ScalarSet(self.field, bits)

    def dilate(self, c: FqElem) -> "ScalarSet":
        """c * A."""
        return ScalarSet.from_elements(self.field, self.field.vmul(c, self.elements))

    def __repr__(self):
        return f"ScalarSet({self.field!r}, {self.elements.tolist()})"


def product_set(A: ScalarSet, B: Optional[ScalarSet] = None) -> ScalarSet:
    """A * B = {a b}; B defaults to A."""
    B = A if B is None else B
    F = A.field
    bits = np.zeros(F.q, dtype=bool)
    if A.count and B.count:
        bits[F.vmul(A.elements[:, None], B.elements[None, :]).ravel()] = True
    return ScalarSet(F, bits)


def sumset(S: ScalarSet, T: ScalarSet) -> ScalarSet:
    F = S.field
    bits = np.zeros(F.q, dtype=bool)
    if S.count == 0 or T.count == 0:
        return ScalarSet(F, bits)
    if F.n == 1:
        # T + a is a rotation of the membership vector in a prime field
        for a in S.elements.tolist():
            bits |= np.roll(T.bits, a)
    else:
        bits[F.vadd(S.elements[:, None], T.elements[None, :]).ravel()] = True
    return ScalarSet(F, bits)


def iterated_sumset(S: ScalarSet, d: int) -> ScalarSet:
    """S + S + ... + S with d summands."""
    if d < 1:
        raise BadArity(f"Number of summands must be at least 1, got {d}")
    acc = S
    for _ in range(d - 1):
        if acc.count == S.field.q:
            break
        acc = sumset(acc, S)
    return acc


def sum_of_products(A: ScalarSet, d: int) -> ScalarSet:
    """dA^2 = A^2 + ... + A^2 (d times)."""
    return iterated_sumset(product_set(A), d)


def dot_product_set(E: PointSet) -> ScalarSet:
    """{x.y : x, y in E}."""
    F, space = E.field, E.space
    pts = E.points
    bits = np.zeros(F.q, dtype=bool)
    for rows in space.blocks(E.count, E.count):
        bits[space.dots(pts[rows], pts).ravel()] = True
    return ScalarSet(F, bits)


def covers_units(S: ScalarSet) -> Tuple[bool, List[int]]:
    """Whether F_q^* is contained in S, and the nonzero elements it misses."""
    missing = (np.flatnonzero(~S.bits[1:]) + 1).tolist()
    return len(missing) == 0, missing


def cover_threshold(size: int, q: int, d: int) -> bool:
    return size ** (2 * d) > q ** (d + 1)


def least_cover_size(q: int, d: int) -> int:
    """Smallest |A| with |A|^{2d} > q^{d+1}; q + 1 when none exists."""
    return next((k for k in range(q + 1) if cover_threshold(k, q, d)), q + 1)


def cover_threshold_met(A: ScalarSet, d: int) -> bool:
    """|A| > q^{1/2 + 1/(2d)}."""
    if d < 1:
        raise BadArity(f"d must be at least 1, got {d}")
    return cover_threshold(A.count, A.field.q, d)


def dot_threshold_met(E: PointSet) -> bool:
    """|E| > q^{(d+1)/2}."""
    return E.count**2 > E.field.q ** (E.d + 1)


def _verdict(
    field: FieldCtx,
    d: int,
    source_size: int,
    S: ScalarSet,
    threshold_met: bool,
    lhs: int,
    rhs: int,
    **extra,
) -> CoverageVerdict:
    covers, missing = covers_units(S)
    return CoverageVerdict(
        field=field.descriptor(),
        d=d,
        source_size=source_size,
        set_size=S.count,
        covers_units=covers,
        missing=missing[: settings.missing_limit],
        missing_count=len(missing),
        zero_covered=bool(S.bits[0]),
        threshold_met=threshold_met,
        witness_lhs=lhs,
        witness_rhs=rhs,
        **extra,
    )


def key_lower_bound_check(E: PointSet, dots: Optional[ScalarSet] = None) -> CoverageVerdict:
    """|P| (M q^d + |E|^2) >= q |E|^2 with P the dot-product set, M the largest line count."""
    require_origin_free(E)
    F, q, d, size = E.field, E.field.q, E.d, E.count
    dots = dots if dots is not None else dot_product_set(E)
    max_line, _ = max_line_intersection(E)
    denominator = max_line * q**d + size**2

    return _verdict(
        F,
        d,
        size,
        dots,
        dot_threshold_met(E),
        dots.count * denominator,
        q * size**2,
        max_line=max_line,
        density_ratio=size**2 / denominator if denominator else None,
        measured_ratio=dots.count / q,
    )


def positive_proportion_check(A: ScalarSet, d: int) -> CoverageVerdict:
    """
    The lower bound on |dA^2| for E = (A minus 0)^d, where every line meets E
    in at most |A| points:  |dA^2| (|A| q^d + |A|^{2d}) >= q |A|^{2d}.
    """
    if d < 1:
        raise BadArity(f"d must be at least 1, got {d}")
    F, q = A.field, A.field.q
    stripped = 0 in A
    if stripped:
        warnings.warn(
            "0 removed from A before the positive-proportion check", FqCoverWarning
        )
        A = A.without(0)

    a = A.count
    S = sum_of_products(A, d)
    exponent = Fraction(d, 2) + Fraction(d, 2 * (2 * d - 1))
    c_size = a**d / q ** float(exponent)
    power = c_size ** (2 - 1 / d)

    return _verdict(
        F,
        d,
        a,
        S,
        cover_threshold_met(A, d),
        S.count * (a * q**d + a ** (2 * d)),
        q * a ** (2 * d),
        origin_stripped=stripped,
        max_line=a,
        measured_ratio=S.count / q,
        c_size=c_size,
        implied_proportion=power / (power + 1),
    )


def bilinear_cover(As: Sequence[ScalarSet], Bs: Sequence[ScalarSet]) -> CoverageVerdict:
    """
    A_1 B_1 + ... + A_d B_d. The witness pair is (prod |A_j||B_j|, q^{d+1});
    coverage of F_q^* follows when the first strictly exceeds the second.
    """
    if len(As) != len(Bs) or len(As) == 0:
        raise ArityMismatch(f"Need equally many A and B sets, got {len(As)} and {len(Bs)}")
    F, q, d = As[0].field, As[0].field.q, len(As)

    acc = product_set(As[0], Bs[0])
    for A, B in zip(As[1:], Bs[1:]):
        acc = sumset(acc, product_set(A, B))

    weight = math.prod(A.count * B.count for A, B in zip(As, Bs))
    bound = q ** (d + 1)
    return _verdict(
        F,
        d,
        weight,
        acc,
        weight > bound,
        weight,
        bound,
        empirical_constant=float(Fraction(weight, bound)),
        threshold_witness=True,
    )


def degree_for_epsilon(eps: Union[Fraction, str, int]) -> Tuple[int, int]:
    """
    For |A| >= C q^{1/2 + eps}: the number of summands that gives coverage,
    ceil(1/(2 eps)), and the number that gives a positive proportion,
    ceil(1/2 + 1/(4 eps)).
    """
    try:
        eps = Fraction(eps)
    except (ValueError, ZeroDivisionError) as e:
        raise BadEpsilon(f"Cannot read epsilon {eps!r}: {e}")
    if not 0 < eps <= Fraction(1, 2):
        raise BadEpsilon(f"Epsilon must lie in (0, 1/2], got {eps}")
    return math.ceil(1 / (2 * eps)), math.ceil(Fraction(1, 2) + 1 / (4 * eps))
