"""
Arithmetic in GF(p^n).

An element c_0 + c_1 x + ... + c_{n-1} x^{n-1} of F_p[x]/(modulus) is stored
as the integer index sum(c_i * p**i) in [0, q). Index 0 is the additive
identity and index 1 the multiplicative one. The modulus is always the
lexicographically least monic irreducible of degree n, constant coefficient
compared first, so indices are identical between builds.

Scalar methods (`add`, `mul`, ...) take and return Python ints; the
`v`-prefixed methods broadcast over numpy integer arrays.
"""

from functools import lru_cache
from itertools import product
from math import gcd
from typing import Optional, Sequence, Tuple, Type

import galois
import numpy as np

from fqcover_cli.config import settings
from fqcover_cli.errors import (
    DegreeOutOfRange,
    DivisionByZero,
    FieldTooLarge,
    NoProperSubfield,
    NotPrime,
    ReducibleModulus,
)
from fqcover_cli.model import FieldDescriptor

FqElem = int


@lru_cache(maxsize=None)
def prime_field(p: int) -> Type[galois.FieldArray]:
    return galois.GF(p)


def _poly(p: int, coeffs: Sequence[int]) -> galois.Poly:
    """Low-degree-first coefficients to a galois polynomial over F_p."""
    return galois.Poly(list(reversed([int(c) for c in coeffs])), field=prime_field(p))


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    return _poly(p, modulus).is_irreducible()


def least_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """Least monic irreducible of degree n, comparing c_0 first."""
    for low in product(range(p), repeat=n):
        candidate = low + (1,)
        if n > 1 and low[0] == 0:
            continue  # divisible by x
        if is_irreducible(p, candidate):
            return candidate
    raise ReducibleModulus(f"No irreducible polynomial of degree {n} over F_{p}")


class FieldCtx:
    """
    A fully tabulated finite field. Immutable after construction.

    `gf` is the galois field class for the same modulus; its integer
    representation of c_0 + ... + c_{n-1} x^{n-1} is the index used here.
    The log/exp and trace tables are read off it once.
    """

    def __init__(self, p: int, n: int, modulus: Sequence[int]):
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"Modulus {modulus} is not monic of degree {n}")
        if not is_irreducible(p, modulus):
            raise ReducibleModulus(f"Modulus {modulus} is reducible over F_{p}")

        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self._powers = p ** np.arange(n, dtype=np.int64)

        self.gf = (
            prime_field(p)
            if n == 1
            else galois.GF(self.q, irreducible_poly=_poly(p, modulus), verify=False)
        )
        self.generator = int(self.gf.primitive_element)
        self._exp, self._log = self._build_logs()

        elements = np.arange(self.q, dtype=np.int64)
        self._neg_table = self.pack((-self.digits(elements)) % p)
        self._inv_table = np.zeros(self.q, dtype=np.int64)
        self._inv_table[1:] = self._exp[(-self._log[1:]) % (self.q - 1)]

        use_tables = self.q <= settings.table_limit
        self._mul_table = self._build_mul_table() if use_tables and n > 1 else None
        self._add_table = (
            self._build_add_table() if use_tables and n > 1 and p > 2 else None
        )

        self.trace_table = (
            elements.copy()
            if n == 1
            else np.asarray(self.gf.elements.field_trace(), dtype=np.int64)
        )
        self.char_table = np.exp(2j * np.pi * np.arange(p) / p)
        self.chi_table = self.char_table[self.trace_table]

        for table in (
            self._exp,
            self._log,
            self._neg_table,
            self._inv_table,
            self.trace_table,
            self.char_table,
            self.chi_table,
        ):
            table.setflags(write=False)

    # construction

    def _build_logs(self) -> Tuple[np.ndarray, np.ndarray]:
        """exp[k] = g^k and log[g^k] = k, log[0] = 0."""
        order = self.q - 1
        nonzero = np.arange(1, self.q, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        log[1:] = np.asarray(self.gf(nonzero).log(), dtype=np.int64) % max(order, 1)
        exp = np.empty(order, dtype=np.int64)
        exp[log[1:]] = nonzero
        return exp, log

    def _build_mul_table(self) -> np.ndarray:
        logs = self._log[1:]
        table = np.zeros((self.q, self.q), dtype=np.int32)
        table[1:, 1:] = self._exp[(logs[:, None] + logs[None, :]) % (self.q - 1)]
        table.setflags(write=False)
        return table

    def _build_add_table(self) -> np.ndarray:
        digits = self.digits(np.arange(self.q, dtype=np.int64))
        table = np.zeros((self.q, self.q), dtype=np.int32)
        for i in range(self.n):
            column = digits[:, i]
            table += (((column[:, None] + column[None, :]) % self.p) * self.p**i).astype(
                np.int32
            )
        table.setflags(write=False)
        return table

    # encoding

    def digits(self, a) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64)[..., None] // self._powers) % self.p

    def pack(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._powers

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # vectorised arithmetic

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a, b].astype(np.int64)
        return self.pack((self.digits(a) + self.digits(b)) % self.p)

    def vneg(self, a) -> np.ndarray:
        return self._neg_table[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b].astype(np.int64)
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("Zero has no multiplicative inverse")
        return self._inv_table[a]

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if e < 0:
            a = self.vinv(a)
            e = -e
        out = self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    # scalar arithmetic

    def add(self, a: FqElem, b: FqElem) -> FqElem:
        return int(self.vadd(a, b))

    def neg(self, a: FqElem) -> FqElem:
        return int(self.vneg(a))

    def sub(self, a: FqElem, b: FqElem) -> FqElem:
        return int(self.vsub(a, b))

    def mul(self, a: FqElem, b: FqElem) -> FqElem:
        return int(self.vmul(a, b))

    def inv(self, a: FqElem) -> FqElem:
        return int(self.vinv(a))

    def pow(self, a: FqElem, e: int) -> FqElem:
        return int(self.vpow(a, e))

    def trace(self, a: FqElem) -> int:
        return int(self.trace_table[a])

    def chi(self, a: FqElem) -> complex:
        """The canonical additive character exp(2*pi*i*Tr(a)/p)."""
        return complex(self.chi_table[a])

    def order(self, a: FqElem) -> int:
        if a == 0:
            raise DivisionByZero("Zero has no multiplicative order")
        return (self.q - 1) // gcd(int(self._log[a]), self.q - 1)

    def subfield(self, k: int) -> np.ndarray:
        """Sorted indices of the subfield with p^k elements."""
        if k < 1 or self.n % k != 0:
            raise NoProperSubfield(f"GF({self.q}) has no subfield of size {self.p}^{k}")
        elements = self.elements
        return elements[self.vpow(elements, self.p**k) == elements]

    def descriptor(self) -> FieldDescriptor:
        return FieldDescriptor(p=self.p, n=self.n, q=self.q, modulus=list(self.modulus))

    def __eq__(self, other: object):
        if not isinstance(other, FieldCtx):
            return False
        return (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)})"


@lru_cache(maxsize=None)
def _cached_field(p: int, n: int) -> FieldCtx:
    return FieldCtx(p, n, least_irreducible(p, n))


def make_field(p: int, n: int = 1, cap: Optional[int] = None) -> FieldCtx:
    if p < 2 or not galois.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise DegreeOutOfRange(f"Extension degree must be at least 1, got {n}")
    cap = settings.field_cap if cap is None else cap
    if p**n > cap:
        raise FieldTooLarge(f"GF({p}^{n}) exceeds the field size cap {cap}")
    return _cached_field(p, n)


def field_of_order(q: int) -> FieldCtx:
    """The field with q elements, q a prime power."""
    if not galois.is_prime_power(q):
        raise NotPrime(f"{q} is not a prime power")
    (p,), (n,) = galois.factors(q)
    return make_field(int(p), int(n))


def multiplicative_generator(F: FieldCtx) -> FqElem:
    """Least-index element of multiplicative order q - 1."""
    return F.generator
