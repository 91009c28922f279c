"""Exact scalars and sparse elements of algebras with a monomial basis.

Every algebra in this package has a basis whose pairwise products are either
zero or again a single basis element, so multiplication is the bilinear
extension of a partial function on basis keys.  Some algebras carry two
bases (the permuted-order algebra has a monomial basis and an idempotent
basis); an element records which basis its keys refer to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Mapping, Optional, Tuple

from .errors import DomainError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """The coefficient ring: integers, rationals, or integers mod a prime."""

    kind: str = "int"
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("int", "rat", "modp"):
            raise DomainError(f"unknown ring kind {self.kind!r}")
        if self.kind == "modp":
            if self.p is None or not _is_prime(self.p):
                raise DomainError(f"mod-p ring needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise DomainError("only the mod-p ring takes a modulus")

    @classmethod
    def parse(cls, tag: str) -> "Ring":
        """Parse ``int``, ``rat`` or ``modp:P``."""
        if tag in ("int", "rat"):
            return cls(tag)
        if tag.startswith("modp:"):
            try:
                p = int(tag[5:])
            except ValueError:
                raise DomainError(f"bad modulus in {tag!r}") from None
            return cls("modp", p)
        raise DomainError(f"unknown ring {tag!r}; expected int, rat or modp:P")

    @property
    def tag(self) -> str:
        return f"modp:{self.p}" if self.kind == "modp" else self.kind

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "modp" else 0

    @property
    def is_field(self) -> bool:
        return self.kind != "int"

    def __call__(self, x):
        if self.kind == "int":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise DomainError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "rat":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.kind == "int":
            if x in (1, -1):
                return x
            raise DomainError(f"{x} is not a unit in the integers")
        if self.kind == "rat":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def __str__(self) -> str:
        return self.tag


ZZ = Ring("int")
QQ = Ring("rat")


class AlgebraElement:
    """A finite linear combination of basis keys with exact coefficients."""

    __slots__ = ("algebra", "basis", "coeffs")

    def __init__(self, algebra: "Algebra", coeffs: Mapping[Hashable, object],
                 basis: Optional[str] = None):
        ring = algebra.ring
        clean = {}
        for k, c in coeffs.items():
            c = ring(c)
            if c:
                clean[k] = c
        self.algebra = algebra
        self.basis = basis if basis is not None else algebra.default_basis
        self.coeffs: Dict[Hashable, object] = clean

    def _coerce(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise DomainError("elements of different algebras")
        if other.basis != self.basis:
            other = self.algebra.convert(other, self.basis)
        return other

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return AlgebraElement(self.algebra, out, self.basis)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: -c for k, c in self.coeffs.items()}, self.basis)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, self._coerce(other))
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar) -> "AlgebraElement":
        s = self.algebra.ring(scalar)
        return AlgebraElement(self.algebra, {k: s * c for k, c in self.coeffs.items()},
                              self.basis)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            return NotImplemented
        return self.coeffs == self._coerce(other).coeffs

    def __hash__(self):
        return hash((self.basis, frozenset(self.coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(sorted(self.coeffs.items(), key=lambda kv: self.algebra.sort_key(kv[0])))

    def coefficient(self, key):
        return self.coeffs.get(key, 0)

    def support(self):
        return sorted(self.coeffs, key=self.algebra.sort_key)

    def to(self, basis: str) -> "AlgebraElement":
        return self.algebra.convert(self, basis)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = [f"{c}*{self.algebra.key_repr(k, self.basis)}" for k, c in self]
        return " + ".join(terms)


class Algebra:
    """Base for algebras whose basis is closed under multiplication up to zero.

    Subclasses implement ``basis_product(basis, a, b)`` returning a key or
    ``None`` for zero, and ``one()``.
    """

    default_basis = "std"
    bases: Tuple[str, ...] = ("std",)

    def __init__(self, ring: Ring = ZZ):
        self.ring = ring

    def element(self, coeffs: Mapping[Hashable, object], basis: Optional[str] = None):
        return AlgebraElement(self, coeffs, basis)

    def basis_element(self, key, basis: Optional[str] = None) -> AlgebraElement:
        return AlgebraElement(self, {key: 1}, basis)

    def zero(self, basis: Optional[str] = None) -> AlgebraElement:
        return AlgebraElement(self, {}, basis)

    def sort_key(self, key):
        return key

    def key_repr(self, key, basis: str) -> str:
        return repr(key)

    def convert(self, a: AlgebraElement, basis: str) -> AlgebraElement:
        if a.basis == basis:
            return a
        raise DomainError(f"cannot convert from basis {a.basis!r} to {basis!r}")

    def basis_product(self, basis: str, a, b):
        raise NotImplementedError

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return self.multiply_in(a.basis, a, b)

    def multiply_in(self, basis: str, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        a = self.convert(a, basis)
        b = self.convert(b, basis)
        prod = self.basis_product
        out: Dict[Hashable, object] = {}
        for ka, ca in a.coeffs.items():
            for kb, cb in b.coeffs.items():
                k = prod(basis, ka, kb)
                if k is not None:
                    out[k] = out.get(k, 0) + ca * cb
        return AlgebraElement(self, out, basis)

    def sum(self, elements: Iterable[AlgebraElement], basis: Optional[str] = None):
        acc: Dict[Hashable, object] = {}
        basis = basis or self.default_basis
        for e in elements:
            e = self.convert(e, basis)
            for k, c in e.coeffs.items():
                acc[k] = acc.get(k, 0) + c
        return AlgebraElement(self, acc, basis)
