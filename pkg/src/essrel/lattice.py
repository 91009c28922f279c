"""Orthogonal idempotents from multiplicative families on finite lattices.

Given a finite lattice P with bottom 0 and elements g_x of a ring with
g_0 = 1 and g_x g_y = g_{x v y}, the elements

    f_x = sum over y >= x of mu(x, y) g_y

are orthogonal idempotents summing to 1.  The generic engine works for any
``Algebra``; ``OrderAlgebra`` is the special case of the lattice of orders
with an adjoined top sent to zero.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .algebra import Algebra, AlgebraElement, Ring, ZZ
from .errors import DomainError, FamilyInvariantError
from .orders import OrderLattice, build_order_lattice
from .relations import Relation, mask_to_hex


class FiniteLattice:
    """A finite lattice given by its order relation.

    ``up[x]`` is the bitmask of elements y with x <= y; joins are least upper
    bounds computed from it and tabulated.
    """

    def __init__(self, elements: Sequence, up: Sequence[int]):
        self.elements = list(elements)
        m = len(self.elements)
        if len(up) != m:
            raise DomainError("order table does not match the element list")
        self.up = list(up)
        self.down = [sum(1 << x for x in range(m) if self.up[x] >> y & 1) for y in range(m)]
        for x in range(m):
            if not self.up[x] >> x & 1:
                raise DomainError(f"order table is not reflexive at {x}")
        self.join = [[self._lub(x, y) for y in range(m)] for x in range(m)]
        lows = [x for x in range(m) if self.up[x] == (1 << m) - 1]
        highs = [x for x in range(m) if self.down[x] == (1 << m) - 1]
        if not lows or not highs:
            raise DomainError("a finite lattice needs a bottom and a top")
        self.bottom, self.top = lows[0], highs[0]
        self._mobius: Dict[int, Dict[int, int]] = {}

    @classmethod
    def from_leq(cls, elements: Sequence, leq) -> "FiniteLattice":
        m = len(elements)
        up = [sum(1 << y for y in range(m) if leq(elements[x], elements[y])) for x in range(m)]
        return cls(elements, up)

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def _lub(self, x: int, y: int) -> int:
        common = self.up[x] & self.up[y]
        least = [z for z in _bits(common) if self.up[z] & common == common]
        if len(least) != 1:
            raise DomainError(f"elements {x} and {y} have no least upper bound")
        return least[0]

    def meet(self, x: int, y: int) -> int:
        common = self.down[x] & self.down[y]
        great = [z for z in _bits(common) if self.down[z] & common == common]
        if len(great) != 1:
            raise DomainError(f"elements {x} and {y} have no greatest lower bound")
        return great[0]

    def opposite(self) -> "FiniteLattice":
        return FiniteLattice(self.elements, self.down)

    def mobius_row(self, x: int) -> Dict[int, int]:
        row = self._mobius.get(x)
        if row is None:
            ups = sorted(_bits(self.up[x]), key=lambda y: bin(self.down[y]).count("1"))
            row = {}
            for y in ups:
                row[y] = 1 if y == x else -sum(row[z] for z in row if self.leq(z, y))
            self._mobius[x] = row
        return row

    def mobius(self, x: int, y: int) -> int:
        row = self.mobius_row(x)
        if y not in row:
            raise DomainError(f"{x} is not below {y}")
        return row[y]


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def chain_lattice(k: int) -> FiniteLattice:
    """The chain 0 < 1 < ... < k-1."""
    return FiniteLattice.from_leq(list(range(k)), lambda a, b: a <= b)


def boolean_lattice(k: int) -> FiniteLattice:
    """Subsets of a k-set (as bitmasks) under inclusion."""
    return FiniteLattice.from_leq(list(range(1 << k)), lambda a, b: a & ~b == 0)


def order_finite_lattice(L: OrderLattice) -> FiniteLattice:
    """The orders together with an adjoined top, as a FiniteLattice.

    The top is the last element and is represented by ``None``.
    """
    m = len(L)
    up = []
    for i in range(m):
        u = 1 << m
        for j in L.up_set(i):
            u |= 1 << j
        up.append(u)
    up.append(1 << m)
    return FiniteLattice(list(L.orders) + [None], up)


class MultiplicativeFamily:
    """Elements g_x of an algebra indexed by a finite lattice.

    ``g[bottom]`` must be the identity and ``g[x] g[y] = g[x v y]``.
    """

    def __init__(self, lattice: FiniteLattice, algebra: Algebra, g: Sequence[AlgebraElement]):
        if len(g) != len(lattice):
            raise DomainError("family size does not match the lattice")
        self.lattice = lattice
        self.algebra = algebra
        self.g = list(g)

    @property
    def carrier(self) -> Ring:
        return self.algebra.ring

    def check(self, join: Optional[Sequence[Sequence[int]]] = None) -> None:
        """Raise FamilyInvariantError on the first failing pair."""
        L = self.lattice
        join = join or L.join
        one = self.algebra.one()
        if self.g[L.bottom] != one:
            raise FamilyInvariantError("g at the bottom is not the identity",
                                       pair=(L.bottom, L.bottom))
        m = len(L)
        for x in range(m):
            for y in range(m):
                if self.g[x] * self.g[y] != self.g[join[x][y]]:
                    raise FamilyInvariantError(f"g[{x}] g[{y}] != g[{x} v {y}]", pair=(x, y))


def idempotent_family(L: FiniteLattice, G: MultiplicativeFamily, check: bool = True
                      ) -> Dict[int, AlgebraElement]:
    """f_x = sum over x <= y of mu(x,y) g_y for every lattice element x."""
    if G.lattice is not L:
        raise DomainError("family is defined on a different lattice")
    if check:
        G.check()
    A = G.algebra
    out = {}
    for x in range(len(L)):
        out[x] = A.sum((G.g[y] * mu for y, mu in L.mobius_row(x).items() if mu),
                       basis=G.g[x].basis)
    return out


def opposite_idempotent_family(L: FiniteLattice, G: MultiplicativeFamily,
                               check: bool = True) -> Dict[int, AlgebraElement]:
    """The same construction on the opposite lattice, for meet-multiplicative g."""
    op = L.opposite()
    return idempotent_family(op, MultiplicativeFamily(op, G.algebra, G.g), check)


class PointwiseAlgebra(Algebra):
    """Functions on a finite set with pointwise product (a product of copies of k)."""

    def __init__(self, points: int, ring: Ring = ZZ):
        super().__init__(ring)
        self.points = points

    def basis_product(self, basis, a, b):
        return a if a == b else None

    def one(self) -> AlgebraElement:
        return self.element({p: 1 for p in range(self.points)})

    def indicator(self, pts) -> AlgebraElement:
        return self.element({p: 1 for p in pts})


class OrderAlgebra(Algebra):
    """The algebra spanned by the orders on n points, with R S = R v S or 0.

    Keys are order indices of the lattice.  The ``"O"`` basis is the orders
    themselves and the ``"f"`` basis the orthogonal idempotents f_R.
    """

    default_basis = "O"
    bases = ("O", "f")

    def __init__(self, n_or_lattice, ring: Ring = ZZ):
        super().__init__(ring)
        L = n_or_lattice if isinstance(n_or_lattice, OrderLattice) else build_order_lattice(n_or_lattice)
        self.lattice = L
        self.n = L.n

    def one(self) -> AlgebraElement:
        return self.basis_element(self.lattice.bottom, "O")

    def order(self, R: Relation) -> AlgebraElement:
        return self.basis_element(self.lattice.index_of(R), "O")

    def basis_product(self, basis, a, b):
        if basis == "O":
            j = self.lattice.join(a, b)
            return None if j == self.lattice.top else j
        return a if a == b else None

    def idempotent(self, i: int) -> AlgebraElement:
        return self.basis_element(i, "f")

    def convert(self, a: AlgebraElement, basis: str) -> AlgebraElement:
        if a.basis == basis:
            return a
        L = self.lattice
        out: Dict[int, object] = {}
        if basis == "f":
            # S = sum of f_T over T containing S
            for s, c in a.coeffs.items():
                for t in L.up_set(s):
                    out[t] = out.get(t, 0) + c
        elif basis == "O":
            for r, c in a.coeffs.items():
                for s, mu in L.mobius_row(r).items():
                    if mu:
                        out[s] = out.get(s, 0) + c * mu
        else:
            raise DomainError(f"unknown basis {basis!r}")
        return AlgebraElement(self, out, basis)

    def key_repr(self, key, basis: str) -> str:
        h = mask_to_hex(self.n, self.lattice.orders[key])
        return f"f[{h}]" if basis == "f" else f"O[{h}]"


def order_idempotents(L: OrderLattice, ring: Ring = ZZ) -> Dict[int, AlgebraElement]:
    """f_R written in the order basis, for every order index R."""
    A = OrderAlgebra(L, ring)
    return {i: A.idempotent(i).to("O") for i in range(len(L))}


def order_family(L: OrderLattice, ring: Ring = ZZ):
    """The family g_R = R, g_top = 0 on the orders with a top adjoined."""
    F = order_finite_lattice(L)
    A = OrderAlgebra(L, ring)
    g = [A.basis_element(i, "O") for i in range(len(L))] + [A.zero("O")]
    return F, MultiplicativeFamily(F, A, g)


def idempotent_support_sizes(L: OrderLattice) -> List[dict]:
    """For each order R the number of orders occurring in f_R."""
    return [{"R": mask_to_hex(L.n, m), "support": sum(1 for v in L.mobius_row(i).values() if v)}
            for i, m in enumerate(L.orders)]
