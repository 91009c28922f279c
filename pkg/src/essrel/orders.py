"""The poset of all partial orders on n points.

Orders are indexed by ascending mask.  Joins that leave the set of orders
(the transitive closure of the union is not antisymmetric) return the
sentinel ``L.top``, which equals ``len(L)`` so that using it as a list index
fails loudly instead of wrapping around.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Dict, List

from .errors import DomainError, ResourceGuardError
from .relations import (
    Permutation,
    Relation,
    closure_mask,
    identity_mask,
    is_order_mask,
    mask_to_hex,
    permute_mask,
    restrict_mask,
    symmetric_group,
    widen_mask,
)

MAX_LATTICE_N = 6


def _popcount(x: int) -> int:
    return bin(x).count("1")


def order_extensions(k: int, mask: int) -> List[int]:
    """All orders on k+1 points whose restriction to the first k is ``mask``.

    The new point k sits above a down-closed set D and below an up-closed set
    U with every element of D below every element of U.
    """
    n = k + 1
    full = (1 << k) - 1
    rows = [(mask >> (x * k)) & full for x in range(k)]      # up-sets
    cols = [0] * k                                           # down-sets
    for x in range(k):
        for y in range(k):
            if rows[x] >> y & 1:
                cols[y] |= 1 << x
    down_closed = [D for D in range(1 << k)
                   if all(cols[d] & ~D == 0 for d in range(k) if D >> d & 1)]
    up_closed = [U for U in range(1 << k)
                 if all(rows[u] & ~U == 0 for u in range(k) if U >> u & 1)]
    base = widen_mask(k, mask, n) | 1 << (k * n + k)
    out = []
    for D in down_closed:
        common_up = full
        for d in range(k):
            if D >> d & 1:
                common_up &= rows[d]
        for U in up_closed:
            if U & D or U & ~common_up:
                continue
            m = base
            for d in range(k):
                if D >> d & 1:
                    m |= 1 << (d * n + k)
                if U >> d & 1:
                    m |= 1 << (k * n + d)
            out.append(m)
    return out


@lru_cache(maxsize=None)
def enumerate_orders(n: int) -> tuple:
    """Ascending masks of all orders on n points.

    Exhaustive scan up to n = 4, one-point extension of the n-1 orders above.
    """
    if n <= 4:
        return tuple(m for m in range(1 << (n * n)) if is_order_mask(n, m))
    out = []
    for m in enumerate_orders(n - 1):
        out.extend(order_extensions(n - 1, m))
    return tuple(sorted(out))


class OrderLattice:
    """Orders on n points with containment, joins, Moebius values and orbits."""

    def __init__(self, n: int):
        if n < 1:
            raise DomainError("n must be positive")
        if n > MAX_LATTICE_N:
            raise ResourceGuardError(f"order lattices are limited to n <= {MAX_LATTICE_N}",
                                     limit=MAX_LATTICE_N)
        self.n = n
        self.orders: List[int] = list(enumerate_orders(n))
        self.index: Dict[int, int] = {m: i for i, m in enumerate(self.orders)}
        self.top = len(self.orders)
        self.bottom = self.index[identity_mask(n)]
        self.group = symmetric_group(n)
        self._join: Dict[tuple, int] = {}
        self._up: Dict[int, List[int]] = {}
        self._mobius: Dict[int, Dict[int, int]] = {}
        self._build_orbits()

    def __len__(self) -> int:
        return len(self.orders)

    def relation(self, i: int) -> Relation:
        return Relation(self.n, self.orders[i])

    @property
    def relations(self) -> List[Relation]:
        return [Relation(self.n, m) for m in self.orders]

    def index_of(self, R: Relation) -> int:
        try:
            return self.index[R.mask]
        except KeyError:
            raise DomainError(f"{R} is not an order") from None

    # containment and lattice operations

    def leq(self, i: int, j: int) -> bool:
        return self.orders[i] & ~self.orders[j] == 0

    def up_set(self, i: int) -> List[int]:
        """Indices j with orders[i] contained in orders[j], ascending."""
        up = self._up.get(i)
        if up is None:
            a = self.orders[i]
            up = [j for j, b in enumerate(self.orders) if a & ~b == 0]
            self._up[i] = up
        return up

    def join(self, i: int, j: int) -> int:
        if i == self.top or j == self.top:
            return self.top
        if i > j:
            i, j = j, i
        key = (i, j)
        r = self._join.get(key)
        if r is None:
            c = closure_mask(self.n, self.orders[i] | self.orders[j])
            r = self.index.get(c, self.top)
            self._join[key] = r
        return r

    def meet(self, i: int, j: int) -> int:
        if i == self.top:
            return j
        if j == self.top:
            return i
        return self.index[self.orders[i] & self.orders[j]]

    @property
    def join_table(self) -> List[List[int]]:
        m = len(self.orders)
        return [[self.join(i, j) for j in range(m)] for i in range(m)]

    @property
    def containment(self) -> Dict[int, List[int]]:
        """Covering relation of the containment DAG: i -> orders covering i."""
        out = {}
        for i in range(len(self.orders)):
            up = [j for j in self.up_set(i) if j != i]
            sizes = {j: _popcount(self.orders[j]) for j in up}
            out[i] = [j for j in up
                      if not any(self.leq(k, j) and k != j for k in up if sizes[k] < sizes[j])]
        return out

    def mobius_row(self, i: int) -> Dict[int, int]:
        """mu(orders[i], S) for every order S containing orders[i]."""
        row = self._mobius.get(i)
        if row is None:
            orders = self.orders
            up = sorted(self.up_set(i), key=lambda j: (_popcount(orders[j]), j))
            row = {}
            done = []
            for s in up:
                if s == i:
                    row[s] = 1
                else:
                    ms = orders[s]
                    row[s] = -sum(row[y] for y in done if orders[y] & ~ms == 0)
                done.append(s)
            self._mobius[i] = row
        return row

    def mobius(self, i: int, j: int) -> int:
        row = self.mobius_row(i)
        if j not in row:
            raise DomainError(f"order {i} is not contained in order {j}")
        return row[j]

    # symmetric group action

    def conjugate_index(self, i: int, perm_index: int) -> int:
        return self.index[permute_mask(self.n, self.orders[i], self.group.images[perm_index])]

    def _build_orbits(self) -> None:
        G = self.group
        m = len(self.orders)
        self.orbit_of = [-1] * m
        self.transporter = [0] * m          # least permutation carrying the rep onto i
        self.orbit_reps: List[int] = []
        self.orbit_members: List[List[int]] = []
        self._rep_stab: List[List[int]] = []
        for i, mask in enumerate(self.orders):
            if self.orbit_of[i] >= 0:
                continue
            o = len(self.orbit_reps)
            members = []
            stab = []
            for p, images in enumerate(G.images):
                j = self.index[permute_mask(self.n, mask, images)]
                if j == i:
                    stab.append(p)
                if self.orbit_of[j] < 0:
                    self.orbit_of[j] = o
                    self.transporter[j] = p
                    members.append(j)
            self.orbit_reps.append(i)
            self.orbit_members.append(sorted(members))
            self._rep_stab.append(stab)

    def stabilizer_indices(self, i: int) -> List[int]:
        o = self.orbit_of[i]
        base = self._rep_stab[o]
        if self.orbit_reps[o] == i:
            return list(base)
        G = self.group
        t = self.transporter[i]
        ti = G.inv[t]
        return sorted(G.index[_compose(G.images[t], _compose(G.images[h], G.images[ti]))]
                      for h in base)

    def stabilizer(self, i: int) -> List[Permutation]:
        return [self.group.perm(p) for p in self.stabilizer_indices(i)]

    def coset_reps(self, i: int) -> List[int]:
        """Least permutation (as an index) in each left coset of the stabilizer."""
        o = self.orbit_of[i]
        if self.orbit_reps[o] != i:
            raise DomainError("coset representatives are kept for orbit representatives only")
        return sorted(self.transporter[j] for j in self.orbit_members[o])

    def orbit_index(self, i: int) -> int:
        return self.orbit_of[i]

    # output

    def to_json(self) -> dict:
        n = self.n
        mob = []
        for i in range(len(self.orders)):
            for j, v in sorted(self.mobius_row(i).items()):
                mob.append([i, j, v])
        return {
            "n": n,
            "orders": [mask_to_hex(n, m) for m in self.orders],
            "mobius": mob,
            "orbits": [
                {"rep": r, "members": mem, "stabilizer_order": len(st)}
                for r, mem, st in zip(self.orbit_reps, self.orbit_members, self._rep_stab)
            ],
        }

    def restriction_index(self, j: int, small: "OrderLattice") -> int:
        """Index in ``small`` of orders[j] restricted to the first small.n points."""
        return small.index[restrict_mask(self.n, self.orders[j], small.n)]


def _compose(a, b):
    return tuple(a[t] for t in b)


_LATTICES: Dict[int, OrderLattice] = {}


def build_order_lattice(n: int) -> OrderLattice:
    """The order lattice on n points (cached per n)."""
    L = _LATTICES.get(n)
    if L is None:
        L = OrderLattice(n)
        _LATTICES[n] = L
    return L


def order_join(L: OrderLattice, i: int, j: int) -> int:
    return L.join(i, j)


def mobius_value(L: OrderLattice, i: int, j: int) -> int:
    return L.mobius(i, j)


def stabilizer(L: OrderLattice, i: int) -> List[Permutation]:
    return L.stabilizer(i)


def dump_json(L: OrderLattice) -> str:
    return json.dumps(L.to_json(), sort_keys=True)
