"""The essential algebra E: relations modulo those factoring through fewer points.

E has the essential relations on n points as a basis; a product of two of
them is their composite when that is essential and zero otherwise.  This
module builds E for small n, the ideal H of relations strictly containing a
permutation (E/H is the group algebra of the symmetric group), the nilpotent
ideal N spanned by the elements (S - closure(S)) D_s, and the projection of
a relation onto the permuted-order algebra P = E/N.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .algebra import Algebra, AlgebraElement, QQ, Ring, ZZ
from .errors import DomainError, InconsistencyError, ResourceGuardError
from .essentiality import essential_table
from .linalg import SparseEchelon
from .orders import build_order_lattice
from .relations import (
    Permutation,
    Relation,
    closure_mask,
    compose_mask,
    contained_permutation_images,
    delta_mask,
    identity_mask,
    is_reflexive_mask,
    mask_to_hex,
    symmetric_group,
    transpose_mask,
)

MAX_E_N = 4


def _inverse(images) -> Tuple[int, ...]:
    inv = [0] * len(images)
    for x, sx in enumerate(images):
        inv[sx] = x
    return tuple(inv)


class EssentialAlgebra(Algebra):
    """E for n points; keys are relation masks."""

    def __init__(self, n: int, ring: Ring = ZZ, cache_dir=None):
        if n > MAX_E_N:
            if n == 5 and cache_dir is not None:
                from . import store
                if store.load_cached(cache_dir, 5) is None:
                    raise ResourceGuardError("E for n = 5 needs a cached enumeration", limit=4)
            else:
                raise ResourceGuardError(f"the essential algebra is limited to n <= {MAX_E_N}",
                                         limit=MAX_E_N)
        super().__init__(ring)
        self.n = n
        self.table = essential_table(n, cache_dir=cache_dir, allow_n5=n == 5)
        self._prod: Dict[Tuple[int, int], Optional[int]] = {}

    @property
    def dimension(self) -> int:
        return len(self.table)

    @property
    def basis_masks(self) -> List[int]:
        return self.table.masks

    def one(self) -> AlgebraElement:
        return self.basis_element(identity_mask(self.n))

    def relation(self, R: Relation) -> AlgebraElement:
        """The class of R in E (zero when R is inessential)."""
        if R.n != self.n:
            raise DomainError(f"relation on {R.n} points, algebra on {self.n}")
        return self.element({R.mask: 1} if R.mask in self.table else {})

    def delta(self, sigma: Permutation) -> AlgebraElement:
        return self.basis_element(delta_mask(sigma.images))

    def basis_product(self, basis, a, b):
        key = (a, b)
        if key in self._prod:
            return self._prod[key]
        c = compose_mask(self.n, a, b)
        r = c if c in self.table else None
        self._prod[key] = r
        return r

    def transpose(self, a: AlgebraElement) -> AlgebraElement:
        """The anti-automorphism induced by R -> R^t."""
        return self.element({transpose_mask(self.n, k): c for k, c in a.coeffs.items()})

    def key_repr(self, key, basis):
        return f"E[{mask_to_hex(self.n, key)}]"

    # raw sparse-dict arithmetic used by the span computations

    def _mul(self, u: Dict[int, object], v: Dict[int, object]) -> Dict[int, object]:
        out: Dict[int, object] = {}
        prod = self.basis_product
        for a, ca in u.items():
            for b, cb in v.items():
                k = prod(None, a, b)
                if k is not None:
                    out[k] = out.get(k, 0) + ca * cb
        return {k: c for k, c in out.items() if c}


def e_multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if not isinstance(a.algebra, EssentialAlgebra) or a.algebra is not b.algebra:
        raise DomainError("e_multiply needs two elements of the same essential algebra")
    return a.algebra.multiply(a, b)


_ALGEBRAS: Dict[Tuple[int, str], EssentialAlgebra] = {}


def essential_algebra(n: int, ring: Ring = ZZ) -> EssentialAlgebra:
    key = (n, ring.tag)
    E = _ALGEBRAS.get(key)
    if E is None:
        E = _ALGEBRAS[key] = EssentialAlgebra(n, ring)
    return E


def quotient_by_H(n: int) -> dict:
    """The ideal H and the multiplication table of E/H on the classes of D_s.

    ``table[i][j]`` is the index of the class of D_i D_j, or None if the
    product falls into H (it never does).
    """
    E = essential_algebra(n)
    G = symmetric_group(n)
    deltas = {m: i for i, m in enumerate(G.delta)}
    h_basis = [Relation(n, m) for m in E.basis_masks if m not in deltas]
    table = []
    for a in G.delta:
        row = []
        for b in G.delta:
            c = E.basis_product(None, a, b)
            row.append(deltas.get(c) if c is not None else None)
        table.append(row)
    return {"n": n, "H": h_basis, "quotient_basis": [G.perm(i) for i in range(G.order)],
            "table": table}


def n_ideal_generators(n: int, ring: Ring = QQ) -> List[AlgebraElement]:
    """The elements S D_s - closure(S) D_s for reflexive essential S, without zeros or repeats."""
    E = essential_algebra(n, ring)
    G = symmetric_group(n)
    seen = set()
    out = []
    for S in E.basis_masks:
        if not is_reflexive_mask(n, S):
            continue
        Sbar = closure_mask(n, S)
        if Sbar == S:
            continue
        for d in G.delta:
            a = E.basis_product(None, S, d)
            b = E.basis_product(None, Sbar, d)
            v = {}
            if a is not None:
                v[a] = 1
            if b is not None:
                v[b] = v.get(b, 0) - 1
            v = {k: c for k, c in v.items() if c}
            if not v:
                continue
            key = frozenset(v.items())
            if key not in seen:
                seen.add(key)
                out.append(E.element(v))
    return out


def ideal_span(E: EssentialAlgebra, gens: List[AlgebraElement]) -> SparseEchelon:
    """Echelon basis of the two-sided ideal generated by ``gens``."""
    ech = SparseEchelon(QQ)
    basis = E.basis_masks
    queue = [dict(g.coeffs) for g in gens]
    while queue:
        v = ech.reduce(queue.pop())
        if not v:
            continue
        ech.add(v)
        for b in basis:
            one = {b: 1}
            left = E._mul(one, v)
            if left:
                queue.append(left)
            right = E._mul(v, one)
            if right:
                queue.append(right)
    return ech


def nilpotency_report(n: int, allow_n4: bool = False) -> dict:
    """dim E, dim N and the least m with N^m = 0, by exact span iteration."""
    if n > 3 and not (n == 4 and allow_n4):
        raise ResourceGuardError("the nilpotency computation is limited to n <= 3 "
                                 "(n = 4 is opt-in)", limit=3)
    E = essential_algebra(n, QQ)
    gens = n_ideal_generators(n)
    N = ideal_span(E, gens)
    dims = [N.rank]
    m = _nilpotency(E, N, dims)
    return {"n": n, "dim_E": E.dimension, "dim_N": N.rank, "index_m": m,
            "power_dims": dims, "generators": len(gens)}


def _nilpotency(E: EssentialAlgebra, N: SparseEchelon, dims: List[int]) -> int:
    if N.rank == 0:
        return 1
    base = N.basis()
    power = base
    m = 1
    while power:
        m += 1
        if m > E.dimension + 1:
            raise InconsistencyError("the ideal N is not nilpotent within dim E steps")
        ech = SparseEchelon(QQ)
        for x in power:
            for y in base:
                p = E._mul(x, y)
                if p:
                    ech.add(p)
        power = ech.basis()
        dims.append(ech.rank)
    return m


def nilpotency_index(gens: List[AlgebraElement]) -> int:
    """Least m with N^m = 0, N the two-sided ideal generated by ``gens``."""
    if not gens:
        return 1
    E = gens[0].algebra
    if not isinstance(E, EssentialAlgebra):
        raise DomainError("generators must lie in an essential algebra")
    if E.ring.kind != "rat":
        raise DomainError("the nilpotency computation needs rational scalars")
    return _nilpotency(E, ideal_span(E, gens), [])


# projection onto P

def project_mask(n: int, mask: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """(closure mask, images of s) when mask = Q D_s with Q reflexive and closure(Q) an order."""
    L = build_order_lattice(n)
    found = None
    for images in contained_permutation_images(n, mask):
        q = compose_mask(n, mask, delta_mask(_inverse(images)))
        qbar = closure_mask(n, q)
        if qbar in L.index:
            if found is not None:
                raise InconsistencyError(
                    f"{Relation(n, mask)} projects along two permutations")
            found = (qbar, images)
    return found


def project_to_P(R: Relation) -> Optional[Tuple[int, Permutation]]:
    """(order index, s) with R identified with closure(Q) D_s in P, or None when R maps to 0."""
    p = project_mask(R.n, R.mask)
    if p is None:
        return None
    L = build_order_lattice(R.n)
    return L.index[p[0]], Permutation(p[1])


def project_element(a: AlgebraElement, P) -> AlgebraElement:
    """Linear extension of project_to_P into a PermutedOrderAlgebra (monomial basis)."""
    G = P.group
    out: Dict[Tuple[int, int], object] = {}
    for mask, c in a.coeffs.items():
        p = project_mask(a.algebra.n, mask)
        if p is not None:
            key = (P.lattice.index[p[0]], G.index[p[1]])
            out[key] = out.get(key, 0) + c
    return P.element(out, "mono")


# the simple module L spanned by D_s T

def regular_representation_on_L(n: int) -> dict:
    """The action of E on the basis D_s T of L, T the usual total order.

    Every essential relation acts by 0 or sends each D_s T to some D_r T or
    to 0; the images of D_t T D_r^-1 are the matrix units at (t, r).
    """
    if n > MAX_E_N:
        raise ResourceGuardError(f"limited to n <= {MAX_E_N}", limit=MAX_E_N)
    E = essential_algebra(n)
    G = symmetric_group(n)
    T = Relation.usual_order(n).mask
    col = {compose_mask(n, d, T): i for i, d in enumerate(G.delta)}
    if len(col) != G.order:
        raise InconsistencyError("the elements D_s T are not distinct")

    def image(mask: int) -> Dict[Tuple[int, int], int]:
        m = {}
        for s_mask, s in col.items():
            c = E.basis_product(None, mask, s_mask)
            if c is None:
                continue
            r = col.get(c)
            if r is None:
                raise InconsistencyError(
                    f"{Relation(n, mask)} sends a basis vector of L outside L")
            m[(r, s)] = 1
        return m

    for mask in E.basis_masks:
        image(mask)
    units = {}
    ech = SparseEchelon(QQ)
    for t in range(G.order):
        for r in range(G.order):
            u = compose_mask(n, compose_mask(n, G.delta[t], T), G.delta[G.inv[r]])
            if u not in E.table:
                raise InconsistencyError("D_t T D_r^-1 is not essential")
            img = image(u)
            units[(t, r)] = img == {(t, r): 1}
            ech.add(img)
    return {"n": n, "dim_L": G.order, "relations_checked": E.dimension,
            "matrix_units": sum(units.values()), "rank": ech.rank,
            "surjective": ech.rank == G.order ** 2 and all(units.values())}


def l_action_matrix(n: int, R: Relation) -> Dict[Tuple[int, int], int]:
    """Matrix of R acting on L: entry 1 at (r, s) when R D_s T = D_r T."""
    E = essential_algebra(n)
    G = symmetric_group(n)
    T = Relation.usual_order(n).mask
    col = {compose_mask(n, d, T): i for i, d in enumerate(G.delta)}
    out = {}
    if R.mask not in E.table:
        return out
    for s_mask, s in col.items():
        c = E.basis_product(None, R.mask, s_mask)
        if c is not None:
            out[(col[c], s)] = 1
    return out
