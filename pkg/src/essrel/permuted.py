"""The algebra of permuted orders and its matrix decomposition.

Keys are pairs ``(order_index, perm_index)``.  In the ``"mono"`` basis the
key (S, s) stands for S D_s; in the ``"f"`` basis the key (R, s) stands for
D_s f_R, where D_s is the graph {(s(x), x)} and f_R the idempotent of the
algebra of orders.  Products are computed in the f-basis, where

    (D_t f_S)(D_s f_R) = D_ts f_R  if S is the s-conjugate of R, else 0.

For each orbit representative R the left ideal P f_R is free as a right
module over the group algebra of the stabilizer, with basis D_c f_R for c in
the least coset representatives; left multiplication gives a matrix over
that group algebra.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import Algebra, AlgebraElement, QQ, Ring, ZZ
from .errors import DomainError, InconsistencyError, ResourceGuardError
from .linalg import SparseEchelon
from .orders import OrderLattice, build_order_lattice
from .relations import Permutation, mask_to_hex, permute_mask

MAX_STRUCTURE_N = 5


@dataclass(frozen=True)
class PBasisElement:
    order_index: int
    sigma: Permutation
    basis: str = "f"

    def __str__(self) -> str:
        if self.basis == "f":
            return f"D{self.sigma.one_line()} f[{self.order_index}]"
        return f"O[{self.order_index}] D{self.sigma.one_line()}"


class PermutedOrderAlgebra(Algebra):
    """P for n points over a given ring, with monomial and idempotent bases."""

    default_basis = "f"
    bases = ("mono", "f")

    def __init__(self, n_or_lattice, ring: Ring = ZZ):
        super().__init__(ring)
        L = n_or_lattice if isinstance(n_or_lattice, OrderLattice) else build_order_lattice(n_or_lattice)
        self.lattice = L
        self.n = L.n
        self.group = L.group
        self._conj: Dict[int, List[int]] = {}

    @property
    def dimension(self) -> int:
        return self.group.order * len(self.lattice)

    def conj(self, p: int) -> List[int]:
        """conj(p)[i] is the index of the p-conjugate of order i."""
        row = self._conj.get(p)
        if row is None:
            L = self.lattice
            images = self.group.images[p]
            row = [L.index[permute_mask(self.n, m, images)] for m in L.orders]
            self._conj[p] = row
        return row

    def one(self) -> AlgebraElement:
        return self.basis_element((self.lattice.bottom, 0), "mono")

    def key(self, order_index: int, sigma) -> Tuple[int, int]:
        if isinstance(sigma, Permutation):
            sigma = self.group.index_of(sigma)
        if not 0 <= order_index < len(self.lattice):
            raise DomainError(f"no order with index {order_index}")
        return (order_index, sigma)

    def mono(self, order_index: int, sigma=0) -> AlgebraElement:
        """The monomial S D_sigma."""
        return self.basis_element(self.key(order_index, sigma), "mono")

    def f(self, order_index: int, sigma=0) -> AlgebraElement:
        """The f-basis element D_sigma f_R."""
        return self.basis_element(self.key(order_index, sigma), "f")

    def delta(self, sigma) -> AlgebraElement:
        return self.mono(self.lattice.bottom, sigma)

    def basis_product(self, basis, a, b):
        if basis == "f":
            S, t = a
            R, s = b
            if self.conj(s)[R] != S:
                return None
            return (R, self.group.mul[t][s])
        R, s = a
        S, t = b
        j = self.lattice.join(R, self.conj(s)[S])
        if j == self.lattice.top:
            return None
        return (j, self.group.mul[s][t])

    def convert(self, a: AlgebraElement, basis: str) -> AlgebraElement:
        if a.basis == basis:
            return a
        L = self.lattice
        out: Dict[Tuple[int, int], object] = {}
        if basis == "f":
            # S D_s = sum over T containing S of D_s f_{s^-1 T}
            for (S, s), c in a.coeffs.items():
                back = self.conj(self.group.inv[s])
                for T in L.up_set(S):
                    k = (back[T], s)
                    out[k] = out.get(k, 0) + c
        elif basis == "mono":
            # D_s f_R = sum of mu(R,S) (sS) D_s
            for (R, s), c in a.coeffs.items():
                fwd = self.conj(s)
                for S, mu in L.mobius_row(R).items():
                    if mu:
                        k = (fwd[S], s)
                        out[k] = out.get(k, 0) + c * mu
        else:
            raise DomainError(f"unknown basis {basis!r}")
        return AlgebraElement(self, out, basis)

    def sort_key(self, key):
        return key

    def key_repr(self, key, basis: str) -> str:
        R, s = key
        h = mask_to_hex(self.n, self.lattice.orders[R])
        w = self.group.perm(s).one_line()
        return f"D{w}f[{h}]" if basis == "f" else f"O[{h}]D{w}"

    def basis_elements(self, basis: str = "f"):
        for R in range(len(self.lattice)):
            for s in range(self.group.order):
                yield self.basis_element((R, s), basis)

    def as_basis_element(self, key, basis: str = "f") -> PBasisElement:
        return PBasisElement(key[0], self.group.perm(key[1]), basis)

    def grade(self, a: AlgebraElement) -> Optional[int]:
        """The permutation index s when a lies in a single graded piece P_s."""
        grades = {s for (_, s) in a.coeffs}
        return grades.pop() if len(grades) == 1 else None


def p_multiply_f_basis(P: PermutedOrderAlgebra, tau, S: int, sigma, R: int
                       ) -> Optional[PBasisElement]:
    """(D_tau f_S)(D_sigma f_R) as a basis element, or None when it is zero."""
    k = P.basis_product("f", P.key(S, tau), P.key(R, sigma))
    return None if k is None else P.as_basis_element(k, "f")


def central_idempotents(P: PermutedOrderAlgebra) -> Dict[int, AlgebraElement]:
    """e_R = sum of the f's over the orbit of R, keyed by orbit representative."""
    L = P.lattice
    return {rep: P.element({(m, 0): 1 for m in members}, "f")
            for rep, members in zip(L.orbit_reps, L.orbit_members)}


class GroupAlgebra(Algebra):
    """The group algebra of a subgroup of the symmetric group; keys are perm indices."""

    def __init__(self, group, subgroup: List[int], ring: Ring = ZZ):
        super().__init__(ring)
        self.group = group
        self.subgroup = sorted(subgroup)
        self._members = frozenset(self.subgroup)

    def basis_product(self, basis, a, b):
        return self.group.mul[a][b]

    def one(self) -> AlgebraElement:
        return self.basis_element(0)

    def __contains__(self, p: int) -> bool:
        return p in self._members

    def key_repr(self, key, basis):
        return self.group.perm(key).one_line()


class GroupAlgebraMatrix:
    """A square matrix over the group algebra of a stabilizer, stored sparsely.

    ``entries[(i, j)]`` is a dict perm-index -> coefficient.
    """

    def __init__(self, subgroup: List[int], coset_reps: List[int], group, ring: Ring = ZZ,
                 entries: Optional[Dict[Tuple[int, int], Dict[int, object]]] = None):
        self.subgroup = subgroup
        self.coset_reps = coset_reps
        self.group = group
        self.ring = ring
        self.entries: Dict[Tuple[int, int], Dict[int, object]] = {}
        for ij, e in (entries or {}).items():
            e = {h: ring(c) for h, c in e.items() if ring(c)}
            if e:
                self.entries[ij] = e

    @property
    def size(self) -> int:
        return len(self.coset_reps)

    def _like(self, entries) -> "GroupAlgebraMatrix":
        return GroupAlgebraMatrix(self.subgroup, self.coset_reps, self.group, self.ring, entries)

    def add_entry(self, i: int, j: int, h: int, c) -> None:
        e = self.entries.setdefault((i, j), {})
        v = self.ring(e.get(h, 0) + c)
        if v:
            e[h] = v
        else:
            e.pop(h, None)
            if not e:
                del self.entries[(i, j)]

    def __add__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        out = self._like(self.entries)
        for (i, j), e in other.entries.items():
            for h, c in e.items():
                out.add_entry(i, j, h, c)
        return out

    def __mul__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        mul = self.group.mul
        out = self._like({})
        by_row: Dict[int, List[Tuple[int, Dict[int, object]]]] = {}
        for (k, j), e in other.entries.items():
            by_row.setdefault(k, []).append((j, e))
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                for g, ca in a.items():
                    for h, cb in b.items():
                        out.add_entry(i, j, mul[g][h], ca * cb)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraMatrix):
            return NotImplemented
        return self.coset_reps == other.coset_reps and self.entries == other.entries

    def is_zero(self) -> bool:
        return not self.entries

    def is_identity(self) -> bool:
        return self.entries == {(i, i): {0: 1} for i in range(self.size)}

    def entries_in_subgroup(self) -> bool:
        sub = set(self.subgroup)
        return all(h in sub for e in self.entries.values() for h in e)

    def to_json(self) -> dict:
        return {"size": self.size,
                "entries": [[i, j, h, str(c)] for (i, j), e in sorted(self.entries.items())
                            for h, c in sorted(e.items())]}


class StructureMap:
    """phi: P -> product over orbits of matrices over the stabilizer group algebras."""

    def __init__(self, P: PermutedOrderAlgebra):
        if P.n > MAX_STRUCTURE_N:
            raise ResourceGuardError(f"structure maps are limited to n <= {MAX_STRUCTURE_N}",
                                     limit=MAX_STRUCTURE_N)
        self.P = P
        L = P.lattice
        G = P.group
        self.reps = list(L.orbit_reps)
        self.cosets = {R: L.coset_reps(R) for R in self.reps}
        self.subgroups = {R: L.stabilizer_indices(R) for R in self.reps}
        # column of an orbit member m: the coset index whose representative carries R to m
        self.column: Dict[int, Tuple[int, int]] = {}
        for R in self.reps:
            pos = {c: i for i, c in enumerate(self.cosets[R])}
            for m in L.orbit_members[L.orbit_of[R]]:
                self.column[m] = (R, pos[L.transporter[m]])
        self._G = G

    def factor_shape(self, R: int) -> Tuple[int, int]:
        return len(self.cosets[R]), len(self.subgroups[R])

    def zero(self, R: int) -> GroupAlgebraMatrix:
        return GroupAlgebraMatrix(self.subgroups[R], self.cosets[R], self._G, self.P.ring)

    def image_of_key(self, key) -> Tuple[int, int, int, int]:
        """D_t f_S maps to a single matrix unit: (R, i, j, h) with entry h at (i, j)."""
        S, t = key
        R, j = self.column[S]
        G = self._G
        cj = self.cosets[R][j]
        tc = G.mul[t][cj]
        m = self.P.conj(tc)[R]
        _, i = self.column[m]
        h = G.mul[G.inv[self.cosets[R][i]]][tc]
        return R, i, j, h

    def vector(self, a: AlgebraElement) -> Dict[Tuple[int, int, int, int], object]:
        """phi(a) flattened to coordinates (R, i, j, h)."""
        a = a.to("f")
        out: Dict[Tuple[int, int, int, int], object] = {}
        for key, c in a.coeffs.items():
            k = self.image_of_key(key)
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c}

    def __call__(self, a: AlgebraElement) -> Dict[int, GroupAlgebraMatrix]:
        mats = {R: self.zero(R) for R in self.reps}
        for (R, i, j, h), c in self.vector(a).items():
            mats[R].add_entry(i, j, h, c)
        return mats


def structure_map(a: AlgebraElement) -> Dict[int, GroupAlgebraMatrix]:
    P = a.algebra
    phi = getattr(P, "_phi", None)
    if phi is None:
        phi = P._phi = StructureMap(P)
    return phi(a)


def structure_factors(L: OrderLattice) -> List[dict]:
    n = L.n
    G = L.group
    out = []
    for o, R in enumerate(L.orbit_reps):
        stab = len(L._rep_stab[o])
        out.append({"orbit_rep_hex": mask_to_hex(n, L.orders[R]), "order_index": R,
                    "index": G.order // stab, "stabilizer_order": stab,
                    "matrix_size": G.order // stab})
    return out


def verify_structure_iso(n: int, ring: Ring = QQ, sample: Optional[int] = None,
                         seed: int = 0) -> dict:
    """Check the decomposition of P into matrix algebras over stabilizer group algebras.

    (i) dimension count, (ii) every matrix unit with every group entry is an
    image, (iii) phi is injective (rank of the monomial images over the
    rationals), (iv) phi is multiplicative on pairs of monomials (all pairs,
    or ``sample`` random pairs).
    """
    if n > MAX_STRUCTURE_N:
        raise ResourceGuardError(f"structure verification is limited to n <= {MAX_STRUCTURE_N}",
                                 limit=MAX_STRUCTURE_N)
    P = PermutedOrderAlgebra(n, ring)
    L = P.lattice
    G = P.group
    phi = StructureMap(P)
    report = {"n": n, "orders": len(L), "factors": structure_factors(L)}
    dim = G.order * len(L)
    factor_dims = [f["matrix_size"] ** 2 * f["stabilizer_order"] for f in report["factors"]]
    report["dim_P"] = dim
    report["factor_dims"] = factor_dims
    report["rank_identity"] = sum(factor_dims) == dim
    if not report["rank_identity"]:
        raise InconsistencyError(f"factor dimensions {factor_dims} do not sum to {dim}")

    # (ii) matrix units D_tau f_R D_g D_rho^-1 with tau, rho coset reps and g in the stabilizer
    attained = set()
    for R in phi.reps:
        cos = phi.cosets[R]
        for i, tau in enumerate(cos):
            for j, rho in enumerate(cos):
                rinv = G.inv[rho]
                for g in phi.subgroups[R]:
                    sigma = G.mul[G.mul[tau][g]][rinv]
                    key = (P.conj(rho)[R], sigma)
                    img = phi.image_of_key(key)
                    if img != (R, i, j, g):
                        raise InconsistencyError(
                            f"D{G.perm(tau)} f_R D{G.perm(g)} D{G.perm(rho)}^-1 maps to {img}, "
                            f"expected {(R, i, j, g)}")
                    attained.add(img)
    report["matrix_units"] = len(attained)
    report["surjective"] = len(attained) == dim

    # (iii) injectivity: the images of all monomials S D_s have full rank
    pos = {}
    for S in range(len(L)):
        for s in range(G.order):
            pos[phi.image_of_key((S, s))] = (bin(L.orders[S]).count("1"), S, s)
    ech = SparseEchelon(QQ, key=lambda k: pos[k])
    for S in range(len(L)):
        for s in range(G.order):
            ech.add(phi.vector(P.mono(S, s)))
    report["rank"] = ech.rank
    report["injective"] = ech.rank == dim

    # (iv) multiplicativity on monomial pairs
    keys = [(S, s) for S in range(len(L)) for s in range(G.order)]
    if sample is None:
        pairs = [(a, b) for a in keys for b in keys]
    else:
        rng = random.Random(seed)
        pairs = [(rng.choice(keys), rng.choice(keys)) for _ in range(sample)]
    bad = 0
    for a, b in pairs:
        x = P.basis_element(a, "mono")
        y = P.basis_element(b, "mono")
        lhs = phi(P.multiply_in("mono", x, y))
        fa, fb = phi(x), phi(y)
        if any(lhs[R] != fa[R] * fb[R] for R in phi.reps):
            bad += 1
    report["homomorphism_pairs"] = len(pairs)
    report["homomorphism_failures"] = bad
    report["ok"] = report["surjective"] and report["injective"] and bad == 0
    return report
