"""Restriction from n to n-1 points: the embedding phi, extension sets, and
dimension counts for induced modules.

phi sends R D_s on n-1 points to (R + {(n,n)}) D_s' where s' extends s by
fixing n.  The extension set of an order R on n-1 points is the set of
orders on n points whose restriction to the first n-1 points is R.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .algebra import AlgebraElement, ZZ
from .errors import DomainError, InconsistencyError
from .lattice import OrderAlgebra
from .orders import OrderLattice, build_order_lattice
from .permuted import PermutedOrderAlgebra
from .relations import mask_to_hex, restrict_mask, symmetric_group, widen_mask


@dataclass(frozen=True)
class ExtensionSet:
    base_order: int
    extensions: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.extensions)


def embed_order(k: int, mask: int) -> int:
    """R on k points -> R + {(k+1, k+1)} on k+1 points."""
    n = k + 1
    return widen_mask(k, mask, n) | 1 << (k * n + k)


def embed_perm_index(k: int, p: int) -> int:
    small = symmetric_group(k)
    big = symmetric_group(k + 1)
    return big.index[small.images[p] + (k,)]


def embed_phi(a: AlgebraElement, target) -> AlgebraElement:
    """phi applied to an element of P or P_1 on n-1 points, landing in ``target`` on n points."""
    src = a.algebra
    k = src.n
    if target.n != k + 1:
        raise DomainError(f"phi goes from {k} to {k + 1} points, target has {target.n}")
    Ls, Lb = src.lattice, target.lattice
    if isinstance(src, PermutedOrderAlgebra):
        a = a.to("mono")
        out = {}
        for (R, s), c in a.coeffs.items():
            key = (Lb.index[embed_order(k, Ls.orders[R])], embed_perm_index(k, s))
            out[key] = out.get(key, 0) + c
        return target.element(out, "mono")
    if isinstance(src, OrderAlgebra):
        a = a.to("O")
        out = {}
        for R, c in a.coeffs.items():
            i = Lb.index[embed_order(k, Ls.orders[R])]
            out[i] = out.get(i, 0) + c
        return target.element(out, "O")
    raise DomainError("phi is defined on permuted-order and order algebras")


def extension_set(R: int, small: OrderLattice, big: OrderLattice) -> ExtensionSet:
    """Orders on big.n points restricting to order R of ``small``."""
    if big.n != small.n + 1:
        raise DomainError("extension sets go from n-1 to n points")
    k = small.n
    base = small.orders[R]
    ext = tuple(j for j, m in enumerate(big.orders) if restrict_mask(big.n, m, k) == base)
    return ExtensionSet(R, ext)


def verify_lemma_9_1(R: int, n_from: int, ring=ZZ) -> dict:
    """phi(f_R) against the sum of f_S over the extension set, exactly.

    Part (b) compares the two sides expanded in the order basis.  Part (a)
    checks phi(f_R) f_S = f_S for S in the extension set and 0 otherwise.
    """
    small = build_order_lattice(n_from)
    big = build_order_lattice(n_from + 1)
    A = OrderAlgebra(small, ring)
    B = OrderAlgebra(big, ring)
    ext = extension_set(R, small, big)
    lhs = embed_phi(A.idempotent(R).to("O"), B)
    rhs = B.sum((B.idempotent(S).to("O") for S in ext.extensions), "O")
    diff = (lhs - rhs).coeffs
    lhs_f = lhs.to("f")
    members = set(ext.extensions)
    part_a = []
    for S in range(len(big)):
        fS = B.idempotent(S)
        prod = B.multiply_in("f", lhs_f, fS)
        want = fS if S in members else B.zero("f")
        if prod != want:
            part_a.append(S)
    return {"n_from": n_from, "R": R, "R_hex": mask_to_hex(n_from, small.orders[R]),
            "extensions": len(ext), "part_b": not diff,
            "differing_coordinates": sorted(diff)[:10], "part_a_failures": part_a[:10],
            "ok": not diff and not part_a}


def branching_dimensions(R: int, n_from: int) -> dict:
    """Dimension counts for inducing P^(n-1) f_R (x) k, k the trivial module of stab(R).

    ``literal_left`` and ``literal_right`` are the two sides of the
    decomposition summed over every S in the extension set; they agree term by
    term.  ``induced`` is the dimension of P^(n) phi(f_R) (x) k computed
    directly as the number of orbits of stab(R) on the basis D_s f_S, and
    ``orbit_sum`` sums n!/|stab(R) & stab(S)| over one S per stab(R)-orbit
    of the extension set.
    """
    small = build_order_lattice(n_from)
    big = build_order_lattice(n_from + 1)
    n = n_from + 1
    G = big.group
    ext = extension_set(R, small, big)
    stab_R = [embed_perm_index(n_from, p) for p in small.stabilizer_indices(R)]
    stab_R_set = set(stab_R)
    rows = []
    literal_left = literal_right = 0
    for S in ext.extensions:
        stab_S = big.stabilizer_indices(S)
        inter = stab_R_set.intersection(stab_S)
        if not inter:
            raise InconsistencyError("stabilizers do not share the identity")
        left = G.order // len(inter)
        right = (G.order // len(stab_S)) * (len(stab_S) // len(inter))
        literal_left += left
        literal_right += right
        rows.append({"S": S, "S_hex": mask_to_hex(n, big.orders[S]),
                     "stab_S": len(stab_S), "intersection": len(inter),
                     "multiplicity_bound": len(stab_R) // len(inter)})
    if literal_left != literal_right:
        raise InconsistencyError(f"dimension count mismatch {literal_left} != {literal_right}")
    # stab(R) acts on the extension set by conjugation; count its orbits
    members = set(ext.extensions)
    seen = set()
    orbit_sum = 0
    orbits = 0
    for S in ext.extensions:
        if S in seen:
            continue
        orbit = {big.conjugate_index(S, h) for h in stab_R}
        if not orbit <= members:
            raise InconsistencyError("stab(R) does not preserve the extension set")
        seen |= orbit
        orbits += 1
        inter = stab_R_set.intersection(big.stabilizer_indices(S))
        orbit_sum += G.order // len(inter)
    # D_s f_S . D_h = D_{sh} f_{h^-1 S}: count orbits of stab(R) on this basis directly
    basis = {(s, S) for S in ext.extensions for s in range(G.order)}
    induced = 0
    free = True
    while basis:
        s, S = basis.pop()
        orbit = {(G.mul[s][h], big.conjugate_index(S, G.inv[h])) for h in stab_R}
        basis -= orbit
        induced += 1
        free = free and len(orbit) == len(stab_R)
    return {"n_from": n_from, "n_to": n, "R": R, "R_hex": mask_to_hex(n_from, small.orders[R]),
            "stab_R": len(stab_R), "extensions": len(ext), "extension_orbits": orbits,
            "literal_left": literal_left, "literal_right": literal_right,
            "induced": induced, "orbit_sum": orbit_sum,
            "literal_equals_induced": literal_left == induced, "free": free,
            "ok": induced == orbit_sum, "per_S": rows}


def branch_report(n_from: int, n_to: int) -> List[dict]:
    if n_to != n_from + 1:
        raise DomainError("branching goes from n-1 to n points")
    small = build_order_lattice(n_from)
    out = []
    for R in range(len(small)):
        d = branching_dimensions(R, n_from)
        d["lemma_9_1"] = verify_lemma_9_1(R, n_from)["ok"]
        out.append(d)
    return out
