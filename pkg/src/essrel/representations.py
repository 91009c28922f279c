"""Simple modules of P, the action of relations on the ideals P f_R, and
semisimplicity checks.

Simple P-modules correspond to pairs (orbit of an order R, simple module V
of the stabilizer group), with dimension |S_n : stab(R)| * dim V.  Group
simple dimensions (over a splitting field of characteristic 0) come from
Burnside's method: the class-sum multiplication matrices have common
eigenvectors whose entries are central characters, and each central
character determines its degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algebra import Ring
from .errors import InconsistencyError, ResourceGuardError
from .lattice import OrderAlgebra
from .orders import OrderLattice, build_order_lattice
from .permuted import MAX_STRUCTURE_N, PermutedOrderAlgebra, StructureMap, central_idempotents
from .relations import (
    Permutation,
    Relation,
    compose_mask,
    contained_permutation_images,
    delta_mask,
    mask_to_hex,
)


# conjugacy classes and character degrees of permutation groups

def conjugacy_classes(group, members: List[int]) -> List[List[int]]:
    """Conjugacy classes of the subgroup given by its perm indices, sorted."""
    mul, inv = group.mul, group.inv
    seen = set()
    classes = []
    for g in sorted(members):
        if g in seen:
            continue
        cls = sorted({mul[mul[h][g]][inv[h]] for h in members})
        seen.update(cls)
        classes.append(cls)
    return classes


def character_degrees(group, members: List[int], seed: int = 0) -> Optional[List[int]]:
    """Degrees of the complex irreducible characters, ascending, or None if undetermined."""
    members = sorted(members)
    order = len(members)
    classes = conjugacy_classes(group, members)
    k = len(classes)
    if k == order:
        return [1] * order
    cls_of = {}
    for i, c in enumerate(classes):
        for g in c:
            cls_of[g] = i
    mul, inv = group.mul, group.inv
    # C[j][r][s] = #{(x, y) : x in K_j, y in K_r, xy = z_s}
    C = np.zeros((k, k, k))
    for s, cs in enumerate(classes):
        z = cs[0]
        for x in members:
            y = mul[inv[x]][z]
            C[cls_of[x], cls_of[y], s] += 1
    rng = random.Random(seed)
    weights = [rng.random() for _ in range(k)]
    A = sum(w * C[j] for j, w in enumerate(weights))
    # central characters satisfy omega_j omega_r = sum_s C[j][r][s] omega_s: common right eigenvectors
    vals, vecs = np.linalg.eig(A)
    if len(set(np.round(vals, 8))) != k:
        return None
    sizes = np.array([len(c) for c in classes], dtype=float)
    identity_class = cls_of[group.identity]
    degrees = []
    for i in range(k):
        w = vecs[:, i]
        w = w / w[identity_class]
        d2 = order / float(np.sum(np.abs(w) ** 2 / sizes))
        d = int(round(d2 ** 0.5))
        if abs(d * d - d2) > 1e-6:
            return None
        degrees.append(d)
    degrees.sort()
    if sum(d * d for d in degrees) != order or any(order % d for d in degrees):
        return None
    return degrees


@dataclass
class SimpleParam:
    orbit_rep: int
    stabilizer: List[Permutation]
    index: int
    group_simples: List[Tuple[str, int]] = field(default_factory=list)
    classes: int = 0

    @property
    def stabilizer_order(self) -> int:
        return len(self.stabilizer)

    @property
    def dims(self) -> List[int]:
        return [self.index * d for _, d in self.group_simples]


def simple_module_table(n: int) -> List[SimpleParam]:
    """One row per order orbit, with the simple module dimensions over a splitting field."""
    if n > MAX_STRUCTURE_N:
        raise ResourceGuardError(f"simple module tables are limited to n <= {MAX_STRUCTURE_N}",
                                 limit=MAX_STRUCTURE_N)
    L = build_order_lattice(n)
    G = L.group
    rows = []
    cache: Dict[Tuple[int, ...], Optional[List[int]]] = {}
    for R in L.orbit_reps:
        stab = L.stabilizer_indices(R)
        key = tuple(stab)
        if key not in cache:
            cache[key] = character_degrees(G, stab)
        degrees = cache[key]
        simples = [] if degrees is None else [(f"V{i}", d) for i, d in enumerate(degrees)]
        rows.append(SimpleParam(R, [G.perm(p) for p in stab], G.order // len(stab), simples,
                                len(conjugacy_classes(G, stab))))
    return rows


def simples_json(n: int) -> List[dict]:
    L = build_order_lattice(n)
    out = []
    for row in simple_module_table(n):
        out.append({"orbit_rep_hex": mask_to_hex(n, L.orders[row.orbit_rep]),
                    "index": row.index, "stabilizer_order": row.stabilizer_order,
                    "classes": row.classes,
                    "dims": row.dims if row.group_simples else None})
    return out


# the action of a relation on P f_R

def act_on_ideal(Q: Relation, sigma: Permutation, R: int) -> Optional[Permutation]:
    """Q (D_sigma f_R) = D_{t sigma} f_R when some D_t lies in Q with
    D_{t^-1} Q inside the sigma-conjugate of R; otherwise zero (None)."""
    n = Q.n
    L = build_order_lattice(n)
    target = L.orders[L.conjugate_index(R, L.group.index_of(sigma))]
    found = None
    for images in contained_permutation_images(n, Q.mask):
        t = Permutation(images)
        rest = compose_mask(n, delta_mask(t.inverse().images), Q.mask)
        if rest & ~target == 0:
            if found is not None:
                raise InconsistencyError(f"{Q} acts on D_sigma f_R through two permutations")
            found = t
    return None if found is None else found * sigma


def action_block(Q: Relation, R: int, phi: StructureMap):
    """The matrix of Q on P f_R in the coset basis, built from act_on_ideal."""
    G = phi.P.group
    M = phi.zero(R)
    for j, c in enumerate(phi.cosets[R]):
        r = act_on_ideal(Q, G.perm(c), R)
        if r is None:
            continue
        rc = G.index_of(r)
        m = phi.P.conj(rc)[R]
        R2, i = phi.column[m]
        h = G.mul[G.inv[phi.cosets[R][i]]][rc]
        M.add_entry(i, j, h, 1)
    return M


# semisimplicity

def semisimplicity_check(n: int, primes=None, sample: int = 400, seed: int = 0) -> dict:
    """Sum of squared simple dimensions against dim P, plus idempotent identities mod p."""
    if n > 4:
        raise ResourceGuardError("semisimplicity checks are limited to n <= 4", limit=4)
    L = build_order_lattice(n)
    G = L.group
    table = simple_module_table(n)
    dim_p = G.order * len(L)
    squares = sum(d * d for row in table for d in row.dims)
    report = {"n": n, "dim_P": dim_p, "sum_of_squares": squares,
              "dimensions_complete": all(row.group_simples for row in table)}
    report["semisimple_count"] = squares == dim_p
    if primes is None:
        primes = [p for p in (2, 3) if p <= max(n, 2)]
    modp = {}
    for p in primes:
        modp[str(p)] = _idempotents_mod_p(L, Ring("modp", p), sample, seed)
    report["mod_p"] = modp
    report["ok"] = report["semisimple_count"] and all(v["ok"] for v in modp.values())
    return report


def _idempotents_mod_p(L: OrderLattice, ring: Ring, sample: int, seed: int) -> dict:
    A = OrderAlgebra(L, ring)
    m = len(L)
    f = [A.idempotent(i).to("O") for i in range(m)]
    pairs = [(i, j) for i in range(m) for j in range(m)]
    if len(pairs) > sample:
        pairs = random.Random(seed).sample(pairs, sample)
    bad = []
    for i, j in pairs:
        prod = A.multiply_in("O", f[i], f[j])
        want = f[i] if i == j else A.zero("O")
        if prod != want:
            bad.append([i, j])
    total = A.sum(f, "O")
    unit_ok = total == A.one()
    P = PermutedOrderAlgebra(L, ring)
    e = central_idempotents(P)
    e_sum = P.sum(e.values(), "f").to("mono") == P.one()
    return {"pairs_checked": len(pairs), "failures": bad[:5], "sum_is_one": unit_ok,
            "central_sum_is_one": e_sum, "ok": not bad and unit_ok and e_sum}
