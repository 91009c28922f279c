"""Named invariant suites, shared by the command line and the test-suite."""

from __future__ import annotations

import random
from typing import Callable, Dict

from .algebra import QQ, ZZ, Ring
from .errors import DomainError, ResourceGuardError
from .essential_algebra import (
    essential_algebra,
    n_ideal_generators,
    nilpotency_report,
    project_element,
    project_mask,
)
from .essentiality import essential_table, hall_violation
from .lattice import OrderAlgebra
from .orders import build_order_lattice
from .permuted import PermutedOrderAlgebra, verify_structure_iso
from .relations import has_permutation_mask, symmetric_group
from .branching import branch_report


def verify_hall(n: int, cache_dir=None, allow_n5: bool = False) -> dict:
    """Every essential relation contains a permutation; every Hall violator is inessential."""
    table = essential_table(n, cache_dir=cache_dir, allow_n5=allow_n5)
    exceptions = []
    violators = 0
    for m in range(1 << (n * n)):
        ess = m in table
        if ess and not has_permutation_mask(n, m):
            exceptions.append(m)
        if hall_violation(n, m) is not None:
            violators += 1
            if ess:
                exceptions.append(m)
    return {"n": n, "relations_scanned": 1 << (n * n), "essential": len(table),
            "hall_violators": violators, "exceptions": exceptions[:10],
            "ok": not exceptions}


def verify_idempotents(n: int, ring: Ring = ZZ, sample: int = None, seed: int = 0) -> dict:
    """f_R orthogonal idempotents summing to the unit, and g_z f_x = [z <= x] f_x.

    Products are taken in the order basis (joins), independently of the
    f-basis in which the idempotents are defined.
    """
    L = build_order_lattice(n)
    A = OrderAlgebra(L, ring)
    m = len(L)
    f = [A.idempotent(i).to("O") for i in range(m)]
    pairs = [(i, j) for i in range(m) for j in range(m)]
    if sample is not None and sample < len(pairs):
        pairs = random.Random(seed).sample(pairs, sample)
    zero = A.zero("O")
    bad_orth = [(i, j) for i, j in pairs
                if A.multiply_in("O", f[i], f[j]) != (f[i] if i == j else zero)]
    bad_g = []
    for z in range(m):
        gz = A.basis_element(z, "O")
        for x in range(m):
            want = f[x] if L.leq(z, x) else zero
            if A.multiply_in("O", gz, f[x]) != want or A.multiply_in("O", f[x], gz) != want:
                bad_g.append((z, x))
    unit = A.sum(f, "O") == A.one()
    return {"n": n, "ring": ring.tag, "orders": m, "pairs_checked": len(pairs),
            "orthogonality_failures": bad_orth[:10], "g_law_failures": bad_g[:10],
            "sum_is_one": unit, "ok": unit and not bad_orth and not bad_g}


def verify_nilpotent(n: int) -> dict:
    """N^m = 0 for the ideal N, and every generator of N projects to 0 in P."""
    report = nilpotency_report(n, allow_n4=False)
    P = PermutedOrderAlgebra(n, QQ)
    gens = n_ideal_generators(n)
    nonzero = [g for g in gens if project_element(g, P)]
    report["generators_nonzero_in_P"] = len(nonzero)
    report["dim_P"] = P.dimension
    report["quotient_matches_P"] = report["dim_E"] - report["dim_N"] == P.dimension
    report["ok"] = not nonzero and report["quotient_matches_P"]
    return report


def verify_grading(n: int) -> dict:
    """Projection onto P respects the grading and multiplication of E."""
    if n > 3:
        raise ResourceGuardError("the grading suite is exhaustive and limited to n <= 3", limit=3)
    E = essential_algebra(n)
    P = PermutedOrderAlgebra(n, ZZ)
    G = symmetric_group(n)
    proj = {m: project_mask(n, m) for m in E.basis_masks}
    grading_bad = []
    product_bad = []
    for a in E.basis_masks:
        pa = proj[a]
        for b in E.basis_masks:
            pb = proj[b]
            c = E.basis_product(None, a, b)
            pc = proj[c] if c is not None else None
            if pa and pb and pc and G.index[pc[1]] != G.mul[G.index[pa[1]]][G.index[pb[1]]]:
                grading_bad.append((a, b))
            lhs = project_element(E.basis_element(c) if c is not None else E.zero(), P)
            if pa and pb:
                x = P.mono(P.lattice.index[pa[0]], G.index[pa[1]])
                y = P.mono(P.lattice.index[pb[0]], G.index[pb[1]])
                rhs = P.multiply_in("mono", x, y)
            else:
                rhs = P.zero("mono")
            if lhs != rhs:
                product_bad.append((a, b))
    return {"n": n, "pairs": len(E.basis_masks) ** 2, "grading_failures": grading_bad[:10],
            "product_failures": product_bad[:10], "ok": not grading_bad and not product_bad}


def verify_structure(n: int) -> dict:
    return verify_structure_iso(n, sample=None if n <= 3 else 2000)


def verify_branching(n: int) -> dict:
    if n < 2:
        raise DomainError("branching needs n >= 2")
    rows = branch_report(n - 1, n)
    return {"n_from": n - 1, "n_to": n, "orders": len(rows),
            "lemma_9_1_failures": [r["R"] for r in rows if not r["lemma_9_1"]],
            "dimension_failures": [r["R"] for r in rows if not r["ok"]],
            "ok": all(r["lemma_9_1"] and r["ok"] for r in rows)}


SUITES: Dict[str, Callable[..., dict]] = {
    "hall": verify_hall,
    "idempotents": verify_idempotents,
    "structure": verify_structure,
    "nilpotent": verify_nilpotent,
    "grading": verify_grading,
    "branching": verify_branching,
}
