import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from essrel import (
    DomainError,
    Permutation,
    PermutedOrderAlgebra,
    Relation,
    ResourceGuardError,
    build_order_lattice,
    compose,
    conjugate,
    delta,
    e_multiply,
    essential_masks,
    is_essential,
    n_ideal_generators,
    nilpotency_index,
    project_to_P,
    quotient_by_H,
    regular_representation_on_L,
)
from essrel.algebra import QQ, ZZ
from essrel.essential_algebra import (
    EssentialAlgebra,
    essential_algebra,
    l_action_matrix,
    nilpotency_report,
    project_element,
)
from essrel.relations import symmetric_group

# exact span iteration at n = 3, frozen
N3_DIMENSION = 42
N3_INDEX = 2


def rel(n, pairs):
    return Relation.from_pairs(n, pairs)


def total_orders(n):
    return [conjugate(Relation.usual_order(n), s) for s in symmetric_group(n)]


# multiplication

@pytest.mark.parametrize("n", [1, 2, 3])
def test_products_match_composition(n):
    E = essential_algebra(n)
    ess = set(essential_masks(n))
    assert E.dimension == len(ess)
    for a in E.basis_masks:
        for b in E.basis_masks:
            c = compose(Relation(n, a), Relation(n, b)).mask
            got = E.basis_product(None, a, b)
            assert got == (c if c in ess else None)


def test_identity_acts_trivially():
    E = essential_algebra(3)
    D = E.one()
    for m in E.basis_masks:
        R = E.relation(Relation(3, m))
        assert e_multiply(D, R) == R
        assert e_multiply(R, D) == R


@pytest.mark.parametrize("n", [2, 3, 4])
def test_total_orders_sandwich_permutations(n):
    E = essential_algebra(n)
    T = E.relation(Relation.usual_order(n))
    for s in symmetric_group(n):
        got = e_multiply(e_multiply(T, E.delta(s)), T)
        assert got == (T if s.is_identity() else E.zero())


@pytest.mark.parametrize("n", [2, 3])
def test_conjugate_total_orders_are_orthogonal_idempotents(n):
    E = essential_algebra(n)
    Ts = [E.relation(T) for T in total_orders(n)]
    for i, a in enumerate(Ts):
        for j, b in enumerate(Ts):
            assert e_multiply(a, b) == (a if i == j else E.zero())


def test_mismatched_algebras_raise():
    with pytest.raises(DomainError):
        e_multiply(essential_algebra(2).one(), essential_algebra(3).one())


def test_inessential_relations_are_zero():
    E = essential_algebra(2)
    assert E.relation(Relation.empty(2)) == E.zero()
    assert E.relation(Relation.full(2)) == E.zero()
    with pytest.raises(DomainError):
        E.relation(Relation.identity(3))


@given(st.sampled_from(essential_masks(3)), st.sampled_from(essential_masks(3)),
       st.sampled_from(essential_masks(3)))
def test_associativity(a, b, c):
    E = essential_algebra(3)
    x, y, z = (E.basis_element(m) for m in (a, b, c))
    assert e_multiply(e_multiply(x, y), z) == e_multiply(x, e_multiply(y, z))


@given(st.sampled_from(essential_masks(3)), st.sampled_from(essential_masks(3)))
def test_transpose_is_an_anti_automorphism(a, b):
    E = essential_algebra(3)
    x, y = E.basis_element(a), E.basis_element(b)
    assert E.transpose(e_multiply(x, y)) == e_multiply(E.transpose(y), E.transpose(x))


# the ideal H

def test_quotient_by_H():
    q1 = quotient_by_H(1)
    assert q1["H"] == [] and len(q1["quotient_basis"]) == 1
    q2 = quotient_by_H(2)
    assert len(q2["H"]) == 4 and all(len(R) == 3 for R in q2["H"])
    assert len(q2["quotient_basis"]) == 2
    q3 = quotient_by_H(3)
    G = symmetric_group(3)
    assert len(q3["H"]) == 156 - 6
    assert q3["table"] == [[G.mul[i][j] for j in range(6)] for i in range(6)]
    for R in q3["H"]:
        assert any(delta(s) < R for s in G)


# the ideal N

def test_generators_small_cases():
    assert n_ideal_generators(1) == []
    assert n_ideal_generators(2) == []
    gens = n_ideal_generators(3)
    E = essential_algebra(3, QQ)
    S = Relation.identity(3) | rel(3, [(1, 2), (2, 3)])
    want = {S.mask: 1, Relation.usual_order(3).mask: -1}
    assert any(g.coeffs == want for g in gens)
    assert len({frozenset(g.coeffs.items()) for g in gens}) == len(gens)
    assert all(g.algebra is E for g in gens)


def test_nilpotency_index_small():
    assert nilpotency_index(n_ideal_generators(1)) == 1
    assert nilpotency_index(n_ideal_generators(2)) == 1
    r = nilpotency_report(2)
    assert r["dim_N"] == 0 and r["index_m"] == 1


def test_nilpotency_n3():
    r = nilpotency_report(3)
    assert r["dim_E"] == 156
    assert r["dim_N"] == N3_DIMENSION
    assert r["index_m"] == N3_INDEX
    assert r["power_dims"][-1] == 0
    assert nilpotency_index(n_ideal_generators(3)) == N3_INDEX
    # E / N has the dimension of P
    assert r["dim_E"] - r["dim_N"] == 6 * len(build_order_lattice(3))


def test_nilpotency_guard():
    with pytest.raises(ResourceGuardError):
        nilpotency_report(4)


def test_nilpotency_needs_rationals():
    with pytest.raises(DomainError):
        nilpotency_index([essential_algebra(3, ZZ).one()])


@pytest.mark.parametrize("n", [2, 3])
def test_generators_vanish_in_P(n):
    P = PermutedOrderAlgebra(n, QQ)
    for g in n_ideal_generators(n):
        assert not project_element(g, P)


# projection onto P

def test_projection_examples():
    for n in (2, 3):
        L = build_order_lattice(n)
        for s in symmetric_group(n):
            assert project_to_P(delta(s)) == (L.bottom, s)
    # R = {(1,2),(2,1),(2,2)} = Q D_swap with Q = R D_swap^-1 = {(1,1),(2,1),(2,2)}
    L2 = build_order_lattice(2)
    R = rel(2, [(2, 1), (2, 2), (1, 2)])
    idx, s = project_to_P(R)
    assert s == Permutation.swap(2, 1, 2)
    assert L2.relation(idx) == rel(2, [(1, 1), (2, 1), (2, 2)])
    assert compose(L2.relation(idx), delta(s)) == R
    cyc = Relation.identity(3) | rel(3, [(1, 2), (2, 3), (3, 1)])
    assert is_essential(cyc).essential
    assert project_to_P(cyc) is None


@pytest.mark.parametrize("n", [2, 3])
def test_projection_is_unique_and_consistent(n):
    L = build_order_lattice(n)
    for m in essential_masks(n):
        R = Relation(n, m)
        p = project_to_P(R)
        P = oracles.pairs_of_mask(n, m)
        hits = []
        for img in oracles.all_perms(n):
            if oracles.delta(img) <= P:
                inv = tuple(sorted(range(1, n + 1), key=lambda x: img[x - 1]))
                Q = oracles.compose(P, oracles.delta(inv))
                if oracles.is_order(n, oracles.closure(Q)):
                    hits.append((oracles.closure(Q), img))
        assert len(hits) <= 1
        if p is None:
            assert not hits
        else:
            assert set(L.relation(p[0]).pairs()) == hits[0][0]
            assert p[1].one_line() == hits[0][1]


@pytest.mark.parametrize("n", [2, 3])
def test_projection_respects_grading(n):
    ess = essential_masks(n)
    proj = {m: project_to_P(Relation(n, m)) for m in ess}
    for a, b in itertools.product(ess, repeat=2):
        pa, pb = proj[a], proj[b]
        if pa is None or pb is None:
            continue
        c = compose(Relation(n, a), Relation(n, b))
        if not is_essential(c).essential:
            continue
        pc = project_to_P(c)
        if pc is not None:
            assert pc[1] == pa[1] * pb[1]


def test_inessential_relations_project_to_zero():
    assert project_to_P(Relation.empty(2)) is None
    assert project_to_P(Relation.full(3)) is None


# the simple module L

@pytest.mark.parametrize("n", [1, 2, 3])
def test_regular_representation_surjective(n):
    r = regular_representation_on_L(n)
    G = symmetric_group(n)
    assert r["dim_L"] == G.order
    assert r["rank"] == G.order ** 2
    assert r["matrix_units"] == G.order ** 2
    assert r["surjective"]


def test_action_on_L_examples():
    n = 3
    G = symmetric_group(n)
    T = Relation.usual_order(n)
    assert l_action_matrix(n, T) == {(G.index_of(Permutation.identity(n)),) * 2: 1}
    for s in G:
        M = l_action_matrix(n, delta(s))
        si = G.index_of(s)
        assert M == {(G.mul[si][t], t): 1 for t in range(G.order)}


def test_essential_algebra_guard():
    with pytest.raises(ResourceGuardError):
        EssentialAlgebra(5)
