import json

import pytest
from hypothesis import given, strategies as st

import oracles
from essrel import (
    DomainError,
    Permutation,
    Relation,
    ResourceGuardError,
    build_order_lattice,
    classify,
    conjugate,
    is_essential,
    mobius_value,
    order_join,
    stabilizer,
    transitive_closure,
)
from essrel.orders import dump_json, enumerate_orders

# labelled posets and their S_n-orbits (unlabelled posets), from the brute-force oracle at n <= 4
ORDER_COUNTS = {1: 1, 2: 3, 3: 19, 4: 219, 5: 4231, 6: 130023}
ORBIT_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63, 6: 318}


def rel(n, pairs):
    return Relation.from_pairs(n, pairs)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_orders_match_brute_force(n):
    want = sorted(oracles.mask_of_pairs(n, R) for R in oracles.orders(n))
    assert list(enumerate_orders(n)) == want
    assert len(want) == ORDER_COUNTS[n]


@pytest.mark.parametrize("n", [5, 6])
def test_larger_order_counts(n):
    orders = enumerate_orders(n)
    assert len(orders) == ORDER_COUNTS[n]
    assert list(orders) == sorted(set(orders))
    if n == 5:
        assert all(classify(Relation(n, m)).order for m in orders)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_orbit_counts(n):
    L = build_order_lattice(n)
    assert len(L.orbit_reps) == ORBIT_COUNTS[n]
    G = L.group.order
    assert sum(G // len(L.stabilizer_indices(r)) for r in L.orbit_reps) == len(L)
    assert sorted(i for mem in L.orbit_members for i in mem) == list(range(len(L)))


@pytest.mark.slow
def test_orbit_count_n6():
    assert len(build_order_lattice(6).orbit_reps) == ORBIT_COUNTS[6]


def test_lattice_guard():
    with pytest.raises(ResourceGuardError):
        build_order_lattice(7)


def test_small_lattices():
    L1 = build_order_lattice(1)
    assert L1.relations == [Relation.identity(1)]
    L2 = build_order_lattice(2)
    assert set(L2.relations) == {Relation.identity(2), Relation.usual_order(2),
                                 rel(2, [(1, 1), (2, 1), (2, 2)])}


def test_n3_orbits_and_stabilizers():
    L = build_order_lattice(3)
    D = Relation.identity(3)
    chain = Relation.usual_order(3)
    V = D | rel(3, [(1, 2), (1, 3)])
    Lam = D | rel(3, [(1, 3), (2, 3)])
    single = D | rel(3, [(1, 2)])
    reps = {L.orbit_of[L.index_of(R)]: R for R in (D, chain, V, Lam, single)}
    assert len(reps) == 5
    want = {D: 6, chain: 1, V: 2, Lam: 2, single: 1}
    for R, size in want.items():
        assert len(stabilizer(L, L.index_of(R))) == size
    assert stabilizer(L, L.index_of(V)) == [Permutation.identity(3), Permutation.swap(3, 2, 3)]
    for r in L.orbit_reps:
        assert L.orders[r] == min(L.orders[i] for i in L.orbit_members[L.orbit_of[r]])


def test_stabilizer_examples():
    for n in (2, 3, 4):
        L = build_order_lattice(n)
        assert len(stabilizer(L, L.bottom)) == L.group.order
        T = L.index_of(Relation.usual_order(n))
        assert stabilizer(L, T) == [Permutation.identity(n)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_stabilizers_are_subgroups_and_equivariant(n):
    L = build_order_lattice(n)
    G = L.group
    for i in range(len(L)):
        st_i = L.stabilizer_indices(i)
        want = [p for p in range(G.order) if L.conjugate_index(i, p) == i]
        assert st_i == want
        S = set(st_i)
        assert all(G.mul[a][b] in S for a in S for b in S)
        assert all(G.inv[a] in S for a in S)
    for i in range(len(L)):
        for s in range(G.order):
            j = L.conjugate_index(i, s)
            conj = sorted(G.mul[G.mul[s][h]][G.inv[s]] for h in L.stabilizer_indices(i))
            assert L.stabilizer_indices(j) == conj


def test_join_examples():
    L = build_order_lattice(2)
    T1 = L.index_of(Relation.usual_order(2))
    T2 = L.index_of(rel(2, [(1, 1), (2, 1), (2, 2)]))
    assert order_join(L, T1, T2) == L.top
    L3 = build_order_lattice(3)
    D = Relation.identity(3)
    a = L3.index_of(D | rel(3, [(1, 2)]))
    b = L3.index_of(D | rel(3, [(2, 3)]))
    assert L3.relation(order_join(L3, a, b)) == Relation.usual_order(3)
    for i in range(len(L3)):
        assert order_join(L3, L3.bottom, i) == i
        assert order_join(L3, i, i) == i


@pytest.mark.parametrize("n", [2, 3, 4])
def test_join_table_matches_closure(n):
    L = build_order_lattice(n)
    table = L.join_table if n <= 3 else None
    for i in range(len(L)):
        for j in range(len(L)):
            k = L.join(i, j)
            assert k == L.join(j, i)
            if table is not None:
                assert table[i][j] == k
            c = transitive_closure(L.relation(i) | L.relation(j))
            if classify(c).order:
                assert L.relation(k) == c
                upper = [u for u in range(len(L)) if L.leq(i, u) and L.leq(j, u)]
                assert all(L.leq(k, u) for u in upper)
            else:
                assert k == L.top
                assert not any(L.leq(i, u) and L.leq(j, u) for u in range(len(L)))
            assert L.relation(L.meet(i, j)) == L.relation(i) & L.relation(j)


@pytest.mark.parametrize("n", [2, 3])
def test_mobius_inverts_zeta(n):
    L = build_order_lattice(n)
    idx = list(range(len(L)))
    mu = oracles.zeta_mobius(idx, L.leq)
    for i in idx:
        for j in idx:
            if L.leq(i, j):
                assert mobius_value(L, i, j) == mu[i, j]
            else:
                assert mu[i, j] == 0
                with pytest.raises(DomainError):
                    mobius_value(L, i, j)


def test_mobius_examples():
    L = build_order_lattice(2)
    T = L.index_of(Relation.usual_order(2))
    assert mobius_value(L, L.bottom, T) == -1
    L3 = build_order_lattice(3)
    chain = L3.index_of(Relation.usual_order(3))
    # interval: bottom, 3 atoms, 2 orders of size 5, the chain; oracle value 0
    assert mobius_value(L3, L3.bottom, chain) == 0
    for i in range(len(L3)):
        assert mobius_value(L3, i, i) == 1


@given(st.integers(0, 218), st.integers(0, 218))
def test_mobius_sums_vanish_n4(i, j):
    L = build_order_lattice(4)
    if not L.leq(i, j) or i == j:
        return
    assert sum(L.mobius(i, y) for y in L.up_set(i) if L.leq(y, j)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_order_is_essential(n):
    for R in build_order_lattice(n).relations:
        assert is_essential(R).essential


def test_covering_relation():
    L = build_order_lattice(3)
    cov = L.containment
    for i, ups in cov.items():
        for j in ups:
            assert len(L.relation(j)) == len(L.relation(i)) + 1 or not any(
                L.leq(i, k) and L.leq(k, j) and k not in (i, j) for k in range(len(L)))


@given(st.integers(0, 18), st.permutations([1, 2, 3]))
def test_conjugate_index_matches_relation_conjugation(i, images):
    L = build_order_lattice(3)
    s = Permutation.from_one_line(images)
    p = L.group.index_of(s)
    assert L.relation(L.conjugate_index(i, p)) == conjugate(L.relation(i), s)


def test_json_dump():
    L = build_order_lattice(2)
    doc = json.loads(dump_json(L))
    assert doc["n"] == 2
    assert len(doc["orders"]) == 3
    assert [1, 1, 1] in doc["mobius"]
    assert sum(len(o["members"]) for o in doc["orbits"]) == 3
    assert dump_json(L) == dump_json(build_order_lattice(2))
