import itertools
import json

import pytest
from hypothesis import given, strategies as st

import oracles
from essrel import (
    Block,
    DomainError,
    Permutation,
    Relation,
    ResourceGuardError,
    classify,
    compose,
    contained_permutations,
    cover_number,
    delta,
    enumerate_essential,
    essential_masks,
    is_essential,
    maximal_essential_check,
    min_block_cover,
    quick_filter,
    transpose,
)
from essrel.essentiality import essential_mask, essential_table, hall_violation, maximal_blocks
from essrel.relations import symmetric_group
from essrel import store

# counts from the factorization oracle (all S T through n-1 points), frozen
ESSENTIAL_COUNTS = {1: 1, 2: 6, 3: 156, 4: 16104}


def rel(n, pairs):
    return Relation.from_pairs(n, pairs)


def off_diagonal(n):
    return Relation(n, Relation.full(n).mask & ~Relation.identity(n).mask)


def brute_cover_number(n, mask):
    """Smallest k such that mask is a union of k blocks inside it, by brute force."""
    if mask == 0:
        return 0
    pts = range(1, (1 << n))
    blocks = set()
    for U in pts:
        for V in pts:
            cells = sum(V << (x * n) for x in range(n) if U >> x & 1)
            if cells & ~mask == 0:
                blocks.add(cells)
    blocks = sorted(blocks)
    for k in range(1, n + 1):
        for combo in itertools.combinations(blocks, k):
            u = 0
            for c in combo:
                u |= c
            if u == mask:
                return k
    raise AssertionError("n blocks always suffice")


@st.composite
def relations(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return Relation(n, draw(st.integers(0, (1 << (n * n)) - 1)))


# exhaustive agreement with the factorization oracle

@pytest.mark.parametrize("n", [1, 2, 3])
def test_essential_set_matches_oracle(n, inessential_oracle):
    bad = inessential_oracle(n)
    want = [m for m in range(1 << (n * n)) if m not in bad]
    assert essential_masks(n) == want
    assert len(want) == ESSENTIAL_COUNTS[n]


@pytest.mark.slow
def test_essential_set_matches_oracle_n4(inessential_oracle):
    bad = inessential_oracle(4)
    want = [m for m in range(1 << 16) if m not in bad]
    assert essential_masks(4) == want


def test_frozen_counts():
    for n, c in ESSENTIAL_COUNTS.items():
        assert len(essential_masks(n)) == c


def test_enumerate_small_cases():
    assert enumerate_essential(1) == [Relation.full(1)]
    two = enumerate_essential(2)
    assert len(two) == 6
    assert Relation.identity(2) in two
    assert rel(2, [(1, 2), (2, 1)]) in two
    assert sum(1 for R in two if len(R) == 3) == 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_verdicts_carry_valid_certificates(n):
    for m in range(1 << (n * n)):
        R = Relation(n, m)
        v = is_essential(R)
        assert v.essential == essential_mask(n, m)
        if v.essential:
            assert v.cover_number == n
            assert delta(v.witness_permutation) <= R
            assert v.cover is None
        else:
            assert v.witness_permutation is None
            assert len(v.cover) <= n - 1
            u = 0
            for b in v.cover.blocks:
                u |= b.cells(n)
            assert u == m


def test_cover_number_matches_brute_force():
    for n in (1, 2, 3):
        for m in range(1 << (n * n)):
            assert cover_number(Relation(n, m)) == brute_cover_number(n, m)


@given(relations(max_n=4))
def test_cover_number_random_n4(R):
    assert cover_number(R) == brute_cover_number(R.n, R.mask) if R.n <= 3 else cover_number(R) <= R.n
    assert is_essential(R).cover_number == cover_number(R)


# the off-diagonal family

@pytest.mark.parametrize("n", [2, 3, 4])
def test_off_diagonal_is_essential_for_small_n(n):
    assert is_essential(off_diagonal(n)).essential


def test_off_diagonal_is_inessential_at_five():
    R = off_diagonal(5)
    v = is_essential(R)
    assert not v.essential
    assert len(v.cover) <= 4
    assert min_block_cover(R, 4) is not None
    assert min_block_cover(R, 3) is None


# quick filter

@pytest.mark.parametrize("n", [1, 2, 3])
def test_quick_filter_agrees_with_solver(n):
    fired = 0
    for m in range(1 << (n * n)):
        R = Relation(n, m)
        q = quick_filter(R)
        if q is not None:
            fired += 1
            assert q.essential == (min_block_cover(R, n - 1) is None)
    assert fired > 0


def test_quick_filter_examples():
    R = rel(3, [(1, 1), (1, 3), (2, 1), (2, 3), (3, 2)])
    v = quick_filter(R)
    assert v is not None and not v.essential and len(v.cover) <= 2
    eq = Relation.identity(3) | rel(3, [(1, 2), (2, 1)])
    v = quick_filter(eq)
    assert v is not None and not v.essential
    assert v.reason == "equivalence"
    for n in range(1, 5):
        for m in range(1 << (n * n)):
            R = Relation(n, m)
            if classify(R).order:
                v = quick_filter(R)
                assert v is not None and v.essential


def test_preorder_that_is_not_an_order_is_inessential():
    pre = Relation.identity(3) | rel(3, [(1, 2), (2, 1), (1, 3), (2, 3)])
    assert classify(pre).preorder and not classify(pre).order
    assert not is_essential(pre).essential


# min_block_cover

def test_min_block_cover_examples():
    for n in range(1, 6):
        c = min_block_cover(Relation.full(n), 1)
        assert len(c) == 1
        assert c.blocks[0] == Block((1 << n) - 1, (1 << n) - 1)
    D = Relation.identity(2)
    assert min_block_cover(D, 1) is None
    c = min_block_cover(D, 2)
    assert sorted(b.sides() for b in c.blocks) == [([1], [1]), ([2], [2])]
    assert len(min_block_cover(Relation.empty(3), 0)) == 0


def test_blocks_must_be_nonempty():
    with pytest.raises(DomainError):
        Block(0, 1)


def test_maximal_blocks_are_maximal():
    for m in range(0, 512, 3):
        for b in maximal_blocks(3, m):
            cells = b.cells(3)
            assert cells & ~m == 0
            for x in range(3):
                if not b.U >> x & 1:
                    assert (b.V << (3 * x)) & ~m
            for y in range(3):
                if not b.V >> y & 1:
                    assert Block(b.U, b.V | 1 << y).cells(3) & ~m


def test_three_cycle_plus_diagonal():
    R = Relation.identity(3) | rel(3, [(1, 2), (2, 3), (3, 1)])
    v = is_essential(R)
    assert v.essential and v.cover_number == 3


# structural properties

def test_essential_relations_contain_permutations():
    for n in range(1, 5):
        for m in essential_masks(n):
            assert contained_permutations(Relation(n, m))


def test_hall_violators_are_inessential():
    for n in range(1, 5):
        table = essential_table(n)
        for m in range(1 << (n * n)):
            if hall_violation(n, m) is not None:
                assert m not in table


@pytest.mark.parametrize("n", [2, 3])
def test_hall_condition_holds_for_essentials(n):
    for m in essential_masks(n):
        P = oracles.pairs_of_mask(n, m)
        for k in range(1, n + 1):
            for A in itertools.combinations(range(1, n + 1), k):
                assert len({y for (x, y) in P if x in A}) >= k


@pytest.mark.parametrize("n", [2, 3])
def test_permutations_act_freely_on_essentials(n):
    G = list(symmetric_group(n))
    ess = set(essential_masks(n))
    for m in ess:
        R = Relation(n, m)
        for s in G:
            S = compose(delta(s), R)
            assert S.mask in ess
            if not s.is_identity():
                assert S != R
    for s in G:
        assert delta(s).mask in ess


@given(relations())
def test_transpose_preserves_essentiality(R):
    assert is_essential(R).essential == is_essential(transpose(R)).essential


@given(relations(max_n=4), st.data())
def test_left_permutation_preserves_essentiality(R, data):
    s = Permutation.from_one_line(data.draw(st.permutations(range(1, R.n + 1))))
    assert is_essential(compose(delta(s), R)).essential == is_essential(R).essential


def test_empty_relation():
    for n in range(1, 6):
        v = is_essential(Relation.empty(n))
        assert not v.essential and v.cover_number == 0


# maximality of total orders

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_usual_order_is_maximal_essential(n):
    assert maximal_essential_check(Relation.usual_order(n))


def test_maximal_check_needs_total_order():
    with pytest.raises(DomainError):
        maximal_essential_check(Relation.identity(3))


# guards and cache

def test_enumeration_guards():
    with pytest.raises(ResourceGuardError):
        essential_masks(6)
    with pytest.raises(ResourceGuardError):
        essential_masks(5)
    with pytest.raises(DomainError):
        essential_masks(0)


def test_cache_round_trip(tmp_path):
    masks = essential_masks(3, cache_dir=tmp_path)
    path = store.cache_path(tmp_path, 3)
    assert path.exists()
    header, stored = store.read_masks(path)
    assert header["n"] == 3 and header["count"] == len(masks) == 156
    assert stored == masks
    assert essential_masks(3, cache_dir=tmp_path) == masks
    assert store.load_cached(tmp_path, 2) is None
    json.dumps(header)
