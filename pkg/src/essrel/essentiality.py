"""Deciding whether a relation is essential.

A relation on n points is inessential exactly when it is a union of at most
n - 1 blocks U x V, so the decision reduces to the biclique cover number of
the relation viewed as a bipartite graph (rows vs columns).  Every relation
is covered by its n row-blocks {x} x row(x), hence the cover number never
exceeds n and a relation is essential iff its cover number equals n.

The solver enumerates the maximal blocks (any block of a cover can be grown
into a maximal one) and runs a depth-first set cover with a block budget,
branching on the uncovered cell that the fewest maximal blocks contain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import store
from .errors import DomainError, InconsistencyError, ResourceGuardError
from .relations import (
    Permutation,
    Relation,
    classify,
    closure_mask,
    cols_of,
    compose_mask,
    contained_permutation_images,
    delta_mask,
    has_permutation_mask,
    is_order_mask,
    rows_of,
    transpose_mask,
)

log = logging.getLogger(__name__)

MAX_ENUMERATE_N = 5


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _members(bits: int) -> List[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True)
class Block:
    """The block U x V; ``U`` and ``V`` are 0-based bitmasks of points."""

    U: int
    V: int

    def __post_init__(self):
        if not self.U or not self.V:
            raise DomainError("blocks must have non-empty sides")

    def cells(self, n: int) -> int:
        m = 0
        for x in _members(self.U):
            m |= self.V << (x * n)
        return m

    def sides(self) -> Tuple[List[int], List[int]]:
        """1-based member lists of U and V."""
        return [x + 1 for x in _members(self.U)], [y + 1 for y in _members(self.V)]

    def __str__(self) -> str:
        u, v = self.sides()
        return "{" + ",".join(map(str, u)) + "}x{" + ",".join(map(str, v)) + "}"


@dataclass(frozen=True)
class BlockCover:
    target: Relation
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        n = self.target.n
        union = 0
        for b in self.blocks:
            c = b.cells(n)
            if c & ~self.target.mask:
                raise InconsistencyError(f"block {b} leaves the target relation")
            union |= c
        if union != self.target.mask:
            raise InconsistencyError("blocks do not cover the target relation")

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class EssVerdict:
    relation: Relation
    essential: bool
    cover_number: int
    witness_permutation: Optional[Permutation] = None
    cover: Optional[BlockCover] = None
    reason: str = "solver"

    def __post_init__(self):
        n = self.relation.n
        if self.essential != (self.cover_number >= n):
            raise InconsistencyError("essential flag disagrees with the cover number")
        if self.essential:
            w = self.witness_permutation
            if w is None or delta_mask(w.images) & ~self.relation.mask:
                raise InconsistencyError("essential verdict without a contained permutation")
            if self.cover is not None:
                raise InconsistencyError("essential verdict carries a small cover")
        else:
            if self.witness_permutation is not None:
                raise InconsistencyError("inessential verdict carries a witness")
            if self.cover is None or len(self.cover) > n - 1:
                raise InconsistencyError("inessential verdict needs a cover of <= n-1 blocks")


# solver -------------------------------------------------------------------

def maximal_blocks(n: int, mask: int) -> List[Block]:
    """All maximal blocks contained in the relation, in a canonical order."""
    rows = rows_of(n, mask)
    full = (1 << n) - 1
    common = [0] * (1 << n)
    common[0] = full
    found = set()
    for U in range(1, 1 << n):
        low = U & -U
        common[U] = common[U ^ low] & rows[low.bit_length() - 1]
        V = common[U]
        if V:
            closed = 0
            for x in range(n):
                if rows[x] & V == V:
                    closed |= 1 << x
            found.add((closed, V))
    return [Block(U, V) for U, V in sorted(found)]


def _cover_search(target: int, block_cells: Sequence[int], budget: int) -> Optional[List[int]]:
    cell_blocks: Dict[int, List[int]] = {}
    for i, c in enumerate(block_cells):
        for b in _members(c):
            cell_blocks.setdefault(b, []).append(i)
    for lst in cell_blocks.values():
        lst.sort(key=lambda i: -_popcount(block_cells[i]))
    biggest = max((_popcount(c) for c in block_cells), default=0)

    def rec(uncovered: int, budget: int) -> Optional[List[int]]:
        if not uncovered:
            return []
        if budget == 0 or budget * biggest < _popcount(uncovered):
            return None
        best = None
        c = uncovered
        while c:
            low = c & -c
            cand = cell_blocks[low.bit_length() - 1]
            if best is None or len(cand) < len(best):
                best = cand
                if len(best) == 1:
                    break
            c ^= low
        for i in best:
            sub = rec(uncovered & ~block_cells[i], budget - 1)
            if sub is not None:
                return [i] + sub
        return None

    return rec(target, budget)


def _cover_masks(n: int, mask: int, budget: int) -> Optional[List[Block]]:
    if not mask:
        return []
    blocks = maximal_blocks(n, mask)
    cells = [b.cells(n) for b in blocks]
    picked = _cover_search(mask, cells, budget)
    if picked is None:
        return None
    return [blocks[i] for i in picked]


def min_block_cover(R: Relation, budget: int) -> Optional[BlockCover]:
    """A cover of R by at most ``budget`` blocks, or None if none exists."""
    if budget < 0:
        raise DomainError("budget must be non-negative")
    blocks = _cover_masks(R.n, R.mask, budget)
    if blocks is None:
        return None
    return BlockCover(R, tuple(blocks))


def cover_number(R: Relation) -> int:
    """The exact minimum number of blocks whose union is R."""
    for k in range(R.n):
        if _cover_masks(R.n, R.mask, k) is not None:
            return k
    return R.n


# quick criteria ------------------------------------------------------------

def _line_blocks(n: int, mask: int, skip: Sequence[int] = ()) -> List[Block]:
    return [Block(1 << x, r) for x, r in enumerate(rows_of(n, mask)) if r and x not in skip]


def _transpose_blocks(blocks: Sequence[Block]) -> List[Block]:
    return [Block(b.V, b.U) for b in blocks]


def _equal_rows_cover(n: int, mask: int, a: int, b: int) -> List[Block]:
    rows = rows_of(n, mask)
    return [Block((1 << a) | (1 << b), rows[a])] + _line_blocks(n, mask, skip=(a, b))


def _equal_pair(lines: Sequence[int]) -> Optional[Tuple[int, int]]:
    seen: Dict[int, int] = {}
    for i, r in enumerate(lines):
        if r in seen:
            return seen[r], i
        seen[r] = i
    return None


def hall_violation(n: int, mask: int) -> Optional[int]:
    """A set A of columns (bitmask) with fewer than |A| points relating into A."""
    cols = cols_of(n, mask)
    for A in range(1, 1 << n):
        reach = 0
        for a in _members(A):
            reach |= cols[a]
        if _popcount(reach) < _popcount(A):
            return A
    return None


def _hall_cover(n: int, mask: int, A: int) -> List[Block]:
    cols = cols_of(n, mask)
    rows = rows_of(n, mask)
    reach = 0
    for a in _members(A):
        reach |= cols[a]
    blocks = [Block(cols[y], 1 << y) for y in range(n) if not A >> y & 1 and cols[y]]
    blocks += [Block(1 << x, rows[x]) for x in _members(reach) if rows[x]]
    return blocks


def _inessential(R: Relation, blocks: List[Block], reason: str) -> EssVerdict:
    cover = BlockCover(R, tuple(blocks))
    k = cover_number(R) if len(blocks) else 0
    return EssVerdict(R, False, k, cover=cover, reason=reason)


def quick_filter(R: Relation) -> Optional[EssVerdict]:
    """Verdict from the cheap structural criteria, or None when none applies.

    Inessential: empty line, two equal lines, equivalence other than equality,
    preorder that is not an order, no contained permutation.  Essential:
    reflexive relation whose transitive closure is an order.  Covers come
    from the constructive proofs of those criteria.
    """
    n, m = R.n, R.mask
    if m == 0:
        return EssVerdict(R, False, 0, cover=BlockCover(R, ()), reason="empty")
    rows = rows_of(n, m)
    cols = cols_of(n, m)
    if 0 in rows:
        x = rows.index(0)
        return _inessential(R, _line_blocks(n, m, skip=(x,)), "empty-row")
    if 0 in cols:
        y = cols.index(0)
        return _inessential(R, _transpose_blocks(_line_blocks(n, transpose_mask(n, m), skip=(y,))),
                            "empty-column")
    kind = classify(R)
    pair = _equal_pair(rows)
    if pair is not None:
        reason = "equal-rows"
        if kind.equivalence:
            reason = "equivalence"
        elif kind.preorder:
            reason = "preorder-not-order"
        return _inessential(R, _equal_rows_cover(n, m, *pair), reason)
    pair = _equal_pair(cols)
    if pair is not None:
        t = transpose_mask(n, m)
        return _inessential(R, _transpose_blocks(_equal_rows_cover(n, t, *pair)), "equal-columns")
    A = hall_violation(n, m)
    if A is not None:
        return _inessential(R, _hall_cover(n, m, A), "no-permutation")
    if kind.reflexive and is_order_mask(n, closure_mask(n, m)):
        return EssVerdict(R, True, n, witness_permutation=Permutation.identity(n),
                          reason="reflexive-in-order")
    return None


@lru_cache(maxsize=1 << 16)
def _verdict(n: int, mask: int) -> EssVerdict:
    R = Relation(n, mask)
    v = quick_filter(R)
    if v is not None:
        return v
    blocks = _cover_masks(n, mask, n - 1)
    if blocks is not None:
        return EssVerdict(R, False, cover_number(R), cover=BlockCover(R, tuple(blocks)))
    witness = next(contained_permutation_images(n, mask), None)
    if witness is None:
        raise InconsistencyError(f"essential relation {R} contains no permutation")
    return EssVerdict(R, True, n, witness_permutation=Permutation(witness))


def is_essential(R: Relation) -> EssVerdict:
    """Certificate-carrying essentiality verdict (memoized)."""
    return _verdict(R.n, R.mask)


def essential_mask(n: int, m: int) -> bool:
    """Fast yes/no essentiality test on a raw mask, without certificates."""
    rows = rows_of(n, m)
    if 0 in rows or len(set(rows)) < n:
        return False
    cols = cols_of(n, m)
    if 0 in cols or len(set(cols)) < n:
        return False
    if not has_permutation_mask(n, m):
        return False
    # R = Q Delta_s with Q reflexive; R is essential iff Q is, and Q is when its closure is an order
    for images in contained_permutation_images(n, m):
        inv = [0] * n
        for x, sx in enumerate(images):
            inv[sx] = x
        q = compose_mask(n, m, delta_mask(inv))
        if is_order_mask(n, closure_mask(n, q)):
            return True
    return _cover_masks(n, m, n - 1) is None


# enumeration --------------------------------------------------------------

def _scan(args) -> List[int]:
    n, lo, hi = args
    return [m for m in range(lo, hi) if essential_mask(n, m)]


def _guard(n: int, allow_n5: bool) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n > MAX_ENUMERATE_N:
        raise ResourceGuardError(
            f"enumerating essential relations is limited to n <= {MAX_ENUMERATE_N}",
            limit=MAX_ENUMERATE_N)
    if n == 5 and not allow_n5:
        raise ResourceGuardError("n = 5 enumeration scans 2^25 relations; pass allow_n5=True",
                                 limit=4)


def essential_masks(n: int, cache_dir=None, allow_n5: bool = False,
                    workers: Optional[int] = None) -> List[int]:
    """Ascending masks of all essential relations on n points.

    With ``cache_dir`` the result is read from, or written to, the cache.
    The n = 5 scan is split into independent mask ranges, optionally spread
    over ``workers`` processes, and merged in order.
    """
    _guard(n, allow_n5)
    cached = store.load_cached(cache_dir, n)
    if cached is not None:
        return cached
    total = 1 << (n * n)
    if n <= 4:
        masks = _scan((n, 0, total))
    else:
        chunks = 64
        step = total // chunks
        ranges = [(n, i * step, total if i == chunks - 1 else (i + 1) * step)
                  for i in range(chunks)]
        if workers and workers > 1:
            from multiprocessing import Pool
            with Pool(workers) as pool:
                parts = pool.map(_scan, ranges)
        else:
            parts = []
            for i, r in enumerate(ranges):
                parts.append(_scan(r))
                log.info("n=5 scan: chunk %d/%d done", i + 1, chunks)
        masks = [m for part in parts for m in part]
    if cache_dir is not None:
        store.write_masks(store.cache_path(cache_dir, n), n, masks)
    return masks


def enumerate_essential(n: int, cache_dir=None, allow_n5: bool = False,
                        workers: Optional[int] = None) -> List[Relation]:
    return [Relation(n, m) for m in essential_masks(n, cache_dir, allow_n5, workers)]


class EssentialTable:
    """Frozen membership table of essential masks for one n."""

    def __init__(self, n: int, masks: Sequence[int]):
        self.n = n
        self.masks = list(masks)
        self.index = {m: i for i, m in enumerate(self.masks)}
        if n <= 4:
            flags = bytearray(1 << (n * n))
            for m in self.masks:
                flags[m] = 1
            self._flags = flags
        else:
            self._flags = None

    def __contains__(self, mask: int) -> bool:
        if self._flags is not None:
            return bool(self._flags[mask])
        return mask in self.index

    def __len__(self) -> int:
        return len(self.masks)


_TABLES: Dict[int, EssentialTable] = {}


def essential_table(n: int, cache_dir=None, allow_n5: bool = False) -> EssentialTable:
    """The memo table for n, built once and reused."""
    t = _TABLES.get(n)
    if t is None:
        t = EssentialTable(n, essential_masks(n, cache_dir, allow_n5))
        _TABLES[n] = t
    return t


def maximal_essential_check(R: Relation) -> bool:
    """True iff every relation strictly containing the total order R is inessential."""
    if not classify(R).total_order:
        raise DomainError("maximal_essential_check needs a total order")
    n = R.n
    for b in range(n * n):
        if not R.mask >> b & 1:
            if is_essential(Relation(n, R.mask | 1 << b)).essential:
                return False
    return True
