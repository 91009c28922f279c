"""Binary relations on X = {1, ..., n} stored as row-major bitmasks.

A relation on n points is a single Python int of n*n bits: the pair (x, y)
(0-based) lives at bit ``x*n + y``.  Row x is therefore the n-bit word
``(mask >> x*n) & (2**n - 1)`` listing every y with (x, y) in R.

The public constructors and text formats use the 1-based labels 1..n; the
``mask`` and ``Permutation.images`` attributes are 0-based.

Composition follows the convention (x, z) in RS iff some y has (x, y) in R
and (y, z) in S, and a permutation s is embedded as Delta_s = {(s(x), x)},
which makes Delta_s Delta_t = Delta_(st).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import DimensionError, DomainError, RelationParseError

MAX_N = 8


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_N:
        raise DomainError(f"set size must be an integer in 1..{MAX_N}, got {n!r}")


def row_mask(n: int) -> int:
    return (1 << n) - 1


def rows_of(n: int, mask: int) -> List[int]:
    full = (1 << n) - 1
    return [(mask >> (x * n)) & full for x in range(n)]


def from_rows(n: int, rows: Sequence[int]) -> int:
    out = 0
    for x, r in enumerate(rows):
        out |= r << (x * n)
    return out


def cols_of(n: int, mask: int) -> List[int]:
    return rows_of(n, transpose_mask(n, mask))


def identity_mask(n: int) -> int:
    m = 0
    for x in range(n):
        m |= 1 << (x * n + x)
    return m


def full_mask(n: int) -> int:
    return (1 << (n * n)) - 1


def compose_mask(n: int, a: int, b: int) -> int:
    full = (1 << n) - 1
    brows = [(b >> (y * n)) & full for y in range(n)]
    out = 0
    for x in range(n):
        r = (a >> (x * n)) & full
        acc = 0
        y = 0
        while r:
            if r & 1:
                acc |= brows[y]
            r >>= 1
            y += 1
        out |= acc << (x * n)
    return out


def transpose_mask(n: int, m: int) -> int:
    out = 0
    while m:
        low = m & -m
        b = low.bit_length() - 1
        x, y = divmod(b, n)
        out |= 1 << (y * n + x)
        m ^= low
    return out


def closure_mask(n: int, m: int) -> int:
    """Smallest transitive relation containing ``m`` (Warshall on row words)."""
    rows = rows_of(n, m)
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return from_rows(n, rows)


def permute_mask(n: int, m: int, images: Sequence[int]) -> int:
    """Relabel both coordinates: (x, y) -> (s(x), s(y))."""
    out = 0
    while m:
        low = m & -m
        b = low.bit_length() - 1
        x, y = divmod(b, n)
        out |= 1 << (images[x] * n + images[y])
        m ^= low
    return out


def delta_mask(images: Sequence[int]) -> int:
    n = len(images)
    m = 0
    for x, sx in enumerate(images):
        m |= 1 << (sx * n + x)
    return m


def restrict_mask(n: int, m: int, k: int) -> int:
    """Intersection with {1..k} x {1..k}, re-encoded on k points."""
    full = (1 << k) - 1
    out = 0
    for x in range(k):
        out |= ((m >> (x * n)) & full) << (x * k)
    return out


def widen_mask(k: int, m: int, n: int) -> int:
    """Re-encode a relation on k points as a relation on n >= k points."""
    full = (1 << k) - 1
    out = 0
    for x in range(k):
        out |= ((m >> (x * k)) & full) << (x * n)
    return out


def is_reflexive_mask(n: int, m: int) -> bool:
    d = identity_mask(n)
    return m & d == d


def is_transitive_mask(n: int, m: int) -> bool:
    return compose_mask(n, m, m) | m == m


def is_antisymmetric_mask(n: int, m: int) -> bool:
    return m & transpose_mask(n, m) & ~identity_mask(n) == 0


def is_order_mask(n: int, m: int) -> bool:
    return (is_reflexive_mask(n, m) and is_antisymmetric_mask(n, m)
            and is_transitive_mask(n, m))


def contained_permutation_images(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """Yield every s (0-based images) with Delta_s contained in the relation.

    Delta_s is inside R iff s(x) lies in column x for every x, and s is
    injective.  Backtracking visits the sparsest columns first.
    """
    cols = cols_of(n, m)
    if any(c == 0 for c in cols):
        return
    order = sorted(range(n), key=lambda x: (bin(cols[x]).count("1"), x))
    images = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield tuple(images)
            return
        x = order[i]
        avail = cols[x] & ~used
        while avail:
            low = avail & -avail
            images[x] = low.bit_length() - 1
            yield from rec(i + 1, used | low)
            avail ^= low

    yield from rec(0, 0)


def has_permutation_mask(n: int, m: int) -> bool:
    """Perfect-matching test (Kuhn's augmenting paths) on the columns."""
    cols = cols_of(n, m)
    match_of_row = [-1] * n

    def augment(x: int, seen: List[bool]) -> bool:
        c = cols[x]
        while c:
            low = c & -c
            u = low.bit_length() - 1
            c ^= low
            if seen[u]:
                continue
            seen[u] = True
            if match_of_row[u] < 0 or augment(match_of_row[u], seen):
                match_of_row[u] = x
                return True
        return False

    return all(augment(x, [False] * n) for x in range(n))


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}; ``images`` holds the 0-based images."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise DomainError(f"not a bijection: {self.images!r}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_line(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-based one-line notation, e.g. ``[2, 1, 3]``."""
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "Permutation":
        """The transposition exchanging the 1-based points i and j."""
        im = list(range(n))
        im[i - 1], im[j - 1] = im[j - 1], im[i - 1]
        return cls(tuple(im))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        """Image of the 1-based point x."""
        return self.images[x - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (st)(x) = s(t(x))
        if self.n != other.n:
            raise DimensionError("permutations on different sets")
        return Permutation(tuple(self.images[t] for t in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, sx in enumerate(self.images):
            inv[sx] = x
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == sx for x, sx in enumerate(self.images))

    def one_line(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in self.images)

    def __str__(self) -> str:
        return "[" + " ".join(str(i) for i in self.one_line()) + "]"

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def delta(self) -> "Relation":
        """The relation Delta_s = {(s(x), x)}."""
        return Relation(self.n, delta_mask(self.images))


def delta(sigma: Permutation) -> "Relation":
    return sigma.delta()


class SymmetricGroup:
    """All permutations of n points, indexed in lexicographic order."""

    def __init__(self, n: int):
        _check_n(n)
        self.n = n
        self.images: List[Tuple[int, ...]] = list(itertools.permutations(range(n)))
        self.index = {p: i for i, p in enumerate(self.images)}
        self.identity = 0
        self.order = len(self.images)
        self.inv = [self.index[Permutation(p).inverse().images] for p in self.images]
        self.delta = [delta_mask(p) for p in self.images]
        self._mul: Optional[List[List[int]]] = None

    @property
    def mul(self) -> List[List[int]]:
        """mul[i][j] is the index of p_i p_j."""
        if self._mul is None:
            idx = self.index
            ims = self.images
            self._mul = [[idx[tuple(a[t] for t in b)] for b in ims] for a in ims]
        return self._mul

    def perm(self, i: int) -> Permutation:
        return Permutation(self.images[i])

    def index_of(self, sigma: Permutation) -> int:
        return self.index[sigma.images]

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[Permutation]:
        return (Permutation(p) for p in self.images)


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)


@dataclass(frozen=True)
class RelationClass:
    reflexive: bool
    transitive: bool
    antisymmetric: bool
    preorder: bool
    order: bool
    equivalence: bool
    total_order: bool


class Relation:
    """An immutable relation on {1..n}."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: int = 0):
        _check_n(n)
        if mask < 0 or mask >> (n * n):
            raise DomainError(f"mask {mask:#x} does not fit a relation on {n} points")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("Relation is immutable")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "Relation":
        """Build from 1-based pairs (x, y)."""
        m = 0
        for x, y in pairs:
            if not (1 <= x <= n and 1 <= y <= n):
                raise DomainError(f"pair {(x, y)} outside 1..{n}")
            m |= 1 << ((x - 1) * n + (y - 1))
        return cls(n, m)

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int]) -> "Relation":
        return cls(n, from_rows(n, rows))

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(n, identity_mask(n))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(n, full_mask(n))

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(n, 0)

    @classmethod
    def usual_order(cls, n: int) -> "Relation":
        """The total order x <= y on {1..n}."""
        return cls.from_pairs(n, [(x, y) for x in range(1, n + 1) for y in range(x, n + 1)])

    def pairs(self) -> List[Tuple[int, int]]:
        """Sorted 1-based pairs."""
        n = self.n
        return [(b // n + 1, b % n + 1) for b in range(n * n) if self.mask >> b & 1]

    @property
    def rows(self) -> List[int]:
        return rows_of(self.n, self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, pair: Tuple[int, int]) -> bool:
        x, y = pair
        return bool(self.mask >> ((x - 1) * self.n + (y - 1)) & 1)

    def _same(self, other: "Relation") -> None:
        if not isinstance(other, Relation):
            raise TypeError(f"expected Relation, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"relations on {self.n} and {other.n} points")

    def __eq__(self, other) -> bool:
        return isinstance(other, Relation) and self.n == other.n and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __le__(self, other: "Relation") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Relation") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "Relation") -> bool:
        return other <= self

    def __gt__(self, other: "Relation") -> bool:
        return other < self

    def __or__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, self.mask | other.mask)

    def __and__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, self.mask & other.mask)

    def __sub__(self, other: "Relation") -> "Relation":
        self._same(other)
        return Relation(self.n, self.mask & ~other.mask)

    def __mul__(self, other: "Relation") -> "Relation":
        return compose(self, other)

    def transpose(self) -> "Relation":
        return transpose(self)

    def closure(self) -> "Relation":
        return transitive_closure(self)

    def conjugate(self, sigma: Permutation) -> "Relation":
        return conjugate(self, sigma)

    def restrict(self, k: int) -> "Relation":
        """Intersection with {1..k} x {1..k}, viewed on k points."""
        if not 0 <= k <= self.n:
            raise DomainError(f"cannot restrict {self.n} points to {k}")
        return Relation(k, restrict_mask(self.n, self.mask, k))

    def grid(self) -> str:
        n = self.n
        return "\n".join(
            "".join("1" if self.mask >> (x * n + y) & 1 else "0" for y in range(n))
            for x in range(n))

    def hex(self) -> str:
        return mask_to_hex(self.n, self.mask)

    def __repr__(self) -> str:
        return f"Relation({self.n}, {self.pairs()})"


def compose(R: Relation, S: Relation) -> Relation:
    """The composite RS = {(x, z) : (x, y) in R and (y, z) in S for some y}."""
    R._same(S)
    return Relation(R.n, compose_mask(R.n, R.mask, S.mask))


def transpose(R: Relation) -> Relation:
    return Relation(R.n, transpose_mask(R.n, R.mask))


def transitive_closure(R: Relation) -> Relation:
    """Smallest transitive relation containing R.

    For reflexive R this is the stable value of R, R^2, R^3, ...
    """
    return Relation(R.n, closure_mask(R.n, R.mask))


def conjugate(R: Relation, sigma: Permutation) -> Relation:
    """The conjugate Delta_s R Delta_(s^-1) = {(s(x), s(y)) : (x, y) in R}."""
    if sigma.n != R.n:
        raise DimensionError("permutation and relation on different sets")
    return Relation(R.n, permute_mask(R.n, R.mask, sigma.images))


def contained_permutations(R: Relation) -> List[Permutation]:
    """All s with Delta_s contained in R, in lexicographic order."""
    return sorted(Permutation(p) for p in contained_permutation_images(R.n, R.mask))


def classify(R: Relation) -> RelationClass:
    n, m = R.n, R.mask
    refl = is_reflexive_mask(n, m)
    trans = is_transitive_mask(n, m)
    anti = is_antisymmetric_mask(n, m)
    symmetric = m == transpose_mask(n, m)
    order = refl and trans and anti
    total = order and (m | transpose_mask(n, m)) == full_mask(n)
    return RelationClass(
        reflexive=refl,
        transitive=trans,
        antisymmetric=anti,
        preorder=refl and trans,
        order=order,
        equivalence=refl and trans and symmetric,
        total_order=total,
    )


# text formats ---------------------------------------------------------------

def mask_to_hex(n: int, mask: int) -> str:
    """Hex digits of the row-major 0/1 grid read as a binary numeral.

    The cell (1, 1) is the most significant of the n*n bits; the numeral is
    left-padded to ceil(n*n/4) digits.
    """
    nn = n * n
    value = 0
    for b in range(nn):
        if mask >> b & 1:
            value |= 1 << (nn - 1 - b)
    width = max(1, -(-nn // 4))
    return format(value, f"0{width}x")


def hex_to_mask(n: int, text: str) -> int:
    nn = n * n
    value = int(text, 16)
    if value >> nn:
        raise DomainError(f"hex value {text} has bits beyond {nn} cells")
    mask = 0
    for b in range(nn):
        if value >> (nn - 1 - b) & 1:
            mask |= 1 << b
    return mask


_HEX = set("0123456789abcdefABCDEF")


def parse_relation(text: str, n: Optional[int] = None) -> Relation:
    """Parse a 0/1 grid (one row per line) or a single hex string.

    Blank lines and lines starting with '#' are skipped.  A hex string needs
    ``n`` unless its length determines n uniquely.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        lines.append((lineno, s))
    if not lines:
        raise RelationParseError("empty input")

    if len(lines) == 1:
        lineno, s = lines[0]
        if not (len(s) == 1 and s in "01" and n in (None, 1)):
            body = s[2:] if s.lower().startswith("0x") else s
            for col, c in enumerate(body, start=len(s) - len(body) + 1):
                if c not in _HEX:
                    raise RelationParseError(f"unexpected character {c!r}", line=lineno,
                                             column=col)
            return _parse_hex(body, n, lineno)

    size = len(lines)
    if n is not None and n != size:
        raise RelationParseError(f"expected {n} rows, found {size}", line=lines[-1][0])
    if size > MAX_N:
        raise RelationParseError(f"at most {MAX_N} rows are supported, found {size}",
                                 line=lines[MAX_N][0])
    rows = []
    for lineno, s in lines:
        for col, c in enumerate(s, start=1):
            if c not in "01":
                raise RelationParseError(f"unexpected character {c!r}", line=lineno, column=col)
        if len(s) != size:
            raise RelationParseError(
                f"row has {len(s)} entries, expected {size} (input must be square)",
                line=lineno, column=min(len(s), size) + 1)
        r = 0
        for y, c in enumerate(s):
            if c == "1":
                r |= 1 << y
        rows.append(r)
    return Relation.from_rows(size, rows)


def _parse_hex(body: str, n: Optional[int], lineno: int) -> Relation:
    if n is None:
        candidates = [k for k in range(1, MAX_N + 1) if -(-k * k // 4) == len(body)]
        if len(candidates) != 1:
            raise RelationParseError(
                f"hex string of {len(body)} digits is ambiguous; pass n explicitly",
                line=lineno)
        n = candidates[0]
    if -(-n * n // 4) != len(body):
        raise RelationParseError(
            f"hex string for n={n} needs {-(-n * n // 4)} digits, got {len(body)}", line=lineno)
    try:
        return Relation(n, hex_to_mask(n, body))
    except DomainError as exc:
        raise RelationParseError(str(exc), line=lineno) from None


def format_relation(R: Relation) -> str:
    return R.grid() + "\n"
