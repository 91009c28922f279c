"""Exact row reduction of sparse vectors.

Vectors are dicts ``key -> coefficient`` with sortable keys.  The pivot of a
stored row is its smallest key and rows are kept in semi-echelon form: only
leading keys are eliminated, which keeps fill-in low on the nearly triangular
systems that occur here.
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List

from .algebra import QQ, Ring


class SparseEchelon:
    """Incrementally maintained echelon basis of a span."""

    def __init__(self, ring: Ring = QQ, key=None):
        if not ring.is_field:
            raise ValueError("row reduction needs a field")
        self.ring = ring
        self.key = key
        self.pivots: Dict[Hashable, Dict[Hashable, object]] = {}

    def _lead(self, keys):
        return min(keys, key=self.key) if self.key else min(keys)

    def reduce(self, v: Dict[Hashable, object]) -> Dict[Hashable, object]:
        """Return v with its leading key repeatedly eliminated.

        The result is zero exactly when v lies in the stored span; otherwise
        its leading key is not a pivot yet.
        """
        ring = self.ring
        v = {k: ring(c) for k, c in v.items() if c}
        pivots = self.pivots
        while v:
            k = self._lead(v.keys())
            row = pivots.get(k)
            if row is None:
                return v
            c = v[k]
            for kk, cc in row.items():
                nv = ring(v.get(kk, 0) - c * cc)
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
        return v

    def add(self, v: Dict[Hashable, object]) -> bool:
        """Insert v; return True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        lead = self._lead(r.keys())
        inv = self.ring.inv(r[lead])
        self.pivots[lead] = {k: self.ring(c * inv) for k, c in r.items()}
        return True

    def contains(self, v: Dict[Hashable, object]) -> bool:
        return not self.reduce(v)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> List[Dict[Hashable, object]]:
        return [self.pivots[k] for k in sorted(self.pivots, key=self.key)]


def rank(vectors: Iterable[Dict[Hashable, object]], ring: Ring = QQ, key=None) -> int:
    ech = SparseEchelon(ring, key)
    for v in vectors:
        ech.add(v)
    return ech.rank


def span_basis(vectors: Iterable[Dict[Hashable, object]], ring: Ring = QQ,
               key=None) -> List[Dict[Hashable, object]]:
    ech = SparseEchelon(ring, key)
    for v in vectors:
        ech.add(v)
    return ech.basis()
