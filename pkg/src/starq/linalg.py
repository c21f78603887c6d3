"""Exact sparse linear algebra over the complex rationals.

Small dense problems would do, but commutant probes generate a few hundred
sparse unknowns, so rows are kept as dicts and elimination touches only
occupied columns.  Everything is exact: no pivot thresholds, no residuals.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .scalars import Scalar

Row = dict[Hashable, Scalar]


def row_sub_scaled(target: Row, source: Row, factor: Scalar) -> None:
    """target -= factor * source, in place, dropping exact zeros."""
    for col, val in source.items():
        cur = target.get(col)
        term = val * factor
        if cur is None:
            if not term.is_zero():
                target[col] = -term
        else:
            s = cur - term
            if s.is_zero():
                del target[col]
            else:
                target[col] = s


class SparseEliminator:
    """Incremental reduced row-echelon form over Q(i)."""

    def __init__(self):
        self.pivots: dict[Hashable, Row] = {}  # pivot column -> normalized row

    def reduce_row(self, row: Row) -> Row:
        row = dict(row)
        while True:
            hit = None
            for col in row:
                if col in self.pivots:
                    hit = col
                    break
            if hit is None:
                return row
            row_sub_scaled(row, self.pivots[hit], row[hit])

    def add_row(self, row: Row) -> bool:
        """Insert a row; returns True if it added a new pivot."""
        red = self.reduce_row(row)
        if not red:
            return False
        pivot_col = min(red, key=_col_order)
        inv = Scalar(1) / red[pivot_col]
        norm = {c: v * inv for c, v in red.items()}
        # keep existing pivot rows fully reduced against the new one
        for pc, prow in self.pivots.items():
            if pivot_col in prow:
                row_sub_scaled(prow, norm, prow[pivot_col])
        self.pivots[pivot_col] = norm
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _col_order(col: Hashable):
    return (repr(type(col)), col)


def nullspace(rows: Iterable[Row], columns: Sequence[Hashable]) -> list[dict]:
    """Basis of {x : A x = 0}; vectors as sparse dicts over `columns`."""
    elim = SparseEliminator()
    for row in rows:
        elim.add_row(row)
    pivot_cols = set(elim.pivots)
    free_cols = [c for c in columns if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec: dict = {fc: Scalar(1)}
        for pc, prow in elim.pivots.items():
            coeff = prow.get(fc)
            if coeff is not None and not coeff.is_zero():
                vec[pc] = -coeff
        basis.append(vec)
    return basis


def rank_of_vectors(vectors: Iterable[dict]) -> int:
    elim = SparseEliminator()
    rank = 0
    for v in vectors:
        if elim.add_row(v):
            rank += 1
    return rank


def in_span(vector: dict, basis: Iterable[dict]) -> bool:
    elim = SparseEliminator()
    for b in basis:
        elim.add_row(b)
    return not elim.reduce_row(vector)


def span_equal(basis_a: Sequence[dict], basis_b: Sequence[dict]) -> bool:
    return (all(in_span(v, basis_b) for v in basis_a)
            and all(in_span(v, basis_a) for v in basis_b))
