"""Integer lattices in echelon (Hermite) form with generator bookkeeping.

Rows are reduced with extended gcd steps, as in the usual incremental
HNF construction.  Every basis row remembers the integer combination of
the original generators that produced it, so membership tests can return
an explicit certificate.
"""

from __future__ import annotations

from . import _backend


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _axpy(q: int, src: list[int], dst: list[int], start: int = 0) -> None:
    # dst -= q * src
    _backend.axpy(q, src, dst, start)


class IntegerLattice:
    """Z-span of integer vectors of length ``dim``.

    Columns are eliminated left to right, so column order is elimination
    priority.  After construction the basis is in Hermite normal form:
    positive pivots, entries above each pivot reduced into ``[0, pivot)``.
    """

    def __init__(self, dim: int, generators: list[list[int]] = ()):
        self.dim = dim
        self.ngens = 0
        self._rows: list[list[int]] = []     # basis vectors
        self._combos: list[list[int]] = []   # combination of generators per row
        self._pivot_of_col: dict[int, int] = {}
        self._cols: list[int] = []
        gens = list(generators)
        self.ngens = len(gens)
        for idx, g in enumerate(gens):
            if len(g) != dim:
                raise ValueError(f"generator {idx} has length {len(g)}, expected {dim}")
            combo = [0] * self.ngens
            combo[idx] = 1
            self._insert(list(g), combo)
        self._normalize()

    # -- construction ------------------------------------------------------
    def _insert(self, vec: list[int], combo: list[int]) -> None:
        j = 0
        while True:
            while j < self.dim and not vec[j]:
                j += 1
            if j == self.dim:
                return  # relation among generators; nothing to add
            p = self._pivot_of_col.get(j)
            if p is None:
                self._rows.append(vec)
                self._combos.append(combo)
                self._pivot_of_col[j] = len(self._rows) - 1
                return
            row, rcombo = self._rows[p], self._combos[p]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                _axpy(q, row, vec, j)
                _axpy(q, rcombo, combo)
            else:
                x, y, g = xgcd(a, b)
                ag, bg = a // g, b // g
                new_row = [x * r + y * v for r, v in zip(row, vec)]
                new_combo = [x * r + y * v for r, v in zip(rcombo, combo)]
                vec[:] = [ag * v - bg * r for r, v in zip(row, vec)]
                combo[:] = [ag * v - bg * r for r, v in zip(rcombo, combo)]
                self._rows[p] = new_row
                self._combos[p] = new_combo
            j += 1

    def _normalize(self) -> None:
        order = sorted(self._pivot_of_col)
        rows = [self._rows[self._pivot_of_col[c]] for c in order]
        combos = [self._combos[self._pivot_of_col[c]] for c in order]
        for r, c in enumerate(order):
            if rows[r][c] < 0:
                rows[r] = [-v for v in rows[r]]
                combos[r] = [-v for v in combos[r]]
            piv = rows[r][c]
            for above in range(r):
                q = rows[above][c] // piv
                if q:
                    _axpy(q, rows[r], rows[above], c)
                    _axpy(q, combos[r], combos[above])
        self._rows = rows
        self._combos = combos
        self._pivot_of_col = {c: r for r, c in enumerate(order)}
        self._cols = order

    # -- queries -------------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self._rows)

    def basis(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def pivots(self) -> dict[int, int]:
        return {c: self._rows[r][c] for c, r in self._pivot_of_col.items()}

    def reduce(self, vec: list[int]) -> tuple[list[int], list[int]]:
        """Canonical residue of ``vec`` and the combination subtracted.

        Returns ``(residue, coeffs)`` with ``vec == residue + sum(coeffs[i] * gen_i)``.
        Two vectors are congruent modulo the lattice iff their residues agree.
        """
        vec = list(vec)
        coeffs = _backend.lattice_reduce(vec, self._cols, self._pivot_of_col, self._rows,
                                         self._combos, self.ngens)
        return vec, coeffs

    def solve(self, target: list[int]) -> list[int] | None:
        """Integer coefficients expressing ``target`` over the generators, or None."""
        residue, coeffs = self.reduce(target)
        if any(residue):
            return None
        return coeffs

    def __contains__(self, vec) -> bool:
        return not any(self.reduce(vec)[0])
