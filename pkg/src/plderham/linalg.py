"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``{index: mpq}`` with zero entries omitted; a matrix is a
list of row vectors plus a column count.  Elimination always pivots on the
leftmost available column, so pivot columns are exactly the columns that are
not combinations of the columns to their left.  This makes every
"free variables set to zero" solution independent of how many extra
columns are appended on the right.
"""

from __future__ import annotations

from gmpy2 import mpq

Q = mpq
Vec = dict


def q(x) -> mpq:
    """Coerce ints, Fractions, strings like ``"3/4"`` and mpq to mpq."""
    if isinstance(x, str):
        return mpq(x)
    if hasattr(x, "numerator") and not isinstance(x, int):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def axpy(y: Vec, a, x: Vec) -> None:
    """``y += a * x`` in place."""
    for k, v in x.items():
        w = y.get(k)
        if w is None:
            y[k] = a * v
        else:
            w = w + a * v
            if w:
                y[k] = w
            else:
                del y[k]


def scaled(a, x: Vec) -> Vec:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def add(x: Vec, y: Vec) -> Vec:
    out = dict(x)
    axpy(out, 1, y)
    return out


def dot(x: Vec, y: Vec):
    if len(x) > len(y):
        x, y = y, x
    return sum((v * y[k] for k, v in x.items() if k in y), mpq(0))


def transpose(rows: list[Vec], ncols: int) -> list[Vec]:
    cols = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols[j][i] = v
    return cols


def matmul(A: list[Vec], B: list[Vec]) -> list[Vec]:
    """Row-major product ``A @ B``."""
    out = []
    for r in A:
        acc: Vec = {}
        for k, v in r.items():
            axpy(acc, v, B[k])
        out.append(acc)
    return out


def apply(A: list[Vec], x: Vec) -> Vec:
    """``A @ x`` for row-major ``A``."""
    out = {}
    for i, r in enumerate(A):
        s = dot(r, x)
        if s:
            out[i] = s
    return out


def apply_cols(cols: list[Vec], x: Vec) -> Vec:
    """``A @ x`` for ``A`` given by its columns."""
    out: Vec = {}
    for j, v in x.items():
        axpy(out, v, cols[j])
    return out


class Echelon:
    """Incremental row echelon form with leftmost pivots.

    Each stored row has leading entry 1 at its pivot column.  When
    ``track`` is set every row also carries its expression as a combination
    of the inserted rows, which turns the echelon form into a solver.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, Vec] = {}
        self.combos: dict[int, Vec] = {}
        self.dependencies: list[Vec] = []
        self.track = track
        self._count = 0
        self._reduced = True

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, v: Vec, combo: Vec | None = None) -> Vec:
        v = dict(v)
        rows = self.rows
        while True:
            hits = [c for c in v if c in rows]
            if not hits:
                return v
            c = min(hits)
            a = v[c]
            axpy(v, -a, rows[c])
            if combo is not None:
                axpy(combo, -a, self.combos[c])

    def add(self, v: Vec) -> bool:
        """Insert a row; return whether it increased the rank."""
        idx = self._count
        self._count += 1
        combo = {idx: mpq(1)} if self.track else None
        v = self.reduce(v, combo)
        if not v:
            if self.track:
                self.dependencies.append(combo)
            return False
        c = min(v)
        inv = 1 / v[c]
        v = scaled(inv, v)
        self.rows[c] = v
        if self.track:
            self.combos[c] = scaled(inv, combo)
        self._reduced = False
        return True

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def full_reduce(self) -> None:
        """Clear entries above pivots (reduced row echelon form)."""
        if self._reduced:
            return
        piv = sorted(self.rows, reverse=True)
        done = set()
        for c in piv:
            r = self.rows[c]
            for c2 in [k for k in r if k in done]:
                a = r[c2]
                axpy(r, -a, self.rows[c2])
                if self.track:
                    axpy(self.combos[c], -a, self.combos[c2])
            done.add(c)
        self._reduced = True


def echelon(rows: list[Vec], track: bool = False) -> Echelon:
    E = Echelon(track=track)
    for r in rows:
        E.add(r)
    return E


def rank(rows: list[Vec]) -> int:
    return echelon(rows).rank


def nullspace(rows: list[Vec], ncols: int) -> tuple[list[Vec], list[int]]:
    """Basis of ``{x : A x = 0}`` and the free columns.

    Basis vector ``k`` has entry 1 at ``free[k]`` and 0 at the other free
    columns, so the coordinates of a kernel vector are its free entries.
    """
    E = echelon(rows)
    E.full_reduce()
    pivots = E.rows
    free = [c for c in range(ncols) if c not in pivots]
    free_set = set(free)
    # column f of the reduced matrix restricted to pivot rows
    by_free: dict[int, Vec] = {f: {} for f in free}
    for c, r in pivots.items():
        for k, v in r.items():
            if k in free_set:
                by_free[k][c] = -v
    basis = []
    for f in free:
        vec = by_free[f]
        vec[f] = mpq(1)
        basis.append(vec)
    return basis, free


class Solver:
    """Solve ``A x = b`` for many right-hand sides.

    The returned solution has zero entries at non-pivot columns, so it is a
    linear function of ``b``.
    """

    def __init__(self, rows: list[Vec], ncols: int):
        self.ncols = ncols
        self.nrows = len(rows)
        self.E = echelon(rows, track=True)
        self.E.full_reduce()

    @property
    def rank(self):
        return self.E.rank

    def consistent(self, b: Vec) -> bool:
        return all(not dot(z, b) for z in self.E.dependencies)

    def solve(self, b: Vec) -> Vec | None:
        if not self.consistent(b):
            return None
        x = {}
        for c, combo in self.E.combos.items():
            s = dot(combo, b)
            if s:
                x[c] = s
        return x


def solve_columns(cols: list[Vec], nrows: int, b: Vec) -> Vec | None:
    """Solve ``sum_j x_j cols[j] = b``."""
    return Solver(transpose(cols, nrows), len(cols)).solve(b)
