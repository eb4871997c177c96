"""Cochain complexes over the rationals and simplicial cochains.

A :class:`CochainComplex` is a list of finite dimensions and row-major
differential matrices ``d[q]: C^q -> C^{q+1}``.  :func:`cohomology` computes
Betti numbers, representative cocycles and class coordinates with coboundary
witnesses, all by exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from gmpy2 import mpq

from . import linalg
from .linalg import Vec
from .simplicial import (
    Exhaustion,
    SimplexRef,
    SimplicialMap,
    SimplicialSet,
    SubSet,
    complement_closure,
    is_degenerate,
)


class ComplexError(ValueError):
    pass


@dataclass
class CochainComplex:
    """Finite-dimensional cochain complex ``C^0 -> C^1 -> ... -> C^N``.

    ``d[q]`` has ``dims[q + 1]`` rows and ``dims[q]`` columns; missing
    trailing differentials are zero.  ``labels[q]`` optionally names the
    basis elements of ``C^q``.
    """

    dims: list[int]
    d: list[list[Vec]]
    labels: list[list] | None = None
    name: str = ""

    def __post_init__(self):
        while len(self.d) < len(self.dims) - 1:
            q = len(self.d)
            self.d.append([{} for _ in range(self.dims[q + 1])])
        for q, m in enumerate(self.d):
            if len(m) != self.dims[q + 1]:
                raise ComplexError(f"d[{q}] has {len(m)} rows, expected {self.dims[q + 1]}")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, q: int) -> int:
        return self.dims[q] if 0 <= q < len(self.dims) else 0

    def diff(self, q: int, x: Vec) -> Vec:
        if q < 0 or q >= len(self.d):
            return {}
        return linalg.apply(self.d[q], x)

    def columns(self, q: int) -> list[Vec]:
        """Columns of ``d[q]`` as vectors in ``C^{q+1}``."""
        if q < 0 or q >= len(self.d):
            return [{} for _ in range(self.dim(q))]
        return linalg.transpose(self.d[q], self.dims[q])

    def check_d_squared(self) -> bool:
        for q in range(len(self.d) - 1):
            prod = linalg.matmul(self.d[q + 1], self.d[q])
            if any(prod):
                return False
        return True


def is_chain_map(F: Sequence[list[Vec]], C: CochainComplex, C2: CochainComplex) -> bool:
    """``F[q]: C^q -> C2^q`` (row-major) commutes with the differentials."""
    for q in range(min(len(C.dims), len(C2.dims)) - 1):
        lhs = linalg.matmul(F[q + 1], C.d[q])
        rhs = linalg.matmul(C2.d[q], F[q])
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------


@dataclass
class CohomologyResult:
    complex: CochainComplex
    betti: list[int]
    representatives: list[list[Vec]]
    _solvers: dict = field(default_factory=dict, repr=False)

    def class_of(self, q: int, z: Vec) -> tuple[list, Vec]:
        """Coordinates of the cocycle ``z`` and a witness ``y`` with
        ``z - sum(c_i rep_i) = d y``."""
        C = self.complex
        if C.diff(q, z):
            raise ComplexError(f"not a cocycle in degree {q}")
        reps = self.representatives[q]
        if q not in self._solvers:
            cols = list(reps) + C.columns(q - 1) if q > 0 else list(reps)
            self._solvers[q] = linalg.Solver(linalg.transpose(cols, C.dim(q)), len(cols))
        x = self._solvers[q].solve(z)
        if x is None:
            raise ComplexError("cocycle not in the span of representatives and coboundaries")
        n = len(reps)
        coords = [x.get(i, mpq(0)) for i in range(n)]
        witness = {k - n: v for k, v in x.items() if k >= n}
        return coords, witness

    def is_coboundary(self, q: int, z: Vec) -> Vec | None:
        """A witness ``y`` with ``d y = z``, or None."""
        coords, y = self.class_of(q, z)
        return y if not any(coords) else None


def cohomology(C: CochainComplex) -> CohomologyResult:
    """Betti numbers and deterministic representatives of ``H(C)``."""
    if not C.check_d_squared():
        raise ComplexError("d o d != 0")
    betti, reps = [], []
    for q in range(len(C.dims)):
        rows = C.d[q] if q < len(C.d) else []
        Z, _ = linalg.nullspace(rows, C.dims[q])
        E = linalg.Echelon()
        for b in C.columns(q - 1) if q > 0 else []:
            E.add(b)
        chosen = []
        for z in Z:
            if E.add(z):
                chosen.append(z)
        betti.append(len(chosen))
        reps.append(chosen)
    return CohomologyResult(C, betti, reps)


def induced_on_cohomology(
    F: Sequence[list[Vec]], H: CohomologyResult, H2: CohomologyResult, degrees=None
) -> list[list[list]]:
    """Matrices of a chain map on cohomology in representative bases.

    Entry ``[q][i][j]``: coordinate ``i`` in ``H2^q`` of the image of rep ``j``.
    """
    out = []
    degrees = range(len(H.betti)) if degrees is None else degrees
    for q in degrees:
        cols = []
        for r in H.representatives[q]:
            z = linalg.apply(F[q], r) if q < len(F) else {}
            coords, _ = H2.class_of(q, z) if q < len(H2.betti) else ([], {})
            cols.append(coords)
        m = H2.betti[q] if q < len(H2.betti) else 0
        out.append([[cols[j][i] for j in range(len(cols))] for i in range(m)])
    return out


def matrix_rank(M: list[list]) -> int:
    return linalg.rank([{j: v for j, v in enumerate(row) if v} for row in M])


def is_isomorphism(M: list[list], n_rows: int, n_cols: int) -> bool:
    return n_rows == n_cols and (n_rows == 0 or matrix_rank(M) == n_rows)


# ---------------------------------------------------------------------------
# simplicial cochains
# ---------------------------------------------------------------------------


def _members(A) -> frozenset:
    if A is None:
        return frozenset()
    if isinstance(A, SubSet):
        return A.members
    return frozenset(A)


def normalized_cochains(X: SimplicialSet, A=None, top: int | None = None) -> CochainComplex:
    """Normalized cochains of ``(X, A)``: functions on non-degenerate simplices
    outside ``A``; degenerate simplices carry the value 0."""
    A = _members(A)
    top = X.dim if top is None else top
    labels = [[r for r in X.simplices(q) if r not in A] for q in range(top + 1)]
    index = [{r: k for k, r in enumerate(lab)} for lab in labels]
    d = []
    for q in range(top):
        rows = []
        for sigma in labels[q + 1]:
            row: Vec = {}
            for i, (base, deg) in enumerate(X.faces[sigma]):
                if len(deg) != base.dim + 1 or base in A:
                    continue
                k = index[q][base]
                v = row.get(k, 0) + (1 if i % 2 == 0 else -1)
                if v:
                    row[k] = mpq(v)
                else:
                    row.pop(k, None)
            rows.append(row)
        d.append(rows)
    return CochainComplex([len(lab) for lab in labels], d, labels, name=f"NC({X.name})")


def full_cochains(X: SimplicialSet, A=None, top: int | None = None) -> CochainComplex:
    """Unnormalized cochains on all simplices (degenerate ones included) up to ``top``."""
    A = _members(A)
    top = X.dim + 1 if top is None else top
    labels = [[s for s in X.all_simplices(q) if s[0] not in A] for q in range(top + 1)]
    index = [{s: k for k, s in enumerate(lab)} for lab in labels]
    d = []
    for q in range(top):
        rows = []
        for s in labels[q + 1]:
            row: Vec = {}
            for i in range(q + 2):
                f = X.face(s, i)
                if f[0] in A:
                    continue
                k = index[q][f]
                v = row.get(k, 0) + (1 if i % 2 == 0 else -1)
                if v:
                    row[k] = mpq(v)
                else:
                    row.pop(k, None)
            rows.append(row)
        d.append(rows)
    return CochainComplex([len(lab) for lab in labels], d, labels, name=f"C({X.name})")


def chains(X: SimplicialSet, top: int | None = None) -> CochainComplex:
    """The (full) chain complex, returned through its dual cochain complex."""
    return full_cochains(X, top=top)


def normalized_chains(X: SimplicialSet) -> CochainComplex:
    return normalized_cochains(X)


def relative_cochains(X: SimplicialSet, A) -> CochainComplex:
    return normalized_cochains(X, A)


def compact_cochains(
    E: Exhaustion, n_max: int
) -> list[tuple[CochainComplex, list[list[Vec]] | None]]:
    """Directed system ``NC(X, <X \\ K_n>)`` for ``n = 1..n_max``.

    All levels live on the host truncation ``n_max + 1``; element ``n`` carries
    the inclusion into level ``n + 1`` (None for the last level).
    """
    host = E.level(n_max + 1)
    complexes = []
    for n in range(1, n_max + 1):
        _, K = E.window(n, n_max + 1)
        complexes.append(normalized_cochains(host, complement_closure(host, K)))
    out = []
    for k, C in enumerate(complexes):
        if k + 1 < len(complexes):
            out.append((C, extension_by_zero(C, complexes[k + 1])))
        else:
            out.append((C, None))
    return out


def extension_by_zero(C: CochainComplex, C2: CochainComplex) -> list[list[Vec]]:
    """Inclusion of relative cochains on a smaller support into a larger one."""
    F = []
    for q in range(len(C.dims)):
        idx = {lab: k for k, lab in enumerate(C2.labels[q])} if q < len(C2.dims) else {}
        rows = [dict() for _ in range(C2.dim(q))]
        for j, lab in enumerate(C.labels[q]):
            rows[idx[lab]][j] = mpq(1)
        F.append(rows)
    return F


def pullback_cochains(f: SimplicialMap, C: CochainComplex, C2: CochainComplex) -> list[list[Vec]]:
    """``f^*: C -> C2`` for normalized cochain complexes on ``f.target``, ``f.source``."""
    F = []
    for q in range(len(C2.dims)):
        idx = {lab: k for k, lab in enumerate(C.labels[q])} if q < len(C.dims) else {}
        rows = []
        for tau in C2.labels[q]:
            base, deg = f(tau)
            row = {}
            if len(deg) == base.dim + 1 and base in idx:
                row[idx[base]] = mpq(1)
            rows.append(row)
        F.append(rows)
    return F


# ---------------------------------------------------------------------------
# cup product
# ---------------------------------------------------------------------------


def _value(X: SimplicialSet, c: Vec, index: dict, s) -> mpq:
    if is_degenerate(s):
        return mpq(0)
    k = index.get(s[0])
    return c.get(k, mpq(0)) if k is not None else mpq(0)


def cup(X: SimplicialSet, C: CochainComplex, a: Vec, p: int, b: Vec, q: int) -> Vec:
    """Alexander-Whitney product of normalized cochains ``a`` (degree p) and ``b`` (degree q)."""
    if p + q > C.top:
        return {}
    idx_p = {lab: k for k, lab in enumerate(C.labels[p])}
    idx_q = {lab: k for k, lab in enumerate(C.labels[q])}
    out = {}
    front = tuple(range(p + 1))
    back = tuple(range(p, p + q + 1))
    for k, sigma in enumerate(C.labels[p + q]):
        va = _value(X, a, idx_p, X.apply(sigma, front))
        if not va:
            continue
        vb = _value(X, b, idx_q, X.apply(sigma, back))
        if vb:
            out[k] = va * vb
    return out


def unit_cochain(C: CochainComplex) -> Vec:
    return {k: mpq(1) for k in range(C.dim(0))}


def dump_matrix(M: list[Vec] | list[list], ncols: int | None = None) -> str:
    """Row-major text dump: header ``rows cols`` then one line per row of
    space-separated exact rationals."""
    if M and isinstance(M[0], dict) or (ncols is not None and not M):
        rows = [[r.get(j, 0) for j in range(ncols)] for r in M]
    else:
        rows = M
        ncols = len(rows[0]) if rows else (ncols or 0)
    lines = [f"{len(rows)} {ncols}"]
    lines += [" ".join(str(mpq(v)) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> list[list]:
    lines = [l for l in text.strip().splitlines() if l.strip()]
    n, m = (int(x) for x in lines[0].split())
    rows = [[mpq(x) for x in l.split()] for l in lines[1:]]
    if len(rows) != n or any(len(r) != m for r in rows):
        raise ComplexError("matrix dump has inconsistent shape")
    return rows
