"""Global polynomial forms on simplicial sets and their finite windows.

A :class:`GlobalForm` assigns a :class:`~plderham.nabla.PolyForm` to each
non-degenerate simplex; its value on a degenerate simplex ``(y, deg)`` is the
pullback of the value on ``y``.  Only non-zero values are stored.

:class:`TruncatedComplex` is the finite-dimensional subcomplex of forms of
total degree (coefficient degree + form degree) at most ``D``, optionally
vanishing on a simplicial subset ``A``.  Both ``d`` and all simplicial
operators preserve the total degree bound, so this is a subcomplex and
every restriction or pullback map between windows is a chain map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from gmpy2 import mpq

from . import linalg
from .cochains import CochainComplex, normalized_cochains
from .linalg import Vec
from .nabla import FormError, PolyForm, basis, basis_index, extend, monomial_integral
from .simplicial import (
    Simplex,
    SimplexRef,
    SimplicialMap,
    SimplicialSet,
    SubSet,
    coface,
    face_closure,
    generated_subset,
    identity,
)


class NotProperError(FormError):
    """Compactly supported forms can only be pulled back along proper maps."""


class GlobalForm:
    """A compatible family of polynomial q-forms on the simplices of ``host``."""

    __slots__ = ("host", "q", "values")

    def __init__(self, host: SimplicialSet, q: int, values=None, check: bool = True):
        self.host = host
        self.q = q
        self.values = {}
        for r, w in (values or {}).items():
            if r not in host:
                raise FormError(f"{r} is not a simplex of the host")
            if w.p != r.dim or (w.terms and w.q != q):
                raise FormError(f"value on {r} has shape ({w.p},{w.q}), expected ({r.dim},{q})")
            if w.terms:
                self.values[r] = w
        if check:
            bad = self.incompatibility()
            if bad:
                raise FormError(f"not face-compatible at {bad[0]}, face {bad[1]}")

    # -- evaluation ------------------------------------------------------
    def __getitem__(self, r: SimplexRef) -> PolyForm:
        w = self.values.get(r)
        return w if w is not None else PolyForm(r.dim, self.q)

    def at(self, s: Simplex | SimplexRef) -> PolyForm:
        """Value on a possibly degenerate simplex."""
        if isinstance(s, SimplexRef):
            return self[s]
        base, deg = s
        w = self[base]
        if len(deg) == base.dim + 1:
            return w
        return w.pullback(deg)

    def incompatibility(self):
        """First ``(simplex, face index)`` violating compatibility, or None."""
        X = self.host
        for r in X.simplices():
            if r.dim == 0:
                continue
            w = self[r]
            for i, s in enumerate(X.faces[r]):
                if s[0] not in self.values and not w.terms:
                    continue
                if w.face(i) != self.at(s):
                    return r, i
        return None

    def is_compatible(self) -> bool:
        return self.incompatibility() is None

    # -- algebra ---------------------------------------------------------
    def _same(self, other: GlobalForm):
        if not isinstance(other, GlobalForm):
            raise TypeError("expected a GlobalForm")
        if other.host is not self.host and other.host != self.host:
            raise FormError("forms live on different simplicial sets")

    def __add__(self, other: GlobalForm) -> GlobalForm:
        self._same(other)
        if other.values and self.values and other.q != self.q:
            raise FormError("degree mismatch")
        q = self.q if self.values else other.q
        vals = dict(self.values)
        for r, w in other.values.items():
            vals[r] = vals[r] + w if r in vals else w
        return GlobalForm(self.host, q, vals, check=False)

    def __neg__(self):
        return GlobalForm(self.host, self.q, {r: -w for r, w in self.values.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> GlobalForm:
        return GlobalForm(self.host, self.q, {r: w.scale(c) for r, w in self.values.items()}, check=False)

    def __rmul__(self, c):
        return self.scale(c)

    def wedge(self, other: GlobalForm) -> GlobalForm:
        self._same(other)
        vals = {}
        for r in self.values.keys() & other.values.keys():
            vals[r] = self.values[r].wedge(other.values[r])
        return GlobalForm(self.host, self.q + other.q, vals, check=False)

    __xor__ = wedge

    def d(self) -> GlobalForm:
        return GlobalForm(self.host, self.q + 1, {r: w.d() for r, w in self.values.items()}, check=False)

    def __eq__(self, other):
        if not isinstance(other, GlobalForm):
            return NotImplemented
        return self.host == other.host and (self - other).is_zero()

    def __hash__(self):
        return hash((self.q, frozenset(self.values.items())))

    def is_zero(self) -> bool:
        return not self.values

    def vanishes_on(self, refs) -> bool:
        return all(r not in self.values for r in refs)

    def equals_constant_on(self, refs, c) -> bool:
        """Every simplex in ``refs`` carries the constant function ``c``."""
        return self.q == 0 and all(self[r] == PolyForm.constant(r.dim, c) for r in refs)

    @property
    def degree(self) -> int:
        return max((w.degree for w in self.values.values()), default=-1)

    def __repr__(self):
        return f"GlobalForm(q={self.q}, {len(self.values)} non-zero simplices on {self.host.name or 'X'})"

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, X: SimplicialSet, q: int = 0) -> GlobalForm:
        return cls(X, q, {}, check=False)

    @classmethod
    def constant(cls, X: SimplicialSet, c=1) -> GlobalForm:
        return cls(X, 0, {r: PolyForm.constant(r.dim, c) for r in X.faces}, check=False)

    # -- serialization ---------------------------------------------------
    def render(self) -> str:
        lines = [f"form {self.q}"]
        for r in sorted(self.values):
            lines.append(f"{r.dim} {r.id} : {self.values[r].render()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, host: SimplicialSet) -> GlobalForm:
        lines = [l for l in text.splitlines() if l.strip() and not l.startswith("#")]
        head = lines[0].split()
        if head[0] != "form":
            raise FormError("expected a 'form <q>' header")
        q = int(head[1])
        vals = {}
        for l in lines[1:]:
            left, _, right = l.partition(" : ")
            dim, id_ = left.split()
            r = SimplexRef(int(dim), id_)
            vals[r] = PolyForm.parse(right, r.dim, q)
        return cls(host, q, vals)


# ---------------------------------------------------------------------------
# support, restriction, pullback
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportWitness:
    """A finite ``K`` with the form vanishing on ``<X \\ K>``."""

    K: SubSet | None
    compact: bool
    level: int | None = None

    def __bool__(self):
        return self.compact


def support(w: GlobalForm, core: SubSet | None = None, level: int | None = None) -> SupportWitness:
    """Smallest face-closed ``K`` containing every simplex where ``w`` is non-zero.

    ``core`` marks the part of a truncated host that is faithful to the
    underlying locally finite set; a support leaving it is reported as not
    compactly supported at this truncation.
    """
    K = generated_subset(w.host, w.values)
    if core is not None and not K.members <= core.members:
        return SupportWitness(None, False, level)
    return SupportWitness(K, True, level)


def restrict(w: GlobalForm, Y: SimplicialSet | SubSet) -> GlobalForm:
    """Restriction to a simplicial subset sharing simplex ids with the host."""
    if isinstance(Y, SubSet):
        Y = Y.as_set()
    vals = {r: v for r, v in w.values.items() if r in Y}
    return GlobalForm(Y, w.q, vals, check=False)


def pullback(w: GlobalForm, f: SimplicialMap, proper=None) -> GlobalForm:
    """``f^* w``; with ``proper`` given, refuse non-proper maps."""
    if proper is not None and not proper:
        raise NotProperError("f is not proper: compactly supported forms cannot be pulled back")
    vals = {}
    for r in f.source.faces:
        v = w.at(f(r))
        if v.terms:
            vals[r] = v
    return GlobalForm(f.source, w.q, vals, check=False)


def extend_by_zero(w: GlobalForm, X: SimplicialSet) -> GlobalForm:
    """View a form on a subset of ``X`` as a form on ``X`` (zero elsewhere).

    Only compatible when ``w`` vanishes on the simplices of its host that
    are faces of simplices outside it.
    """
    out = GlobalForm(X, w.q, dict(w.values), check=False)
    bad = out.incompatibility()
    if bad:
        raise FormError(f"form does not extend by zero: fails at {bad[0]}")
    return out


# ---------------------------------------------------------------------------
# truncated complexes
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _op_matrix(p: int, q: int, r: int, theta: tuple[int, ...]):
    """Pullback along ``theta`` as columns over ``basis(p, q, r)``."""
    m = len(theta) - 1
    index = basis_index(m, q, r)
    cols = []
    for I, e in basis(p, q, r):
        f = PolyForm._raw(p, q, {(I, e): mpq(1)}).pullback(theta)
        cols.append({index[k]: c for k, c in f.terms.items()})
    return cols


@lru_cache(maxsize=None)
def _d_matrix(p: int, q: int, r: int):
    """``d`` as columns from ``basis(p, q, r)`` to ``basis(p, q + 1, r - 1)``."""
    index = basis_index(p, q + 1, r - 1)
    cols = []
    for I, e in basis(p, q, r):
        f = PolyForm._raw(p, q, {(I, e): mpq(1)}).d()
        cols.append({index[k]: c for k, c in f.terms.items()})
    return cols


@lru_cache(maxsize=None)
def _integrals(q: int, r: int):
    """Integral of each basis top form of the q-simplex."""
    return [monomial_integral(e) for _, e in basis(q, q, r)]


class Level:
    """Coordinates for q-forms of total degree <= D on simplices outside A."""

    def __init__(self, X: SimplicialSet, q: int, D: int, A: frozenset):
        self.X, self.q, self.D, self.A = X, q, D, A
        self.r = D - q
        self.simplices = [s for s in X.simplices() if s.dim >= q and s not in A]
        self.offset = {}
        n = 0
        for s in self.simplices:
            self.offset[s] = n
            n += len(basis(s.dim, q, self.r))
        self.size = n
        self._kernel()

    def local(self, s: SimplexRef) -> int:
        return len(basis(s.dim, self.q, self.r))

    def constraints(self) -> list[Vec]:
        X, q, r = self.X, self.q, self.r
        rows: dict = {}
        for s in self.simplices:
            p = s.dim
            if p == 0:
                continue
            nf = len(basis(p - 1, q, r))
            if nf == 0:
                continue
            off = self.offset[s]
            for i, (y, deg) in enumerate(X.faces[s]):
                key0 = (s, i)
                block = [dict() for _ in range(nf)]
                for k, col in enumerate(_op_matrix(p, q, r, coface(p, i))):
                    for row, c in col.items():
                        block[row][off + k] = c
                if y in self.offset:
                    oy = self.offset[y]
                    for k, col in enumerate(_op_matrix(y.dim, q, r, deg)):
                        for row, c in col.items():
                            linalg.axpy(block[row], -1, {oy + k: c})
                for j, b in enumerate(block):
                    if b:
                        rows[(key0, j)] = b
        return list(rows.values())

    def _kernel(self):
        B, free = linalg.nullspace(self.constraints(), self.size)
        self.basis = B
        self.free = free
        self.free_index = {c: k for k, c in enumerate(free)}

    @property
    def dim(self) -> int:
        return len(self.free)

    def coords(self, v: Vec) -> Vec:
        """Coordinates of a compatible coefficient vector in the kernel basis."""
        return {self.free_index[c]: x for c, x in v.items() if c in self.free_index}

    def vector(self, coords: Vec) -> Vec:
        out: Vec = {}
        for k, x in coords.items():
            linalg.axpy(out, x, self.basis[k])
        return out

    def to_form(self, v: Vec) -> GlobalForm:
        vals = {}
        for s in self.simplices:
            off, n = self.offset[s], self.local(s)
            part = {c - off: x for c, x in v.items() if off <= c < off + n}
            if part:
                vals[s] = PolyForm.from_coefficients(s.dim, self.q, self.r, part)
        return GlobalForm(self.X, self.q, vals, check=False)

    def from_form(self, w: GlobalForm) -> Vec:
        if w.values and w.q != self.q:
            raise FormError(f"form has degree {w.q}, level is {self.q}")
        out = {}
        for s, val in w.values.items():
            if s not in self.offset:
                if s in self.A:
                    raise FormError(f"form does not vanish on {s} in A")
                continue
            off = self.offset[s]
            for k, c in val.coefficients(self.r).items():
                out[off + k] = c
        return out


class TruncatedComplex:
    """Forms of total degree <= D on ``X`` vanishing on ``A``, as a cochain complex."""

    def __init__(self, X: SimplicialSet, D: int, A: SubSet | frozenset | set | None = None):
        if D < 0:
            raise ValueError("D must be non-negative")
        self.X = X
        self.D = D
        if isinstance(A, SubSet):
            A = A.members
        self.A = frozenset(A or ())
        top = min(D, max(X.dim, 0))
        self.levels = [Level(X, q, D, self.A) for q in range(top + 1)]
        self.complex = CochainComplex(
            [L.dim for L in self.levels],
            [self._d_rows(q) for q in range(top)],
            name=f"A_{D}({X.name})",
        )

    @property
    def dims(self) -> list[int]:
        return self.complex.dims

    def level(self, q: int) -> Level:
        return self.levels[q]

    def _d_vector(self, q: int, v: Vec) -> Vec:
        L, L2 = self.levels[q], self.levels[q + 1]
        out: Vec = {}
        for s in L.simplices:
            if s.dim < q + 1:
                continue
            off, n = L.offset[s], L.local(s)
            cols = _d_matrix(s.dim, q, L.r)
            off2 = L2.offset[s]
            for c, x in v.items():
                if off <= c < off + n:
                    for row, a in cols[c - off].items():
                        linalg.axpy(out, x * a, {off2 + row: mpq(1)})
        return out

    def _d_rows(self, q: int) -> list[Vec]:
        L2 = self.levels[q + 1]
        cols = [L2.coords(self._d_vector(q, b)) for b in self.levels[q].basis]
        return linalg.transpose(cols, L2.dim)

    def d(self, q: int, coords: Vec) -> Vec:
        return self.complex.diff(q, coords)

    def form(self, q: int, coords: Vec) -> GlobalForm:
        L = self.levels[q]
        return L.to_form(L.vector(coords))

    def basis_form(self, q: int, k: int) -> GlobalForm:
        return self.form(q, {k: mpq(1)})

    def coords_of(self, w: GlobalForm) -> Vec:
        L = self.levels[w.q]
        return L.coords(L.from_form(w))

    def contains(self, w: GlobalForm) -> bool:
        """Whether ``w`` lies in this window (degree bound and vanishing on A)."""
        if w.q >= len(self.levels):
            return w.is_zero()
        if w.values and w.degree > self.D - w.q:
            return False
        try:
            L = self.levels[w.q]
            v = L.from_form(w)
        except FormError:
            return False
        return L.vector(L.coords(v)) == v

    # -- maps ------------------------------------------------------------
    def rho_rows(self, q: int, NC: CochainComplex) -> list[Vec]:
        """Integration ``A^q -> NC^q`` as a row-major matrix."""
        L = self.levels[q]
        idx = {lab: k for k, lab in enumerate(NC.labels[q])} if q < len(NC.dims) else {}
        cols = []
        for b in L.basis:
            col = {}
            for s in L.simplices:
                if s.dim != q or s not in idx:
                    continue
                off, n = L.offset[s], L.local(s)
                ints = _integrals(q, L.r)
                v = sum((x * ints[c - off] for c, x in b.items() if off <= c < off + n), mpq(0))
                if v:
                    col[idx[s]] = v
            cols.append(col)
        return linalg.transpose(cols, NC.dim(q))

    def rho(self, NC: CochainComplex | None = None) -> list[list[Vec]]:
        NC = NC or self.cochains()
        return [self.rho_rows(q, NC) for q in range(min(len(self.levels), len(NC.dims)))]

    def cochains(self) -> CochainComplex:
        return normalized_cochains(self.X, self.A)

    def pullback_rows(self, q: int, f: SimplicialMap, source: TruncatedComplex) -> list[Vec]:
        """``f^*: source^q -> self^q`` for ``f: self.X -> source.X``, row-major."""
        if source.D != self.D:
            raise ValueError("windows must share the degree bound")
        for r in self.A:
            base, _ = f(r)
            if base not in source.A:
                raise FormError(f"{r} lies in A but its image {base} does not")
        L, Ls = self.levels[q], source.levels[q]
        cols = []
        for b in Ls.basis:
            v: Vec = {}
            for tau in L.simplices:
                base, deg = f(tau)
                if base not in Ls.offset:
                    continue
                off, n = Ls.offset[base], Ls.local(base)
                op = _op_matrix(base.dim, q, L.r, deg)
                o2 = L.offset[tau]
                for c, x in b.items():
                    if off <= c < off + n:
                        for row, a in op[c - off].items():
                            linalg.axpy(v, x * a, {o2 + row: mpq(1)})
            cols.append(L.coords(v))
        return linalg.transpose(cols, L.dim)

    def pullback_matrices(self, f: SimplicialMap, source: TruncatedComplex) -> list[list[Vec]]:
        return [self.pullback_rows(q, f, source) for q in range(len(self.levels))]

    def inclusion_from(self, other: TruncatedComplex) -> list[list[Vec]]:
        """Inclusion ``other -> self`` of windows on the same host with ``self.A <= other.A``."""
        if not self.A <= other.A:
            raise FormError("inclusion needs the larger vanishing set on the source")
        return self.pullback_matrices(SimplicialMap.identity(self.X), other)


def relative_complex(X: SimplicialSet, A: SubSet | None, D: int) -> TruncatedComplex:
    """Forms of total degree <= D on ``X`` vanishing on ``A``."""
    return TruncatedComplex(X, D, A)


def truncated(X: SimplicialSet, D: int) -> TruncatedComplex:
    return TruncatedComplex(X, D)


def transport(w: GlobalForm, iota: SimplicialMap) -> GlobalForm:
    """Move a form along an injective map onto its image, as a partial assignment."""
    vals = {}
    for r, v in w.values.items():
        base, _ = iota(r)
        vals[base] = v
    return GlobalForm(iota.target, w.q, vals, check=False)


def extend_form(w: GlobalForm, sub: Iterable[SimplexRef]) -> GlobalForm:
    """Extend a form known on the face-closed set ``sub`` to all of ``w.host``.

    ``w`` holds the values on ``sub``; every other simplex is filled in
    order of dimension with the extension of its face values.
    """
    X = w.host
    sub = frozenset(sub)
    out = GlobalForm(X, w.q, {r: v for r, v in w.values.items() if r in sub}, check=False)
    for s in sorted(X.faces):
        if s in sub or s.dim < max(w.q, 1):
            continue
        v = extend([out.at(f) for f in X.faces[s]], q=w.q)
        if v.terms:
            out.values[s] = v
    bad = out.incompatibility()
    if bad:
        raise FormError(f"extension fails at {bad[0]}, face {bad[1]}")
    return out
