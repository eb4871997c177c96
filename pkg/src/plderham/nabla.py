"""Polynomial differential forms on the standard simplex.

``PolyForm(p, q, ...)`` is a q-form on the p-simplex written in the affine
coordinates ``t1 .. tp`` (the barycentric ``t0 = 1 - t1 - ... - tp`` is
eliminated).  A term is keyed by ``(I, e)``: ``I`` a strictly increasing tuple
of indices in ``1..p`` for ``dt_I`` and ``e`` the exponent vector of the
coefficient monomial.

Simplicial operators act by pulling back along affine maps.  A monotone map
``theta: [m] -> [p]`` sends vertex ``k`` of the m-simplex to vertex
``theta(k)``, so in barycentric coordinates ``t_j = sum(u_k for theta(k) == j)``.
Faces and degeneracies are the special cases ``theta = coface`` and
``theta = codegeneracy``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

from gmpy2 import mpq

from . import linalg
from .simplicial import codegeneracy, coface


class FormError(ValueError):
    pass


class ExtensionError(FormError):
    """Boundary data that cannot be extended."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


# ---------------------------------------------------------------------------
# monomials and bases
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def exponents(p: int, maxdeg: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree <= maxdeg, ordered by (degree, vector)."""
    out = []

    def rec(prefix, left, k):
        if k == 0:
            out.append(tuple(prefix))
            return
        for a in range(left + 1):
            rec(prefix + [a], left - a, k - 1)

    rec([], maxdeg, p)
    return tuple(sorted(out, key=lambda e: (sum(e), e)))


@lru_cache(maxsize=None)
def basis(p: int, q: int, maxdeg: int) -> tuple[tuple, ...]:
    """Monomial basis ``(I, e)`` of q-forms with coefficient degree <= maxdeg.

    Ordered by coefficient degree first, so lower truncations are prefixes.
    """
    if q > p or maxdeg < 0:
        return ()
    idx = list(combinations(range(1, p + 1), q))
    items = [(I, e) for e in exponents(p, maxdeg) for I in idx]
    return tuple(sorted(items, key=lambda t: (sum(t[1]), t[0], t[1])))


# ---------------------------------------------------------------------------
# the form type
# ---------------------------------------------------------------------------


class PolyForm:
    """An element of the polynomial de Rham algebra of the p-simplex."""

    __slots__ = ("p", "q", "terms", "_hash")

    def __init__(self, p: int, q: int, terms=None):
        if p < 0 or q < 0:
            raise FormError("negative dimension or degree")
        self.p = p
        self.q = q
        clean = {}
        if q <= p and terms:
            for (I, e), c in terms.items():
                c = linalg.q(c)
                if not c:
                    continue
                I = tuple(I)
                e = tuple(e)
                if len(I) != q or len(e) != p or any(a < 0 for a in e):
                    raise FormError(f"bad term {(I, e)} for p={p}, q={q}")
                if any(not 1 <= i <= p for i in I) or list(I) != sorted(set(I)):
                    raise FormError(f"index set {I} must be strictly increasing in 1..{p}")
                clean[(I, e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, p: int, q: int = 0) -> PolyForm:
        return cls(p, q)

    @classmethod
    def constant(cls, p: int, c=1) -> PolyForm:
        return cls(p, 0, {((), (0,) * p): c})

    @classmethod
    def coordinate(cls, p: int, i: int) -> PolyForm:
        """The coordinate function ``t_i``, ``1 <= i <= p``."""
        e = [0] * p
        e[i - 1] = 1
        return cls(p, 0, {((), tuple(e)): 1})

    @classmethod
    def dt(cls, p: int, i: int) -> PolyForm:
        return cls(p, 1, {((i,), (0,) * p): 1})

    @classmethod
    def monomial(cls, p: int, I, e, c=1) -> PolyForm:
        return cls(p, len(I), {(tuple(I), tuple(e)): c})

    @classmethod
    def _raw(cls, p, q, terms):
        f = cls.__new__(cls)
        f.p, f.q, f.terms, f._hash = p, q, terms, None
        return f

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PolyForm):
            return self.p == other.p and self.q == other.q and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.q, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Largest coefficient degree (-1 for the zero form)."""
        return max((sum(e) for _, e in self.terms), default=-1)

    def __repr__(self):
        return f"PolyForm(p={self.p}, q={self.q}: {self.render()})"

    # -- linear structure --------------------------------------------------
    def _check(self, other):
        if not isinstance(other, PolyForm):
            raise TypeError(f"expected PolyForm, got {type(other).__name__}")
        if other.p != self.p:
            raise FormError(f"simplex dimensions differ: {self.p} vs {other.p}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.q != self.q:
            raise FormError(f"cannot add forms of degree {self.q} and {other.q}")
        out = dict(self.terms)
        linalg.axpy(out, 1, other.terms)
        return PolyForm._raw(self.p, self.q, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyForm._raw(self.p, self.q, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> PolyForm:
        c = linalg.q(c)
        return PolyForm._raw(self.p, self.q, linalg.scaled(c, self.terms))

    def __mul__(self, other):
        if isinstance(other, PolyForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    # -- algebra -----------------------------------------------------------
    def wedge(self, other: PolyForm) -> PolyForm:
        self._check(other)
        q = self.q + other.q
        out: dict = {}
        if q > self.p:
            return PolyForm(self.p, q)
        for (I, e), a in self.terms.items():
            for (J, f), b in other.terms.items():
                if set(I) & set(J):
                    continue
                K, sign = _merge(I, J)
                key = (K, tuple(x + y for x, y in zip(e, f)))
                v = out.get(key, 0) + sign * a * b
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return PolyForm._raw(self.p, q, out)

    __xor__ = wedge

    def d(self) -> PolyForm:
        out: dict = {}
        if self.q + 1 > self.p:
            return PolyForm(self.p, self.q + 1)
        for (I, e), c in self.terms.items():
            for k in range(1, self.p + 1):
                a = e[k - 1]
                if not a or k in I:
                    continue
                K, sign = _merge((k,), I)
                f = list(e)
                f[k - 1] -= 1
                key = (K, tuple(f))
                v = out.get(key, 0) + sign * a * c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return PolyForm._raw(self.p, self.q + 1, out)

    # -- simplicial structure ----------------------------------------------
    def pullback(self, theta: tuple[int, ...]) -> PolyForm:
        """Pull back along the affine map of ``theta: [m] -> [p]``."""
        m = len(theta) - 1
        if max(theta, default=0) > self.p:
            raise FormError("operator does not land in this simplex")
        out: dict = {}
        for (I, e), c in self.terms.items():
            dI = _dt_image(self.p, theta, I)
            if not dI:
                continue
            poly = _monomial_image(self.p, theta, e)
            for J, det in dI.items():
                cd = c * det
                for f, a in poly.items():
                    key = (J, f)
                    v = out.get(key, 0) + cd * a
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return PolyForm._raw(m, self.q, out)

    def face(self, i: int) -> PolyForm:
        if self.p == 0 or not 0 <= i <= self.p:
            raise IndexError(f"face index {i} out of range for p={self.p}")
        return self.pullback(coface(self.p, i))

    def degeneracy(self, j: int) -> PolyForm:
        if not 0 <= j <= self.p:
            raise IndexError(f"degeneracy index {j} out of range for p={self.p}")
        return self.pullback(codegeneracy(self.p, j))

    def total_boundary(self) -> PolyForm:
        """Alternating sum of the faces."""
        if self.p == 0:
            raise FormError("the 0-simplex has no boundary")
        out = PolyForm(self.p - 1, self.q)
        for i in range(self.p + 1):
            f = self.face(i)
            out = out + (f if i % 2 == 0 else -f)
        return out

    def integrate(self):
        """Exact integral of a top form over the standard simplex."""
        if self.q != self.p:
            raise FormError(f"can only integrate top forms, got q={self.q} on p={self.p}")
        return sum((c * monomial_integral(e) for (_, e), c in self.terms.items()), mpq(0))

    def evaluate(self, point) -> dict:
        """Coefficients ``{I: value}`` at a point given in affine coordinates."""
        pt = [linalg.q(x) for x in point]
        out: dict = {}
        for (I, e), c in self.terms.items():
            v = c
            for x, a in zip(pt, e):
                v *= x ** a
            out[I] = out.get(I, 0) + v
        return {I: v for I, v in out.items() if v}

    # -- rendering ---------------------------------------------------------
    def render(self) -> str:
        """Canonical text: terms sorted by (dt indices, exponents)."""
        if not self.terms:
            return "0"
        parts = []
        for (I, e) in sorted(self.terms):
            c = self.terms[(I, e)]
            bits = []
            for k, a in enumerate(e, start=1):
                if a == 1:
                    bits.append(f"t{k}")
                elif a > 1:
                    bits.append(f"t{k}^{a}")
            if I:
                bits.append("^".join(f"dt{i}" for i in I))
            if not bits or abs(c) != 1:
                bits.insert(0, str(c))
            elif c < 0:
                bits[0] = "-" + bits[0]
            parts.append("*".join(bits))
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str, p: int, q: int) -> PolyForm:
        text = text.strip()
        if text == "0":
            return cls(p, q)
        terms = {}
        for part in text.split(" + "):
            bits = part.split("*")
            sign = 1
            if bits[0].startswith("-") and bits[0][1:2] in ("t", "d"):
                sign, bits[0] = -1, bits[0][1:]
            if bits[0][:1] in ("t", "d"):
                c = mpq(sign)
            else:
                c = mpq(bits.pop(0))
            e = [0] * p
            I: tuple = ()
            for b in bits:
                if b.startswith("dt"):
                    I = tuple(int(x[2:]) for x in b.split("^"))
                elif b.startswith("t"):
                    var, _, pw = b.partition("^")
                    e[int(var[1:]) - 1] += int(pw) if pw else 1
                else:
                    raise FormError(f"cannot parse factor {b!r}")
            if len(I) != q:
                raise FormError(f"term {part!r} has degree {len(I)}, expected {q}")
            key = (I, tuple(e))
            terms[key] = terms.get(key, 0) + c
        return cls(p, q, terms)

    # -- coordinates -------------------------------------------------------
    def coefficients(self, maxdeg: int | None = None) -> dict:
        """Coordinates in :func:`basis` (index -> value)."""
        maxdeg = self.degree if maxdeg is None else maxdeg
        index = basis_index(self.p, self.q, maxdeg)
        out = {}
        for key, c in self.terms.items():
            if key not in index:
                raise FormError(f"term {key} exceeds degree bound {maxdeg}")
            out[index[key]] = c
        return out

    @classmethod
    def from_coefficients(cls, p: int, q: int, maxdeg: int, vec: dict) -> PolyForm:
        b = basis(p, q, maxdeg)
        return cls._raw(p, q, {b[k]: v for k, v in vec.items() if v})


@lru_cache(maxsize=None)
def basis_index(p: int, q: int, maxdeg: int) -> dict:
    return {t: k for k, t in enumerate(basis(p, q, maxdeg))}


def _merge(I, J):
    """Sorted union of disjoint index tuples and the sign of the shuffle."""
    inversions = sum(1 for a in I for b in J if a > b)
    return tuple(sorted(I + J)), (-1 if inversions % 2 else 1)


def monomial_integral(e) -> mpq:
    """``int t^e dt`` over the standard simplex: ``prod(a!) / (p + sum(a))!``."""
    num = 1
    for a in e:
        num *= factorial(a)
    return mpq(num, factorial(len(e) + sum(e)))


# ---------------------------------------------------------------------------
# pullback kernels
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _linear_images(p: int, theta: tuple[int, ...]):
    """``t_j`` for ``j = 1..p`` as (constant, coefficient tuple over u_1..u_m)."""
    m = len(theta) - 1
    out = []
    for j in range(1, p + 1):
        pre = [k for k in range(m + 1) if theta[k] == j]
        if 0 in pre:
            const = 1
            coefs = tuple(0 if k in pre else -1 for k in range(1, m + 1))
        else:
            const = 0
            coefs = tuple(1 if k in pre else 0 for k in range(1, m + 1))
        out.append((const, coefs))
    return tuple(out)


@lru_cache(maxsize=None)
def _power(p, theta, j, a):
    """Polynomial ``t_j^a`` pulled back, as dict exponent -> coefficient."""
    m = len(theta) - 1
    if a == 0:
        return {(0,) * m: mpq(1)}
    const, coefs = _linear_images(p, theta)[j - 1]
    lin = {}
    if const:
        lin[(0,) * m] = mpq(const)
    for k, c in enumerate(coefs):
        if c:
            e = [0] * m
            e[k] = 1
            lin[tuple(e)] = mpq(c)
    return _polymul(_power(p, theta, j, a - 1), lin)


def _polymul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e, x in a.items():
        for f, y in b.items():
            key = tuple(i + j for i, j in zip(e, f))
            v = out.get(key, 0) + x * y
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


@lru_cache(maxsize=100_000)
def _monomial_image(p, theta, e):
    m = len(theta) - 1
    poly = {(0,) * m: mpq(1)}
    for j, a in enumerate(e, start=1):
        if a:
            poly = _polymul(poly, _power(p, theta, j, a))
    return poly


@lru_cache(maxsize=None)
def _dt_image(p, theta, I):
    """``dt_I`` pulled back: dict J -> determinant of the Jacobian minor."""
    m = len(theta) - 1
    lin = _linear_images(p, theta)
    q = len(I)
    out = {}
    for J in combinations(range(1, m + 1), q):
        det = 0
        for perm in permutations(range(q)):
            prod = _perm_sign(perm)
            for r, s in enumerate(perm):
                prod *= lin[I[r] - 1][1][J[s] - 1]
                if not prod:
                    break
            det += prod
        if det:
            out[J] = mpq(det)
    return out


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# extension
# ---------------------------------------------------------------------------


def check_compatible(ws: list[PolyForm]) -> None:
    """Raise unless ``d_i w_j == d_{j-1} w_i`` for all ``i < j``."""
    if not ws:
        raise ExtensionError("empty boundary data")
    p = len(ws) - 1
    qs = {w.q for w in ws if w.terms}
    if len(qs) > 1:
        raise ExtensionError(f"boundary forms have mixed degrees {sorted(qs)}")
    for w in ws:
        if w.p != p - 1:
            raise ExtensionError(f"boundary forms must live on the {p - 1}-simplex")
    if p < 2:
        return
    for j in range(p + 1):
        for i in range(j):
            if ws[j].face(i) != ws[i].face(j - 1):
                raise ExtensionError(
                    f"incompatible faces: d_{i} w_{j} != d_{j - 1} w_{i}", pair=(i, j)
                )


@lru_cache(maxsize=None)
def _face_solver(p: int, q: int, maxdeg: int):
    """Solver for the face map ``w -> (d_0 w, ..., d_p w)`` at a degree bound."""
    cols = basis(p, q, maxdeg)
    row_index = basis_index(p - 1, q, maxdeg)
    nface = len(row_index)
    columns = []
    for I, e in cols:
        f = PolyForm._raw(p, q, {(I, e): mpq(1)})
        col = {}
        for i in range(p + 1):
            for key, c in f.face(i).terms.items():
                col[i * nface + row_index[key]] = c
        columns.append(col)
    solver = linalg.Solver(linalg.transpose(columns, (p + 1) * nface), len(cols))
    return solver, nface, row_index


def extend(ws: list[PolyForm], q: int | None = None, max_tries: int = 4) -> PolyForm:
    """A form on the p-simplex whose i-th face is ``ws[i]``.

    The result is the solution of the face equations supported on pivot
    columns of the monomial basis ordered by degree; it does not depend on
    the degree bound used, so it is additive in the boundary data.
    """
    check_compatible(ws)
    p = len(ws) - 1
    if q is None:
        q = next((w.q for w in ws if w.terms), ws[0].q)
    if q > p or all(not w.terms for w in ws):
        return PolyForm(p, q)
    if p == 0:
        raise ExtensionError("nothing to extend on a vertex")
    start = max(w.degree for w in ws) + 1
    for D in range(start, start + max_tries):
        solver, nface, row_index = _face_solver(p, q, D)
        b = {}
        for i, w in enumerate(ws):
            for key, c in w.terms.items():
                b[i * nface + row_index[key]] = c
        x = solver.solve(b)
        if x is not None:
            return PolyForm.from_coefficients(p, q, D, x)
    raise ExtensionError(f"no extension found up to coefficient degree {start + max_tries - 1}")
