"""Simplicial sets in Eilenberg-Zilber normal form.

A simplicial set is stored through its non-degenerate simplices.  Every
simplex, degenerate or not, is a pair ``(ref, deg)`` where ``ref`` names a
non-degenerate simplex of dimension ``m`` and ``deg`` is a monotone surjection
``[n] -> [m]`` written as a tuple of length ``n + 1``.  The simplex is
``X(deg)(ref)``; the identity surjection gives ``ref`` itself.  Faces of a
non-degenerate simplex are stored in this form, and all other simplicial
operators are computed from them by :meth:`SimplicialSet.apply`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple


class SimplicialError(ValueError):
    """Raised when simplicial data is malformed or violates an identity."""


class SimplexRef(NamedTuple):
    dim: int
    id: str

    def __str__(self):
        return f"{self.dim}:{self.id}"


# (non-degenerate base, monotone surjection from [n] onto [base.dim])
Simplex = tuple[SimplexRef, tuple[int, ...]]


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> tuple[int, ...]:
    """The injection [n-1] -> [n] skipping ``i``."""
    return tuple(k if k < i else k + 1 for k in range(n))


def codegeneracy(n: int, j: int) -> tuple[int, ...]:
    """The surjection [n+1] -> [n] hitting ``j`` twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def compose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """``outer o inner`` for monotone maps given as value tuples."""
    return tuple(outer[k] for k in inner)


def is_surjection(theta: tuple[int, ...], m: int) -> bool:
    return theta[0] == 0 and theta[-1] == m and all(
        b - a in (0, 1) for a, b in zip(theta, theta[1:])
    )


def word_of(deg: tuple[int, ...]) -> tuple[int, ...]:
    """Degeneracy word ``(j1 < j2 < ...)``: positions where ``deg`` repeats.

    The simplex ``(y, deg)`` equals ``s_jk ... s_j1 y``; the indices are
    applied in increasing order.
    """
    return tuple(j for j in range(len(deg) - 1) if deg[j] == deg[j + 1])


def deg_of(word: Iterable[int], n: int) -> tuple[int, ...]:
    """Inverse of :func:`word_of` for a simplex of dimension ``n``."""
    word = set(word)
    out = [0]
    for j in range(n):
        out.append(out[-1] + (0 if j in word else 1))
    return tuple(out)


def is_degenerate(s: Simplex) -> bool:
    return len(s[1]) != s[0].dim + 1


@dataclass(frozen=True)
class SimplicialSet:
    """A finite simplicial set given by its non-degenerate simplices.

    ``faces[ref]`` lists the ``dim + 1`` faces of ``ref`` as simplices in
    normal form.  Construction validates the data and the face identities
    ``d_i d_j = d_{j-1} d_i`` for ``i < j``.
    """

    faces: Mapping[SimplexRef, tuple[Simplex, ...]]
    name: str = ""
    _by_dim: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        by_dim = defaultdict(list)
        for ref in self.faces:
            by_dim[ref.dim].append(ref)
        for refs in by_dim.values():
            refs.sort(key=lambda r: r.id)
        object.__setattr__(self, "_by_dim", dict(by_dim))
        self.validate()

    def __hash__(self):
        return hash(frozenset(self.faces))

    # -- basic queries -------------------------------------------------
    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def simplices(self, n: int | None = None) -> list[SimplexRef]:
        """Non-degenerate simplices, sorted by dimension then id."""
        if n is not None:
            return list(self._by_dim.get(n, ()))
        return [r for d in sorted(self._by_dim) for r in self._by_dim[d]]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim.get(n, ())) for n in range(self.dim + 1))

    def __contains__(self, ref) -> bool:
        return ref in self.faces

    def __len__(self):
        return len(self.faces)

    def ref(self, dim: int, id) -> SimplexRef:
        r = SimplexRef(dim, str(id))
        if r not in self.faces:
            raise KeyError(f"unknown simplex {r}")
        return r

    def vertex_ids(self) -> list[str]:
        return [r.id for r in self.simplices(0)]

    # -- simplicial operators ------------------------------------------
    def apply(self, s: Simplex | SimplexRef, theta: tuple[int, ...]) -> Simplex:
        """Apply the simplicial operator ``X(theta)`` to ``s``.

        ``theta`` is a monotone map ``[k] -> [n]`` with ``n = dim s``.
        """
        if isinstance(s, SimplexRef):
            s = (s, identity(s.dim))
        base, deg = s
        psi = compose(deg, theta)
        while True:
            m = base.dim
            present = set(psi)
            if len(present) == m + 1:
                return base, psi
            i = min(k for k in range(m + 1) if k not in present)
            psi = tuple(v - 1 if v > i else v for v in psi)
            base, zeta = self.faces[base][i]
            psi = compose(zeta, psi)

    def face(self, s: Simplex | SimplexRef, i: int) -> Simplex:
        n = s.dim if isinstance(s, SimplexRef) else len(s[1]) - 1
        if not 0 <= i <= n:
            raise IndexError(f"face index {i} out of range for dimension {n}")
        return self.apply(s, coface(n, i))

    def degeneracy(self, s: Simplex | SimplexRef, j: int) -> Simplex:
        n = s.dim if isinstance(s, SimplexRef) else len(s[1]) - 1
        if not 0 <= j <= n:
            raise IndexError(f"degeneracy index {j} out of range for dimension {n}")
        return self.apply(s, codegeneracy(n, j))

    def vertices_of(self, s: Simplex | SimplexRef) -> tuple[SimplexRef, ...]:
        n = s.dim if isinstance(s, SimplexRef) else len(s[1]) - 1
        return tuple(self.apply(s, (k,))[0] for k in range(n + 1))

    def all_simplices(self, n: int) -> list[Simplex]:
        """Every simplex of dimension ``n``, degenerate ones included."""
        out = []
        for m in range(min(n, self.dim) + 1):
            surjs = [d for d in _surjections(n, m)]
            for ref in self.simplices(m):
                out.extend((ref, d) for d in surjs)
        return out

    # -- validation ----------------------------------------------------
    def validate(self):
        for ref, fs in self.faces.items():
            n = ref.dim
            if n < 0:
                raise SimplicialError(f"negative dimension in {ref}")
            if len(fs) != (n + 1 if n > 0 else 0):
                raise SimplicialError(f"{ref} needs {n + 1 if n else 0} faces, got {len(fs)}")
            for i, (base, deg) in enumerate(fs):
                if base not in self.faces:
                    raise SimplicialError(f"face {i} of {ref} refers to unknown {base}")
                if len(deg) != n or not is_surjection(deg, base.dim):
                    raise SimplicialError(f"face {i} of {ref} has a malformed degeneracy word")
        for ref in self.faces:
            n = ref.dim
            if n < 2:
                continue
            for j in range(n + 1):
                for i in range(j):
                    a = self.face(self.faces[ref][j], i)
                    b = self.face(self.faces[ref][i], j - 1)
                    if a != b:
                        raise SimplicialError(
                            f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on {ref}: "
                            f"{_fmt(a)} != {_fmt(b)}",
                        )

    # -- constructions -------------------------------------------------
    def sub(self, refs: Iterable[SimplexRef], name: str = "") -> SimplicialSet:
        """The simplicial subset on a face-closed set of simplices."""
        refs = set(refs)
        for r in refs:
            for base, _ in self.faces[r]:
                if base not in refs:
                    raise SimplicialError(f"{r} has face {base} outside the subset")
        return SimplicialSet({r: self.faces[r] for r in refs}, name=name)

    def relabel(self, fn: Callable[[SimplexRef], str], name: str = "") -> SimplicialSet:
        new = {}
        for r, fs in self.faces.items():
            new[SimplexRef(r.dim, fn(r))] = tuple(
                (SimplexRef(b.dim, fn(b)), d) for b, d in fs
            )
        return SimplicialSet(new, name=name or self.name)


def _fmt(s: Simplex) -> str:
    base, deg = s
    w = word_of(deg)
    if not w:
        return base.id
    return base.id + "[" + "".join(f"s{j}" for j in w) + "]"


def _surjections(n: int, m: int):
    """Monotone surjections [n] -> [m] in lexicographic order of their words."""
    from itertools import combinations

    for word in combinations(range(n), n - m):
        yield deg_of(word, n)


# ---------------------------------------------------------------------------
# Subsets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubSet:
    """A face-closed set of non-degenerate simplices of ``host``."""

    host: SimplicialSet
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for r in self.members:
            if r not in self.host:
                raise SimplicialError(f"{r} is not a simplex of the host")
            for base, _ in self.host.faces[r]:
                if base not in self.members:
                    raise SimplicialError(f"subset is not face-closed: {r} has face {base}")

    def __contains__(self, ref):
        return ref in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __le__(self, other: SubSet):
        return self.members <= other.members

    def __or__(self, other: SubSet):
        return SubSet(self.host, self.members | other.members)

    def __and__(self, other: SubSet):
        return SubSet(self.host, self.members & other.members)

    def as_set(self) -> SimplicialSet:
        return self.host.sub(self.members)

    @classmethod
    def everything(cls, X: SimplicialSet) -> SubSet:
        return cls(X, frozenset(X.faces))

    @classmethod
    def empty(cls, X: SimplicialSet) -> SubSet:
        return cls(X, frozenset())


def _check_refs(X: SimplicialSet, refs):
    for r in refs:
        if r not in X:
            raise SimplicialError(f"unknown simplex {r}")


def face_closure(X: SimplicialSet, refs) -> set[SimplexRef]:
    """All non-degenerate simplices in the subsets generated by ``refs``."""
    seen = set()
    stack = list(refs)
    while stack:
        r = stack.pop()
        if r in seen:
            continue
        seen.add(r)
        stack.extend(base for base, _ in X.faces[r])
    return seen


def generated_subset(X: SimplicialSet, S: Iterable[SimplexRef]) -> SubSet:
    """The smallest simplicial subset of ``X`` containing ``S``."""
    S = list(S)
    _check_refs(X, S)
    return SubSet(X, frozenset(face_closure(X, S)))


def _as_members(X, K) -> frozenset:
    if isinstance(K, SubSet):
        if K.host is not X and K.host != X:
            for r in K.members:
                if r not in X:
                    raise SimplicialError(f"{r} of K is not a simplex of X")
        return K.members
    K = frozenset(K)
    _check_refs(X, K)
    return K


def touches(X: SimplicialSet, K: SubSet | Iterable[SimplexRef]) -> set[SimplexRef]:
    """Non-degenerate simplices having some iterated face in ``K``."""
    members = _as_members(X, K)
    out = set()
    for r in X.simplices():
        if r in members or any(base in out for base, _ in X.faces[r]):
            out.add(r)
    return out


def minimal_neighborhood(X: SimplicialSet, K: SubSet | Iterable[SimplexRef]) -> SubSet:
    """``<{sigma : some iterated face of sigma lies in K}>``."""
    return SubSet(X, frozenset(face_closure(X, touches(X, K))))


def complement_closure(X: SimplicialSet, K: SubSet | Iterable[SimplexRef]) -> SubSet:
    """``<X \\ K>``: the subset generated by the simplices outside ``K``."""
    members = _as_members(X, K)
    return SubSet(X, frozenset(face_closure(X, (r for r in X.faces if r not in members))))


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplicialMap:
    """A simplicial map given on non-degenerate simplices.

    ``images[ref]`` is the image of ``ref`` in normal form in ``target``.
    """

    source: SimplicialSet
    target: SimplicialSet
    images: Mapping[SimplexRef, Simplex]

    def __post_init__(self):
        self.validate()

    def __call__(self, s: Simplex | SimplexRef) -> Simplex:
        if isinstance(s, SimplexRef):
            return self.images[s]
        base, deg = s
        img = self.images[base]
        return self.target.apply(img, deg)

    def validate(self):
        for r in self.source.faces:
            if r not in self.images:
                raise SimplicialError(f"map undefined on {r}")
            base, deg = self.images[r]
            if base not in self.target or len(deg) != r.dim + 1 or not is_surjection(deg, base.dim):
                raise SimplicialError(f"image of {r} is malformed")
            for i in range(r.dim + 1 if r.dim else 0):
                a = self(self.source.faces[r][i])
                b = self.target.face(self.images[r], i)
                if a != b:
                    raise SimplicialError(f"map does not commute with d_{i} on {r}")

    def is_injective(self) -> bool:
        """Injective on all simplices: non-degenerate to distinct non-degenerate."""
        seen = set()
        for r, (base, deg) in self.images.items():
            if len(deg) != base.dim + 1 or base in seen:
                return False
            seen.add(base)
        return True

    def preimage(self, refs) -> set[SimplexRef]:
        """Non-degenerate source simplices whose image lies over ``refs``."""
        refs = set(refs)
        return {r for r, (base, _) in self.images.items() if base in refs}

    def compose(self, other: SimplicialMap) -> SimplicialMap:
        """``self o other``."""
        return SimplicialMap(
            other.source, self.target, {r: self(other(r)) for r in other.source.faces}
        )

    @classmethod
    def identity(cls, X: SimplicialSet) -> SimplicialMap:
        return cls(X, X, {r: (r, identity(r.dim)) for r in X.faces})

    @classmethod
    def inclusion(cls, Y: SimplicialSet, X: SimplicialSet) -> SimplicialMap:
        """Inclusion of a simplicial subset sharing simplex ids with ``X``."""
        return cls(Y, X, {r: (r, identity(r.dim)) for r in Y.faces})

    @classmethod
    def from_vertices(cls, source: SimplicialSet, target: SimplicialSet, vmap: Mapping[str, str]):
        """A map between simplicial sets determined by vertices.

        Only valid when every simplex of ``target`` is determined by its
        vertex sequence (ordered simplicial complexes).
        """
        by_verts = {}
        for r in target.simplices():
            by_verts[tuple(v.id for v in target.vertices_of(r))] = r
        images = {}
        for r in source.simplices():
            vs = [vmap[v.id] for v in source.vertices_of(r)]
            distinct = []
            deg = []
            for v in vs:
                if not distinct or distinct[-1] != v:
                    distinct.append(v)
                deg.append(len(distinct) - 1)
            base = by_verts.get(tuple(distinct))
            if base is None:
                raise SimplicialError(f"no simplex with vertices {distinct} in target")
            images[r] = (base, tuple(deg))
        return cls(source, target, images)


@dataclass(frozen=True)
class ProperVerdict:
    proper: bool | None  # None: indeterminate at the given truncation
    level: int | None = None
    witness: SimplexRef | None = None

    def __bool__(self):
        return bool(self.proper)


def is_proper(f: SimplicialMap) -> ProperVerdict:
    """Properness of a map with finite source: always proper."""
    return ProperVerdict(True)


def is_proper_levels(maps: Callable[[int], SimplicialMap], n_max: int) -> ProperVerdict:
    """Properness of a map between locally finite sets given by truncations.

    ``maps(n)`` is the map restricted to the ``n``-th truncation of the
    source (and landing in a truncation of the target).  A non-degenerate
    target simplex whose generated preimage grows at every level is an
    unbounded fibre; preimages that are stable from one level to the next
    for every target simplex of the previous level are reported proper.
    """
    counts: list[dict] = []
    for n in range(1, n_max + 1):
        f = maps(n)
        counts.append(_preimage_counts(f))
    first = counts[0]
    for sigma in sorted(first):
        seq = [c.get(sigma, 0) for c in counts]
        if len(seq) > 2 and all(b > a for a, b in zip(seq, seq[1:])):
            return ProperVerdict(False, n_max, sigma)
    if len(counts) >= 2:
        prev, last = counts[-2], counts[-1]
        if all(last.get(s, 0) == c for s, c in prev.items()):
            return ProperVerdict(True, n_max)
    return ProperVerdict(None, n_max)


def _preimage_counts(f: SimplicialMap) -> dict:
    """Number of non-degenerate source simplices over each generated ``<sigma>``."""
    T = f.target
    closures = {s: face_closure(T, [s]) for s in T.faces}
    per_base = defaultdict(int)
    for base, _ in f.images.values():
        per_base[base] += 1
    return {s: sum(per_base[b] for b in cl) for s, cl in closures.items()}


# ---------------------------------------------------------------------------
# Pushouts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pushout:
    X: SimplicialSet
    g: SimplicialMap  # V -> X
    h: SimplicialMap  # U -> X


def pushout(f: SimplicialMap, iota: SimplicialMap, name: str = "") -> Pushout:
    """``X = U +_W V`` for ``f: W -> U`` and an inclusion ``iota: W -> V``."""
    if f.source is not iota.source and f.source != iota.source:
        raise SimplicialError("f and iota must share their source W")
    if not iota.is_injective():
        raise SimplicialError("iota is not injective")
    U, V = f.target, iota.target
    in_w = {iota.images[w][0]: w for w in iota.source.faces}

    def u_id(r):
        return SimplexRef(r.dim, "U." + r.id)

    def v_id(r):
        return SimplexRef(r.dim, "V." + r.id)

    def to_x(s: Simplex) -> Simplex:
        """Image in X of a V simplex given in V normal form."""
        base, deg = s
        if base in in_w:
            ub, udeg = f.images[in_w[base]]
            return u_id(ub), compose(udeg, deg)
        return v_id(base), deg

    faces = {u_id(r): tuple((u_id(b), d) for b, d in fs) for r, fs in U.faces.items()}
    for r in V.simplices():
        if r not in in_w:
            faces[v_id(r)] = tuple(to_x(s) for s in V.faces[r])
    X = SimplicialSet(faces, name=name)
    h = SimplicialMap(U, X, {r: (u_id(r), identity(r.dim)) for r in U.faces})
    g_images = {}
    for r in V.faces:
        g_images[r] = to_x((r, identity(r.dim)))
    g = SimplicialMap(V, X, g_images)
    return Pushout(X, g, h)


# ---------------------------------------------------------------------------
# Locally finite sets by exhaustion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exhaustion:
    """A locally finite simplicial set presented by nested finite truncations.

    ``build(n)`` returns the ``n``-th truncation; simplex ids must be stable,
    so that ``build(n)`` is a simplicial subset of ``build(n + 1)``.
    """

    build: Callable[[int], SimplicialSet]
    name: str = ""
    finite: bool = False

    def level(self, n: int) -> SimplicialSet:
        return self.build(n)

    def window(self, n: int, host_level: int | None = None) -> tuple[SimplicialSet, SubSet]:
        """Host truncation and the finite subset ``K_n`` inside it."""
        host = self.build(host_level if host_level is not None else n + 1)
        K = self.build(n)
        missing = [r for r in K.faces if r not in host]
        if missing:
            raise SimplicialError(f"exhaustion not nested: {missing[0]} missing at higher level")
        return host, SubSet(host, frozenset(K.faces))

    @classmethod
    def constant(cls, X: SimplicialSet) -> Exhaustion:
        return cls(lambda n: X, name=X.name, finite=True)
