"""Built-in simplicial sets used as a test corpus and by the CLI."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .simplicial import Exhaustion, SimplexRef, SimplicialSet, identity


def ordered_complex(
    top: Iterable[Sequence[Hashable]],
    name: str = "",
    key: Callable = None,
    label: Callable[[Sequence], str] | None = None,
) -> SimplicialSet:
    """The simplicial set of an ordered simplicial complex.

    ``top`` lists simplices by their vertices; vertices are ordered by ``key``
    and all faces are added.  ``label`` turns a sorted vertex tuple into an id.
    """
    key = key or (lambda v: v)
    label = label or (lambda vs: "|".join(str(v) for v in vs))
    simplices = set()
    for s in top:
        s = tuple(sorted(set(s), key=key))
        for k in range(1, len(s) + 1):
            simplices.update(combinations(s, k))
    faces = {}
    for s in simplices:
        n = len(s) - 1
        fs = []
        if n > 0:
            for i in range(n + 1):
                t = s[:i] + s[i + 1:]
                fs.append((SimplexRef(n - 1, label(t)), identity(n - 1)))
        faces[SimplexRef(n, label(s))] = tuple(fs)
    return SimplicialSet(faces, name=name)


def _digits(vs):
    return "".join(str(v) for v in vs) if max(vs) < 10 else "-".join(str(v) for v in vs)


def simplex(n: int) -> SimplicialSet:
    """The standard simplex; ids are vertex strings such as ``"01"``."""
    return ordered_complex([range(n + 1)], name=f"simplex({n})", label=_digits)


def boundary(n: int) -> SimplicialSet:
    """The boundary of the standard ``n``-simplex."""
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    tops = [tuple(v for v in range(n + 1) if v != i) for i in range(n + 1)]
    return ordered_complex(tops, name=f"boundary({n})", label=_digits)


def point() -> SimplicialSet:
    return simplex(0)


def circle(n: int = 1) -> SimplicialSet:
    """A circle made of ``n`` vertices and ``n`` edges, edge ``k`` from ``k`` to ``k+1``."""
    if n < 1:
        raise ValueError("circle needs n >= 1")
    faces = {SimplexRef(0, str(k)): () for k in range(n)}
    for k in range(n):
        faces[SimplexRef(1, f"{k}|{(k + 1) % n}")] = (
            (SimplexRef(0, str((k + 1) % n)), (0,)),
            (SimplexRef(0, str(k)), (0,)),
        )
    return SimplicialSet(faces, name=f"circle({n})")


def grid(n: int, m: int, periodic_x: bool, periodic_y: bool, name: str = "") -> SimplicialSet:
    """``n x m`` squares, each split into two triangles along the diagonal.

    Periodic directions are glued, which for ``n = m = 1`` gives the torus
    with one vertex, three edges and two triangles.
    """

    def vx(i, j):
        if periodic_x:
            i %= n
        if periodic_y:
            j %= m
        return f"{i},{j}"

    def v(i, j):
        return SimplexRef(0, vx(i, j))

    def edge(kind, i, j):
        return SimplexRef(1, f"{kind}{vx(i, j)}")

    cols = range(n) if periodic_x else range(n + 1)
    rows = range(m) if periodic_y else range(m + 1)
    faces = {}
    for i in cols:
        for j in rows:
            faces[v(i, j)] = ()
    e = identity(0)
    for i in range(n):
        for j in rows:
            faces[edge("h", i, j)] = ((v(i + 1, j), e), (v(i, j), e))
    for i in cols:
        for j in range(m):
            faces[edge("v", i, j)] = ((v(i, j + 1), e), (v(i, j), e))
    f1 = identity(1)
    for i in range(n):
        for j in range(m):
            faces[edge("d", i, j)] = ((v(i + 1, j + 1), e), (v(i, j), e))
            faces[SimplexRef(2, f"L{vx(i, j)}")] = (
                (edge("v", i + 1, j), f1),
                (edge("d", i, j), f1),
                (edge("h", i, j), f1),
            )
            faces[SimplexRef(2, f"T{vx(i, j)}")] = (
                (edge("h", i, j + 1), f1),
                (edge("d", i, j), f1),
                (edge("v", i, j), f1),
            )
    return SimplicialSet(faces, name=name or f"grid({n},{m})")


def torus(n: int = 1, m: int = 1) -> SimplicialSet:
    return grid(n, m, True, True, name=f"torus({n},{m})")


def cylinder(n: int = 3, length: int = 1) -> SimplicialSet:
    """Circle of ``n`` columns times an interval of ``length`` rows."""
    return grid(n, length, True, False, name=f"cylinder({n},{length})")


def real_line(n: int) -> SimplicialSet:
    """Path ``-n .. n``: vertices ``v{i}``, edge ``e{i}`` from ``v{i}`` to ``v{i+1}``."""
    faces = {SimplexRef(0, f"v{i}"): () for i in range(-n, n + 1)}
    for i in range(-n, n):
        faces[SimplexRef(1, f"e{i}")] = (
            (SimplexRef(0, f"v{i + 1}"), (0,)),
            (SimplexRef(0, f"v{i}"), (0,)),
        )
    return SimplicialSet(faces, name=f"real_line({n})")


def half_line(n: int, side: int = 1) -> SimplicialSet:
    """The part of :func:`real_line` on one side of ``v0``, ``side`` in {1, -1}."""
    X = real_line(n)
    if side > 0:
        keep = [r for r in X.faces if _coord(r) >= 0]
    else:
        keep = [r for r in X.faces if (_coord(r) <= 0 if r.dim == 0 else _coord(r) < 0)]
    return X.sub(keep, name=f"half_line({n},{side})")


def _coord(r: SimplexRef) -> int:
    return int(r.id[1:])


def hex_distance(a: int, b: int) -> int:
    return max(abs(a), abs(b), abs(a + b))


def plane_tessellation(radius: int) -> SimplicialSet:
    """Equilateral triangulation of the plane, cut to a hexagon of ``radius``.

    Vertices are axial lattice points ``"a,b"``; vertex ``"0,0"`` is the centre.
    """
    pts = {
        (a, b)
        for a in range(-radius, radius + 1)
        for b in range(-radius, radius + 1)
        if hex_distance(a, b) <= radius
    }
    tops = []
    for a in range(-radius - 1, radius + 1):
        for b in range(-radius - 1, radius + 1):
            tops.extend(_triangles_at(a, b, pts))
    for p in pts:
        tops.append([p])
    return ordered_complex(
        tops,
        name=f"plane_tessellation({radius})",
        label=lambda vs: "|".join(f"{a},{b}" for a, b in vs),
    )


def _triangles_at(a, b, pts):
    up = [(a, b), (a + 1, b), (a, b + 1)]
    down = [(a + 1, b), (a, b + 1), (a + 1, b + 1)]
    return [tri for tri in (up, down) if all(p in pts for p in tri)]


def real_line_exhaustion() -> Exhaustion:
    return Exhaustion(real_line, name="real_line")


def plane_exhaustion() -> Exhaustion:
    return Exhaustion(plane_tessellation, name="plane_tessellation")


def _ints(args):
    return [int(a) for a in args]


FINITE = {
    "simplex": lambda n=2: simplex(n),
    "boundary": lambda n=2: boundary(n),
    "point": point,
    "circle": lambda n=1: circle(n),
    "torus": lambda n=1, m=1: torus(n, m),
    "cylinder": lambda n=3, length=1: cylinder(n, length),
    "real_line": lambda n=2: real_line(n),
    "plane": lambda r=1: plane_tessellation(r),
    "plane_tessellation": lambda r=1: plane_tessellation(r),
}

LOCALLY_FINITE = {
    "real_line": real_line_exhaustion,
    "plane": plane_exhaustion,
    "plane_tessellation": plane_exhaustion,
}


def generators() -> dict[str, Callable[..., SimplicialSet]]:
    """Catalogue of built-in simplicial sets, keyed by name."""
    return dict(FINITE)


def from_spec(spec: str) -> SimplicialSet:
    """Build from ``"name"`` or ``"name:arg,arg"``, e.g. ``"torus:4,1"``."""
    name, _, args = spec.partition(":")
    if name not in FINITE:
        raise ValueError(f"unknown generator {name!r}; known: {', '.join(sorted(FINITE))}")
    return FINITE[name](*_ints(a for a in args.split(",") if a))
