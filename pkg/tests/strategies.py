"""Hypothesis strategies: random polynomial forms and random simplicial sets."""

from __future__ import annotations

from itertools import combinations

from gmpy2 import mpq
from hypothesis import strategies as st

from plderham.generators import ordered_complex
from plderham.nabla import PolyForm, basis
from plderham.simplicial import SimplicialMap, SimplicialSet, SubSet, generated_subset, pushout

rationals = st.builds(
    lambda a, b: mpq(a, b),
    st.integers(-6, 6),
    st.integers(1, 4),
)


@st.composite
def polyforms(draw, p, q, maxdeg=3, max_terms=5):
    keys = basis(p, q, maxdeg)
    if not keys:
        return PolyForm(p, q)
    chosen = draw(st.lists(st.sampled_from(keys), max_size=max_terms, unique=True))
    return PolyForm(p, q, {k: draw(rationals) for k in chosen})


@st.composite
def simplicial_complexes(draw, max_vertices=6, max_dim=3):
    """A random ordered simplicial complex with at least one vertex."""
    n = draw(st.integers(1, max_vertices))
    k = draw(st.integers(0, min(max_dim, n - 1)))
    candidates = [c for d in range(k + 1) for c in combinations(range(n), d + 1)]
    tops = draw(st.lists(st.sampled_from(candidates), min_size=1, max_size=6, unique=True))
    return ordered_complex(tops + [(v,) for v in range(n)], name="random",
                           label=lambda vs: "".join(str(v) for v in vs))


def collapse(X: SimplicialSet, members) -> SimplicialSet:
    """Crush the subset on ``members`` to a point: a pushout with degenerate faces."""
    W = X.sub(members, name="W")
    P = ordered_complex([(0,)], label=lambda vs: "*")
    f = SimplicialMap(W, P, {r: (P.ref(0, "*"), (0,) * (r.dim + 1)) for r in W.faces})
    return pushout(f, SimplicialMap.inclusion(W, X), name="collapsed").X


@st.composite
def simplicial_sets(draw, max_vertices=6, max_dim=3):
    """Random complexes, sometimes with a subcomplex collapsed to a point."""
    X = draw(simplicial_complexes(max_vertices, max_dim))
    if draw(st.booleans()):
        pick = draw(st.lists(st.sampled_from(X.simplices()), min_size=1, max_size=3, unique=True))
        W = generated_subset(X, pick)
        X = collapse(X, W.members)
    return X


@st.composite
def subsets(draw, X: SimplicialSet, max_gen=4):
    gens = draw(st.lists(st.sampled_from(X.simplices()), max_size=max_gen, unique=True))
    return generated_subset(X, gens)


@st.composite
def covers(draw, max_vertices=6, max_dim=3):
    """``(X, U, V)`` with ``U`` and ``V`` covering ``X``."""
    X = draw(simplicial_sets(max_vertices, max_dim))
    U = draw(subsets(X))
    rest = [r for r in X.faces if r not in U.members]
    extra = draw(subsets(X))
    V = SubSet(X, generated_subset(X, rest).members | extra.members)
    return X, U, V


@st.composite
def window_forms(draw, T, q):
    """A random element of degree ``q`` of a truncated form complex ``T``, as coordinates."""
    n = T.dims[q] if q < len(T.dims) else 0
    picks = draw(st.lists(st.integers(0, max(n - 1, 0)), max_size=min(n, 5), unique=True)) if n else []
    return {k: draw(rationals) for k in picks}
