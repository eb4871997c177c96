"""PL bump functions, good intersections and two-set partitions of unity."""

from __future__ import annotations

from dataclasses import dataclass

from .forms import GlobalForm
from .nabla import FormError, PolyForm, extend
from .simplicial import (
    SimplicialSet,
    SubSet,
    complement_closure,
    face_closure,
    generated_subset,
    minimal_neighborhood,
)


class HypothesisError(ValueError):
    """A hypothesis of a construction fails; the message names it."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis violated: {hypothesis}" + (f" ({detail})" if detail else ""))


def _subset(X: SimplicialSet, S) -> SubSet:
    if isinstance(S, SubSet):
        return S
    return generated_subset(X, S)


@dataclass(frozen=True)
class BumpSpec:
    X: SimplicialSet
    L: SubSet
    K: SubSet

    def __post_init__(self):
        eps = minimal_neighborhood(self.X, self.L)
        if not eps.members <= self.K.members:
            extra = min(eps.members - self.K.members)
            raise HypothesisError("epsilon(L) is contained in K", f"{extra} lies outside K")


def bump_function(X: SimplicialSet, L, K=None) -> GlobalForm:
    """A degree-0 form equal to 1 on ``L`` and 0 on ``<X \\ K>``.

    ``K`` defaults to the minimal neighbourhood of ``L``.  Simplices of the
    neighbourhood are filled in order of dimension (then id): constant 1 on
    ``L``, 0 when no iterated face lies in ``L``, and otherwise the
    deterministic extension of the values already fixed on the faces.
    """
    L = _subset(X, L)
    eps = minimal_neighborhood(X, L)
    K = eps if K is None else _subset(X, K)
    BumpSpec(X, L, K)
    phi = GlobalForm(X, 0, {}, check=False)
    for s in sorted(eps.members):
        if s in L:
            phi.values[s] = PolyForm.constant(s.dim, 1)
            continue
        if not face_closure(X, [s]) & L.members:
            continue
        if s.dim == 0:
            continue  # unreachable: a vertex meeting L lies in L
        ws = [phi.at(f) for f in X.faces[s]]
        w = extend(ws, q=0)
        if w.terms:
            phi.values[s] = w
    bad = phi.incompatibility()
    if bad:
        raise FormError(f"bump function fails compatibility at {bad[0]}, face {bad[1]}")
    outside = complement_closure(X, K)
    if not phi.vanishes_on(outside.members):
        raise FormError("bump function does not vanish outside K")
    if not phi.equals_constant_on(L.members, 1):
        raise FormError("bump function is not 1 on L")
    return phi


def difference(X: SimplicialSet, A: SubSet, B: SubSet) -> SubSet:
    """``<A \\ B>``."""
    return generated_subset(X, A.members - B.members)


def check_cover(X: SimplicialSet, U: SubSet, V: SubSet) -> None:
    missing = set(X.faces) - U.members - V.members
    if missing:
        raise HypothesisError("U and V cover X", f"{min(missing)} is in neither")


def intersection_conditions(X: SimplicialSet, U: SubSet, V: SubSet) -> tuple[bool, bool]:
    """``(eps(<V\\U>) <= V, eps(<U\\V>) <= U)``."""
    check_cover(X, U, V)
    a = minimal_neighborhood(X, difference(X, V, U)).members <= V.members
    b = minimal_neighborhood(X, difference(X, U, V)).members <= U.members
    return a, b


def good_intersection(X: SimplicialSet, U, V) -> bool:
    U, V = _subset(X, U), _subset(X, V)
    a, b = intersection_conditions(X, U, V)
    if a != b:
        raise AssertionError("good intersection conditions disagree; symmetry fails")
    return a


def partition_of_unity(X: SimplicialSet, U, V) -> tuple[GlobalForm, GlobalForm]:
    """``(phi_U, phi_V)`` with ``phi_U = 1`` on ``<U\\V>``, ``0`` on ``<X\\U>``, and sum 1."""
    U, V = _subset(X, U), _subset(X, V)
    if not good_intersection(X, U, V):
        raise HypothesisError("U and V have good intersection")
    phi = bump_function(X, difference(X, U, V), U)
    return phi, GlobalForm.constant(X) - phi
