"""Mayer-Vietoris sequences for compactly supported forms, checked by exact ranks.

Version 1 covers a finite ``X`` by simplicial subsets ``U, V`` with good
intersection.  Version 2 starts from a pushout ``X = U +_W V`` along a
proper ``f: W -> U`` and an inclusion ``W -> V``; when the spaces are
locally finite they are given by levelwise truncations and the sequence is
checked on the relative windows ``A(-, <- \\ K_n>)`` that compute ``A_c``.

In both cases the short exact sequence is checked degreewise on truncated
complexes, the long exact sequence is assembled with a zig-zag connecting
map, and the constructive steps of the exactness argument (splitting by a
partition of unity, gluing, bump-function extension) are replayed on
actual forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from . import linalg
from .bump import HypothesisError, bump_function, good_intersection, partition_of_unity
from .cochains import CochainComplex, CohomologyResult, cohomology, induced_on_cohomology, matrix_rank
from .forms import GlobalForm, TruncatedComplex, extend_form, restrict, transport
from .linalg import Vec
from .nabla import FormError
from .simplicial import (
    ProperVerdict,
    SimplicialMap,
    SimplicialSet,
    SubSet,
    complement_closure,
    generated_subset,
    is_proper,
    is_proper_levels,
    minimal_neighborhood,
    pushout,
)

Matrices = list  # per degree, a row-major matrix


# ---------------------------------------------------------------------------
# generic short and long exact sequences
# ---------------------------------------------------------------------------


def _pad(C: CochainComplex, n: int) -> CochainComplex:
    if len(C.dims) >= n:
        return C
    return CochainComplex(list(C.dims) + [0] * (n - len(C.dims)), [list(m) for m in C.d], name=C.name)


def _pad_map(F: Matrices, rows: list[int], n: int) -> Matrices:
    F = list(F)
    while len(F) < n:
        F.append([{} for _ in range(rows[len(F)])])
    return F


def direct_sum(A: CochainComplex, B: CochainComplex) -> CochainComplex:
    n = max(len(A.dims), len(B.dims))
    A, B = _pad(A, n), _pad(B, n)
    dims = [a + b for a, b in zip(A.dims, B.dims)]
    d = []
    for q in range(n - 1):
        off = A.dims[q]
        rows = [dict(r) for r in A.d[q]]
        rows += [{off + k: v for k, v in r.items()} for r in B.d[q]]
        d.append(rows)
    return CochainComplex(dims, d, name=f"{A.name}+{B.name}")


def stack(F: Matrices, G: Matrices, scale_g=1) -> Matrices:
    """``x -> (F x, scale_g * G x)`` degreewise."""
    return [list(f) + [linalg.scaled(mpq(scale_g), r) for r in g] for f, g in zip(F, G)]


def side_by_side(F: Matrices, G: Matrices, cols_f: list[int], scale_f=1, scale_g=1) -> Matrices:
    """``(x, y) -> scale_f * F x + scale_g * G y`` degreewise."""
    out = []
    for q, (f, g) in enumerate(zip(F, G)):
        off = cols_f[q]
        rows = []
        for rf, rg in zip(f, g):
            r = linalg.scaled(mpq(scale_f), rf)
            linalg.axpy(r, mpq(scale_g), {off + k: v for k, v in rg.items()})
            rows.append(r)
        out.append(rows)
    return out


@dataclass
class SesDegree:
    q: int
    composite_zero: bool
    injective: bool
    middle_exact: bool
    surjective: bool
    dims: tuple[int, int, int]
    ranks: tuple[int, int]

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.injective and self.middle_exact and self.surjective


def check_ses(A: CochainComplex, B: CochainComplex, C: CochainComplex, F: Matrices, G: Matrices):
    out = []
    for q in range(len(B.dims)):
        a, b, c = A.dim(q), B.dim(q), C.dim(q)
        rf = linalg.rank(F[q]) if a and b else 0
        rg = linalg.rank(G[q]) if b and c else 0
        zero = not any(linalg.matmul(G[q], F[q])) if a and c else True
        out.append(SesDegree(q, zero, rf == a, rf == b - rg, rg == c, (a, b, c), (rf, rg)))
    return out


@dataclass
class LesNode:
    label: str
    dim: int
    rank_in: int
    rank_out: int

    @property
    def exact(self) -> bool:
        return self.rank_in == self.dim - self.rank_out


@dataclass
class Les:
    betti: tuple[list[int], list[int], list[int]]
    induced_f: list
    induced_g: list
    connecting: list  # connecting[q]: H^q(C) -> H^{q+1}(A)
    nodes: list[LesNode]

    @property
    def exact(self) -> bool:
        return all(n.exact for n in self.nodes)

    def betti_from_sequence(self) -> list[int]:
        """``dim H^q(A)`` read off the sequence: ``rank(delta_{q-1}) + rank(F_q)``."""
        out = []
        for q in range(len(self.betti[0])):
            r_in = matrix_rank(self.connecting[q - 1]) if q > 0 else 0
            out.append(r_in + matrix_rank(self.induced_f[q]))
        return out


def connecting_map(
    A: CochainComplex, B: CochainComplex, C: CochainComplex, F: Matrices, G: Matrices,
    HA: CohomologyResult, HC: CohomologyResult,
):
    """Matrices of ``delta: H^q(C) -> H^{q+1}(A)``, with the lifts used."""
    mats, lifts = [], []
    top = len(B.dims) - 1
    for q in range(top + 1):
        cols, L = [], []
        if q < top and HC.representatives[q]:
            lift = linalg.Solver(G[q], B.dim(q))
            back = linalg.Solver(F[q + 1], A.dim(q + 1))
        for c in HC.representatives[q]:
            if q == top:
                cols.append([])
                continue
            x = lift.solve(c)
            if x is None:
                raise ArithmeticError(f"cannot lift a class of degree {q}: the right map is not onto")
            dx = B.diff(q, x)
            y = back.solve(dx)
            if y is None:
                raise ArithmeticError(f"d of the lift in degree {q} is not in the image of the left map")
            coords, _ = HA.class_of(q + 1, y)
            cols.append(coords)
            L.append((x, y))
        m = HA.betti[q + 1] if q < top else 0
        mats.append([[cols[j][i] for j in range(len(cols))] for i in range(m)])
        lifts.append(L)
    return mats, lifts


def long_exact_sequence(A, B, C, F, G) -> Les:
    HA, HB, HC = cohomology(A), cohomology(B), cohomology(C)
    Fs = induced_on_cohomology(F, HA, HB)
    Gs = induced_on_cohomology(G, HB, HC)
    delta, _ = connecting_map(A, B, C, F, G, HA, HC)
    nodes = []
    top = len(B.dims) - 1
    for q in range(top + 1):
        nodes.append(LesNode(f"H{q}(X)", HA.betti[q],
                             matrix_rank(delta[q - 1]) if q > 0 else 0, matrix_rank(Fs[q])))
        nodes.append(LesNode(f"H{q}(U)+H{q}(V)", HB.betti[q], matrix_rank(Fs[q]), matrix_rank(Gs[q])))
        nodes.append(LesNode(f"H{q}(W)", HC.betti[q], matrix_rank(Gs[q]), matrix_rank(delta[q])))
    return Les((HA.betti, HB.betti, HC.betti), Fs, Gs, delta, nodes)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class MvReport:
    description: str
    version: int
    D: int
    ses: list[SesDegree]
    les: Les
    checks: dict = field(default_factory=dict)  # constructive steps and hypotheses
    level: int | None = None

    @property
    def ses_exact(self) -> bool:
        return all(s.exact for s in self.ses)

    @property
    def les_exact(self) -> bool:
        return self.les.exact

    @property
    def ok(self) -> bool:
        return self.ses_exact and self.les_exact and all(v is not False for v in self.checks.values())

    def as_dict(self) -> dict:
        return {
            "description": self.description,
            "version": self.version,
            "D": self.D,
            "level": self.level,
            "ses": [
                {"q": s.q, "dims": list(s.dims), "ranks": list(s.ranks), "composite_zero": s.composite_zero,
                 "injective": s.injective, "middle_exact": s.middle_exact, "surjective": s.surjective}
                for s in self.ses
            ],
            "betti": {"X": self.les.betti[0], "U+V": self.les.betti[1], "W": self.les.betti[2]},
            "betti_X_from_sequence": self.les.betti_from_sequence(),
            "connecting": [[[str(x) for x in row] for row in M] for M in self.les.connecting],
            "les": [{"node": n.label, "dim": n.dim, "rank_in": n.rank_in, "rank_out": n.rank_out,
                     "exact": n.exact} for n in self.les.nodes],
            "checks": self.checks,
            "ses_exact": self.ses_exact,
            "les_exact": self.les_exact,
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"
        lines = [f"Mayer-Vietoris v{self.version}: {self.description}", f"D: {self.D}"]
        if self.level is not None:
            lines.append(f"level: {self.level}")
        for s in self.ses:
            lines.append(
                f"SES q={s.q} dims={s.dims}: injective {_yn(s.injective)}, middle {_yn(s.middle_exact)}, "
                f"surjective {_yn(s.surjective)}"
            )
        b = self.les.betti
        lines.append(f"betti X={b[0]} U+V={b[1]} W={b[2]}")
        lines.append(f"betti X from sequence: {self.les.betti_from_sequence()}")
        bad = [n.label for n in self.les.nodes if not n.exact]
        lines.append(f"LES exact at all {len(self.les.nodes)} nodes: {_yn(not bad)}" + (f" (fails at {', '.join(bad)})" if bad else ""))
        for k in sorted(self.checks):
            lines.append(f"{k}: {_yn(self.checks[k])}")
        return "\n".join(lines) + "\n"


def _yn(b):
    return "yes" if b else "no"


# ---------------------------------------------------------------------------
# version 1
# ---------------------------------------------------------------------------


def _subset(X, S) -> SubSet:
    return S if isinstance(S, SubSet) else generated_subset(X, S)


def mv_v1(X: SimplicialSet, U, V, D: int = 3, sample: int | None = None) -> MvReport:
    """Check the sequence ``0 -> A(X) -> A(U)+A(V) -> A(U n V) -> 0`` and its LES.

    ``sample`` limits how many basis forms are used in the constructive
    checks (all by default).
    """
    U, V = _subset(X, U), _subset(X, V)
    if not good_intersection(X, U, V):
        raise HypothesisError("U and V have good intersection")
    W = U & V
    XU, XV, XW = U.as_set(), V.as_set(), W.as_set()
    TX, TU, TV, TW = (TruncatedComplex(Y, D) for Y in (X, XU, XV, XW))
    n = len(TX.dims)
    jU = SimplicialMap.inclusion(XU, X)
    jV = SimplicialMap.inclusion(XV, X)
    iU = SimplicialMap.inclusion(XW, XU)
    iV = SimplicialMap.inclusion(XW, XV)
    A = TX.complex
    CU, CV, CW = (_pad(T.complex, n) for T in (TU, TV, TW))
    B = direct_sum(CU, CV)
    resU = _pad_map(TU.pullback_matrices(jU, TX), CU.dims, n)
    resV = _pad_map(TV.pullback_matrices(jV, TX), CV.dims, n)
    theta1 = stack(resU, resV, scale_g=-1)
    wU = _pad_map(TW.pullback_matrices(iU, TU), CW.dims, n)
    wV = _pad_map(TW.pullback_matrices(iV, TV), CW.dims, n)
    theta2 = side_by_side(wU, wV, CU.dims)
    ses = check_ses(A, B, CW, theta1, theta2)
    les = long_exact_sequence(A, B, CW, theta1, theta2)

    checks = {}
    phiU, phiV = partition_of_unity(X, U, V)
    checks["partition sums to 1"] = (phiU + phiV) == GlobalForm.constant(X)
    checks["phi is 1 on <U\\V>"] = phiU.equals_constant_on(
        generated_subset(X, U.members - V.members).members, 1)
    checks["phi is 0 on <X\\U>"] = phiU.vanishes_on(complement_closure(X, U).members)
    checks["splitting recovers omega"] = _check_splitting(X, XU, XV, XW, TW, phiU, phiV, sample)
    checks["gluing"] = _check_gluing_v1(X, XU, XV, TX, TU, TV, theta2, CU.dims, sample)
    return MvReport(f"{X.name or 'X'} covered by U ({len(U)}) and V ({len(V)})", 1, D, ses, les, checks)


def _basis_forms(T: TruncatedComplex, sample):
    for q in range(len(T.dims)):
        k = T.dims[q] if sample is None else min(sample, T.dims[q])
        for j in range(k):
            yield q, j, T.basis_form(q, j)


def _rehost(w: GlobalForm, Y: SimplicialSet) -> GlobalForm:
    return GlobalForm(Y, w.q, dict(w.values), check=False)


def _check_splitting(X, XU, XV, XW, TW, phiU, phiV, sample) -> bool:
    """``theta2(phi_V w, phi_U w) = w`` with both products extended by zero."""
    for q, _, w in _basis_forms(TW, sample):
        a = _rehost(restrict(phiV, XW), XW).wedge(w)
        b = _rehost(restrict(phiU, XW), XW).wedge(w)
        try:
            on_u = GlobalForm(XU, q, a.values)
            on_v = GlobalForm(XV, q, b.values)
        except FormError:
            return False
        total = _rehost(restrict(on_u, XW), XW) + _rehost(restrict(on_v, XW), XW)
        if total != w:
            return False
    return True


def _check_gluing_v1(X, XU, XV, TX, TU, TV, theta2, cols_u, sample) -> bool:
    """Elements of ``ker theta2`` glue to forms on ``X`` restricting to them."""
    for q in range(len(TX.dims)):
        if q >= len(TU.dims) and q >= len(TV.dims):
            continue
        ncols = cols_u[q] + (TV.dims[q] if q < len(TV.dims) else 0)
        K, _ = linalg.nullspace(theta2[q], ncols)
        for x in K[: sample or len(K)]:
            xu = {k: v for k, v in x.items() if k < cols_u[q]}
            xv = {k - cols_u[q]: v for k, v in x.items() if k >= cols_u[q]}
            Phi = TU.form(q, xu) if q < len(TU.dims) else GlobalForm.zero(XU, q)
            Theta = TV.form(q, xv) if q < len(TV.dims) else GlobalForm.zero(XV, q)
            vals = dict(Phi.values)
            for r, v in Theta.values.items():
                vals[r] = -v
            try:
                Psi = GlobalForm(X, q, vals)
            except FormError:
                return False
            if _rehost(restrict(Psi, XU), XU) != _rehost(Phi, XU):
                return False
            if _rehost(restrict(Psi, XV), XV) != _rehost(-Theta, XV):
                return False
    return True


# ---------------------------------------------------------------------------
# version 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PushoutData:
    """``f_n: W_n -> U_n`` and inclusions ``iota_n: W_n -> V_n`` by level.

    Finite data returns the same maps at every level.
    """

    build: Callable[[int], tuple[SimplicialMap, SimplicialMap]]
    name: str = ""
    finite: bool = True

    @classmethod
    def constant(cls, f: SimplicialMap, iota: SimplicialMap, name: str = "") -> PushoutData:
        return cls(lambda n: (f, iota), name=name, finite=True)


def is_locally_finite_levels(build: Callable[[int], SimplicialSet], n_max: int) -> ProperVerdict:
    """Cofaces of each simplex of level 1 are stable between the last two levels."""
    if n_max < 2:
        return ProperVerdict(None, n_max)
    base = build(1)

    def cofaces(Y):
        cnt = {r: 0 for r in base.faces}
        for s, fs in Y.faces.items():
            for b, _ in set(fs):
                if b in cnt:
                    cnt[b] += 1
        return cnt

    a, b = cofaces(build(n_max - 1)), cofaces(build(n_max))
    bad = [r for r in base.faces if a[r] != b[r]]
    return ProperVerdict(not bad, n_max, min(bad) if bad else None)


def mv_v2(data: PushoutData, D: int = 3, n_max: int = 3, level: int | None = None,
          sample: int | None = None) -> MvReport:
    """Check ``0 -> A_c X -> A_c U + A_c V -> A_c W -> 0`` for a pushout and its LES.

    For locally finite data the relative windows at ``level`` (default
    ``n_max - 1``) on host truncation ``n_max`` are used.
    """
    f1, i1 = data.build(1)
    if not i1.is_injective():
        raise HypothesisError("iota is an inclusion")
    if data.finite:
        pf = is_proper(f1)
        lf = ProperVerdict(True)
    else:
        pf = is_proper_levels(lambda n: data.build(n)[0], n_max)
        lf = is_locally_finite_levels(lambda n: data.build(n)[1].target, n_max)
    if not pf.proper:
        detail = f"preimage over {pf.witness} grows with the truncation" if pf.witness else "indeterminate"
        raise HypothesisError("f is proper", detail)
    if not lf.proper:
        raise HypothesisError("V is locally finite", f"cofaces of {lf.witness} grow")

    P = {n: pushout(*data.build(n), name=data.name) for n in range(1, n_max + 1)}
    if data.finite:
        pg, ph = is_proper(P[1].g), is_proper(P[1].h)
    else:
        pg = is_proper_levels(lambda n: P[n].g, n_max)
        ph = is_proper_levels(lambda n: P[n].h, n_max)

    host = n_max
    f, iota = data.build(host)
    Po = P[host]
    X, g, h = Po.X, Po.g, Po.h
    U, V, W = f.target, iota.target, f.source
    if data.finite:
        lev = None
        CX = frozenset()
    else:
        lev = level if level is not None else n_max - 1
        K = SubSet(X, frozenset(P[lev].X.faces))
        CX = complement_closure(X, K).members
    CU = frozenset(h.preimage(CX))
    CV = frozenset(g.preimage(CX))
    CW = frozenset(iota.preimage(CV))
    TX, TU, TV, TW = TruncatedComplex(X, D, CX), TruncatedComplex(U, D, CU), \
        TruncatedComplex(V, D, CV), TruncatedComplex(W, D, CW)
    n = len(TX.dims)
    A = TX.complex
    PU, PV, PW = (_pad(T.complex, n) for T in (TU, TV, TW))
    B = direct_sum(PU, PV)
    left = stack(_pad_map(TU.pullback_matrices(h, TX), PU.dims, n),
                 _pad_map(TV.pullback_matrices(g, TX), PV.dims, n))
    right = side_by_side(_pad_map(TW.pullback_matrices(f, TU), PW.dims, n),
                         _pad_map(TW.pullback_matrices(iota, TV), PW.dims, n),
                         PU.dims, scale_f=-1, scale_g=1)
    ses = check_ses(A, B, PW, left, right)
    les = long_exact_sequence(A, B, PW, left, right)
    checks = {
        "f is proper": bool(pf.proper),
        "V is locally finite": bool(lf.proper),
        "g is proper": bool(pg.proper),
        "h is proper": bool(ph.proper),
        "h is an inclusion": h.is_injective(),
        "bump extension psi*omega0": _check_psi(TW, iota, V, sample),
    }
    if lev is not None and lev > 1:
        K0 = SubSet(X, frozenset(P[lev - 1].X.faces))
        prev = TruncatedComplex(X, D, complement_closure(X, K0).members)
        checks["stable over levels"] = cohomology(prev.complex).betti == les.betti[0]
    desc = f"pushout {data.name or 'X'} (W={len(W)}, U={len(U)}, V={len(V)} simplices)"
    return MvReport(desc, 2, D, ses, les, checks, lev)


def _check_psi(TW: TruncatedComplex, iota: SimplicialMap, V: SimplicialSet, sample) -> bool:
    """Each window form on ``W`` extends to a compactly supported form on ``V``.

    The extension is ``psi * omega0``: ``omega0`` extends skeleton by
    skeleton, ``psi`` is a bump function equal to 1 on the support.
    """
    image = frozenset(b for b, _ in iota.images.values())
    for q, _, w in _basis_forms(TW, sample):
        w0 = extend_form(transport(w, iota), image)
        supp = generated_subset(V, (iota(r)[0] for r in w.values))
        eps = minimal_neighborhood(V, supp)
        psi = bump_function(V, supp, eps)
        ext = psi.wedge(w0)
        if not ext.is_compatible():
            return False
        if not ext.vanishes_on(complement_closure(V, eps).members):
            return False
        back = GlobalForm(TW.X, q, {r: ext[iota(r)[0]] for r in TW.X.faces}, check=False)
        if back != _rehost(w, TW.X):
            return False
    return True


# ---------------------------------------------------------------------------
# named instances
# ---------------------------------------------------------------------------


def circle_arcs():
    """Hexagonal circle covered by two arcs of four edges each."""
    from .generators import circle

    X = circle(6)
    arc = lambda es: generated_subset(X, [X.ref(1, e) for e in es])  # noqa: E731
    return X, arc(["5|0", "0|1", "1|2", "2|3"]), arc(["2|3", "3|4", "4|5", "5|0"])


def torus_cylinders():
    """Torus of four columns covered by the cylinders over columns {3,0,1} and {1,2,3}."""
    from .generators import torus

    X = torus(4, 1)

    def columns(cs):
        return generated_subset(X, [r for r in X.simplices(2) if int(r.id[1:].split(",")[0]) in cs])

    return X, columns({3, 0, 1}), columns({1, 2, 3})


def trivial_cover():
    from .generators import circle

    X = circle(6)
    return X, SubSet.everything(X), SubSet.everything(X)


V1_INSTANCES = {
    "circle-arcs": circle_arcs,
    "torus-cylinders": torus_cylinders,
    "trivial-cover": trivial_cover,
}


def disjoint_pushout() -> PushoutData:
    """``W`` empty: the pushout is the disjoint union of a circle and a triangle."""
    from .generators import circle, simplex

    U, V = circle(2), simplex(2)
    W = V.sub([], name="empty")
    return PushoutData.constant(SimplicialMap(W, U, {}), SimplicialMap(W, V, {}), "circle+triangle")


def circle_pushout() -> PushoutData:
    """The interval with both endpoints sent to a point."""
    from .generators import point, simplex

    V = simplex(1)
    W = V.sub([V.ref(0, 0), V.ref(0, 1)], name="endpoints")
    U = point()
    f = SimplicialMap(W, U, {r: (U.ref(0, 0), (0,)) for r in W.faces})
    return PushoutData.constant(f, SimplicialMap.inclusion(W, V), "circle")


def real_line_pushout() -> PushoutData:
    """Two half-lines glued at ``v0``, by truncation level."""
    from .generators import half_line

    def build(n):
        U, V = half_line(n, 1), half_line(n, -1)
        W = U.sub([U.ref(0, "v0")], name="v0")
        return SimplicialMap.inclusion(W, U), SimplicialMap.inclusion(W, V)

    return PushoutData(build, "real_line", finite=False)


def collapse_pushout() -> PushoutData:
    """``f`` collapses the real line to a point: not proper."""
    from .generators import point, real_line

    def build(n):
        L, P = real_line(n), point()
        f = SimplicialMap(L, P, {r: (P.ref(0, 0), (0,) * (r.dim + 1)) for r in L.faces})
        return f, SimplicialMap.identity(L)

    return PushoutData(build, "line_to_point", finite=False)


V2_INSTANCES = {
    "disjoint": disjoint_pushout,
    "circle-pushout": circle_pushout,
    "real-line-pushout": real_line_pushout,
    "collapse": collapse_pushout,
}
