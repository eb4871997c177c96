"""Integration of forms over simplices and the resulting cohomology comparisons.

Three comparisons are supported: absolute (finite ``X``), relative
(``X`` with a simplicial subset ``A``) and compactly supported (a locally
finite ``X`` given by an exhaustion).  Each produces a
:class:`ComparisonReport` holding the matrices from which its verdicts
are recomputed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import linalg
from .cochains import (
    CochainComplex,
    CohomologyResult,
    cohomology,
    cup,
    extension_by_zero,
    induced_on_cohomology,
    is_chain_map,
    is_isomorphism,
    normalized_cochains,
)
from .forms import GlobalForm, TruncatedComplex
from .linalg import Vec
from .simplicial import Exhaustion, SimplicialSet, SubSet, complement_closure


def rho_form(w: GlobalForm, NC: CochainComplex) -> Vec:
    """The cochain ``sigma -> integral of w over sigma``."""
    q = w.q
    if q >= len(NC.dims):
        return {}
    out = {}
    for k, s in enumerate(NC.labels[q]):
        v = w[s]
        if v.terms:
            x = v.integrate()
            if x:
                out[k] = x
    return out


@dataclass
class RhoMap:
    """``rho: A_D(X, A) -> NC(X, A)`` with both complexes attached."""

    forms: TruncatedComplex
    cochains: CochainComplex
    matrices: list[list[Vec]]

    def is_chain_map(self) -> bool:
        return is_chain_map(self.matrices, self.forms.complex, self.cochains)

    def __call__(self, q: int, coords: Vec) -> Vec:
        return linalg.apply(self.matrices[q], coords)


def rho(X: SimplicialSet, D: int | None = None) -> RhoMap:
    return rho_relative(X, None, D)


def rho_relative(X: SimplicialSet, A: SubSet | None, D: int | None = None) -> RhoMap:
    D = max(X.dim, 1) if D is None else D
    T = TruncatedComplex(X, D, A)
    NC = normalized_cochains(X, A, top=len(T.dims) - 1)
    return RhoMap(T, NC, T.rho(NC))


def rho_compact(E: Exhaustion, n: int, D: int | None = None, host_level: int | None = None) -> RhoMap:
    """``rho`` on the window ``A(X, <X \\ K_n>)``, computed on a host truncation."""
    host, K = E.window(n, host_level)
    D = max(host.dim, 1) if D is None else D
    return rho_relative(host, complement_closure(host, K), D)


# ---------------------------------------------------------------------------
# colimits
# ---------------------------------------------------------------------------


@dataclass
class ColimitResult:
    """Directed system ``H(X, <X \\ K_n>)`` and its stabilization certificate."""

    betti_levels: list[list[int]]
    maps: list[list[list]]  # maps[k][q]: level k+1 -> level k+2 (1-based levels)
    stable_level: int | None
    n_max: int
    complexes: list = field(default_factory=list, repr=False)
    cohomologies: list[CohomologyResult] = field(default_factory=list, repr=False)

    @property
    def stabilized(self) -> bool:
        return self.stable_level is not None

    @property
    def betti(self) -> list[int] | None:
        if self.stable_level is None:
            return None
        return self.betti_levels[self.stable_level - 1]

    def certificate(self) -> str:
        if self.stable_level is None:
            return f"not stabilized at n_max={self.n_max}"
        n = self.stable_level
        return f"stable from n={n}: maps H_{n}->H_{n + 1}->H_{n + 2} are isomorphisms"


def _stable_level(betti_levels, maps) -> int | None:
    isos = []
    for k, M in enumerate(maps):
        isos.append(
            all(
                is_isomorphism(M[q], betti_levels[k + 1][q], betti_levels[k][q])
                for q in range(len(M))
            )
        )
    for k in range(len(isos) - 1):
        if isos[k] and isos[k + 1]:
            return k + 1
    return None


def colimit_Hc(
    E: Exhaustion, n_max: int = 4, D: int | None = None, theory: str = "forms"
) -> ColimitResult:
    """Compute ``H(X, <X \\ K_n>)`` for ``n <= n_max`` and the maps between levels.

    All levels share the host truncation ``n_max + 1``, which contains the
    minimal neighbourhood of every ``K_n`` for the built-in exhaustions, so
    each relative complex agrees with its counterpart on the infinite set.
    ``theory`` is ``"forms"`` (truncated A-complexes) or ``"cochains"``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    host = E.level(n_max + 1)
    D = max(host.dim, 1) if D is None else D
    complexes = []
    for n in range(1, n_max + 1):
        _, K = E.window(n, n_max + 1)
        A = complement_closure(host, K)
        if theory == "forms":
            complexes.append(TruncatedComplex(host, D, A))
        elif theory == "cochains":
            complexes.append(normalized_cochains(host, A))
        else:
            raise ValueError(f"unknown theory {theory!r}")
    Hs = [cohomology(_complex(C)) for C in complexes]
    maps = []
    for k in range(len(complexes) - 1):
        F = _inclusion(complexes[k], complexes[k + 1])
        maps.append(induced_on_cohomology(F, Hs[k], Hs[k + 1]))
    betti = [H.betti for H in Hs]
    stable = 1 if E.finite else _stable_level(betti, maps)
    return ColimitResult(betti, maps, stable, n_max, complexes, Hs)


def _complex(C):
    return C.complex if isinstance(C, TruncatedComplex) else C


def _inclusion(C, C2):
    if isinstance(C, TruncatedComplex):
        return C2.inclusion_from(C)
    return extension_by_zero(C, C2)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class Witness:
    p: int
    q: int
    i: int
    j: int
    coboundary: Vec  # y with rho(a ^ b) - rho(a) cup rho(b) = d y

    def as_dict(self):
        return {"p": self.p, "q": self.q, "i": self.i, "j": self.j,
                "coboundary": {str(k): str(v) for k, v in sorted(self.coboundary.items())}}


@dataclass
class ComparisonReport:
    space: str
    D: int
    betti_forms: list[int]
    betti_forms_next: list[int]
    betti_cochains: list[int]
    rho_matrices: list[list[list]]
    multiplicative: bool | None = None
    witnesses: list[Witness] = field(default_factory=list)
    kind: str = "absolute"
    stable_level: int | None = None
    certificate: str = ""

    @property
    def stabilized(self) -> bool:
        return self.betti_forms == self.betti_forms_next and (
            self.kind != "compact" or self.stable_level is not None
        )

    @property
    def isomorphism(self) -> bool:
        if self.betti_forms != self.betti_cochains:
            return False
        return all(
            is_isomorphism(M, self.betti_cochains[q], self.betti_forms[q])
            for q, M in enumerate(self.rho_matrices)
        )

    @property
    def ok(self) -> bool:
        return self.isomorphism and self.stabilized and self.multiplicative is not False

    def as_dict(self) -> dict:
        return {
            "space": self.space,
            "kind": self.kind,
            "D": self.D,
            "betti_forms": self.betti_forms,
            "betti_forms_D+1": self.betti_forms_next,
            "betti_cochains": self.betti_cochains,
            "rho_on_cohomology": [[[str(x) for x in row] for row in M] for M in self.rho_matrices],
            "isomorphism": self.isomorphism,
            "stabilized": self.stabilized,
            "stable_level": self.stable_level,
            "multiplicative": self.multiplicative,
            "witnesses": [w.as_dict() for w in self.witnesses],
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"
        lines = [
            f"space: {self.space} ({self.kind})",
            f"D: {self.D}",
            f"betti A (D):   {self.betti_forms}",
            f"betti A (D+1): {self.betti_forms_next}",
            f"betti NC:      {self.betti_cochains}",
        ]
        for q, M in enumerate(self.rho_matrices):
            if M:
                rows = "; ".join(" ".join(str(x) for x in row) for row in M)
                lines.append(f"rho on H^{q}: [{rows}]")
        if self.certificate:
            lines.append(f"stabilization: {self.certificate}")
        lines.append(f"isomorphism: {_yn(self.isomorphism)}")
        lines.append(f"stabilized D->D+1: {_yn(self.stabilized)}")
        m = "n/a" if self.multiplicative is None else _yn(self.multiplicative)
        lines.append(f"multiplicative: {m} ({len(self.witnesses)} pairs)")
        return "\n".join(lines) + "\n"


def _yn(b):
    return "yes" if b else "no"


def _multiplicativity(R: RhoMap, HA: CohomologyResult, HC: CohomologyResult):
    """Compare ``rho(a ^ b)`` with ``rho(a) cup rho(b)`` on representative pairs."""
    T, NC = R.forms, R.cochains
    X = T.X
    top = min(len(HA.betti), len(HC.betti)) - 1
    witnesses, ok, any_pair = [], True, False
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for i, a in enumerate(HA.representatives[p]):
                for j, b in enumerate(HA.representatives[q]):
                    any_pair = True
                    wa, wb = T.form(p, a), T.form(q, b)
                    lhs = rho_form(wa.wedge(wb), NC)
                    rhs = cup(X, NC, R(p, a), p, R(q, b), q)
                    diff = dict(lhs)
                    linalg.axpy(diff, -1, rhs)
                    y = HC.is_coboundary(p + q, diff)
                    if y is None:
                        ok = False
                    else:
                        witnesses.append(Witness(p, q, i, j, y))
    return (ok if any_pair else None), witnesses


def _compare(R: RhoMap, R_next: RhoMap, name: str, kind: str, multiplicative: bool = True):
    HA = cohomology(R.forms.complex)
    HA2 = cohomology(R_next.forms.complex)
    HC = cohomology(R.cochains)
    if not R.is_chain_map():
        raise AssertionError("rho is not a chain map")
    M = induced_on_cohomology(R.matrices, HA, HC)
    mult, wit = _multiplicativity(R, HA, HC) if multiplicative else (None, [])
    return ComparisonReport(
        space=name,
        D=R.forms.D,
        betti_forms=HA.betti,
        betti_forms_next=HA2.betti,
        betti_cochains=HC.betti,
        rho_matrices=M,
        multiplicative=mult,
        witnesses=wit,
        kind=kind,
    )


def derham_check(X: SimplicialSet, D: int | None = None, A: SubSet | None = None,
                 multiplicative: bool = True) -> ComparisonReport:
    """Absolute (``A`` None) or relative comparison at ``D`` with a ``D + 1`` rerun."""
    D = max(X.dim, 1) if D is None else D
    R = rho_relative(X, A, D)
    R2 = rho_relative(X, A, D + 1)
    kind = "absolute" if A is None else "relative"
    return _compare(R, R2, X.name or "X", kind, multiplicative)


def derham_check_compact(E: Exhaustion, n_max: int = 4, D: int | None = None,
                         multiplicative: bool = True) -> ComparisonReport:
    """Compactly supported comparison through the directed systems on both sides.

    Both colimits are computed; ``rho`` is then compared on the window at the
    stable level of the forms side.
    """
    host = E.level(n_max + 1)
    D = max(host.dim, 1) if D is None else D
    CA = colimit_Hc(E, n_max, D, "forms")
    CC = colimit_Hc(E, n_max, D, "cochains")
    n = CA.stable_level or n_max
    R = rho_compact(E, n, D, n_max + 1)
    R2 = rho_compact(E, n, D + 1, n_max + 1)
    rep = _compare(R, R2, E.name or "X", "compact", multiplicative)
    if CA.stable_level != CC.stable_level or CA.betti != CC.betti:
        rep.stable_level = None
        rep.certificate = f"forms: {CA.certificate()}; cochains: {CC.certificate()}"
    else:
        rep.stable_level = CA.stable_level
        rep.certificate = CA.certificate()
    return rep
