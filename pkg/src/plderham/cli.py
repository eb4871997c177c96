"""Command-line front end.

Every command takes an input that is either a path to a file in the text
format of :mod:`plderham.textio` or a generator spec such as ``torus:4,1``.
Output goes to stdout or ``--out``; with ``--strict`` any negative verdict
gives exit status 2.  Errors exit with status 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import generators, textio
from .bump import HypothesisError, bump_function
from .cochains import cohomology, normalized_cochains
from .derham import colimit_Hc, derham_check, derham_check_compact
from .forms import TruncatedComplex
from .mv import V1_INSTANCES, V2_INSTANCES, PushoutData, mv_v1, mv_v2
from .nabla import FormError
from .simplicial import Exhaustion, SimplicialError, SubSet, generated_subset, minimal_neighborhood

COMMANDS = ("validate", "cohomology", "cohomology-compact", "derham-check", "mv-check", "bump", "generate")


@dataclass(frozen=True)
class JobConfig:
    command: str
    input: str | None = None
    degree: int | None = None
    exhaustion: int = 4
    out: str | None = None
    format: str = "text"
    strict: bool = False
    subset: str | None = None
    cover: tuple[str, str] | None = None
    version: int = 1
    maps: tuple[str, str] | None = None
    L: tuple[str, ...] = ()
    K: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.degree is not None and self.degree < 1:
            raise ValueError("--degree must be at least 1")
        if self.exhaustion < 1:
            raise ValueError("--exhaustion must be at least 1")
        if self.format not in ("text", "structured"):
            raise ValueError("--format is text or structured")


class CliError(Exception):
    pass


def _read(spec: str) -> textio.Document:
    if spec is None:
        raise CliError("an input file or generator spec is required")
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return textio.parse(fh.read())
    try:
        X = generators.from_spec(spec)
    except ValueError as e:
        raise CliError(f"{spec!r} is neither a file nor a generator: {e}") from None
    return textio.Document(spaces={X.name: X})


def _exhaustion(spec: str) -> Exhaustion:
    name = spec.partition(":")[0]
    if name in generators.LOCALLY_FINITE:
        return generators.LOCALLY_FINITE[name]()
    return Exhaustion.constant(_read(spec).space)


def _dump(obj, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    lines = []
    for k, v in obj.items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _yes(b) -> str:
    return "yes" if b else "no"


def run(cfg: JobConfig) -> tuple[str, bool]:
    """Execute a job; return ``(report, all verdicts positive)``."""
    c = cfg.command
    if c == "generate":
        doc = _read(cfg.input)
        return textio.render_document(doc), True

    if c == "validate":
        doc = _read(cfg.input)
        info = {
            "valid": "yes",
            "spaces": {n or "-": list(X.counts()) for n, X in doc.spaces.items()},
            "subsets": sorted(doc.subsets),
            "maps": sorted(doc.maps),
        }
        if cfg.format == "text":
            info["spaces"] = "; ".join(f"{k} {v}" for k, v in info["spaces"].items())
            info["subsets"] = " ".join(info["subsets"]) or "-"
            info["maps"] = " ".join(info["maps"]) or "-"
        return _dump(info, cfg.format), True

    if c == "cohomology":
        doc = _read(cfg.input)
        X = doc.space
        A = doc.subsets[cfg.subset] if cfg.subset else None
        D = cfg.degree or max(X.dim, 1)
        HC = cohomology(normalized_cochains(X, A))
        HA = cohomology(TruncatedComplex(X, D, A).complex)
        HA2 = cohomology(TruncatedComplex(X, D + 1, A).complex)
        ok = HA.betti == HC.betti == HA2.betti
        info = {"space": X.name or "-", "relative_to": cfg.subset or "-", "D": D,
                "betti_cochains": HC.betti, "betti_forms": HA.betti, "betti_forms_D+1": HA2.betti,
                "agree": _yes(ok) if cfg.format == "text" else ok}
        return _dump(info, cfg.format), ok

    if c == "cohomology-compact":
        E = _exhaustion(cfg.input)
        n = cfg.exhaustion
        R = colimit_Hc(E, n, cfg.degree)
        RC = colimit_Hc(E, n, cfg.degree, theory="cochains")
        ok = R.stabilized and R.betti == RC.betti
        info = {"space": E.name, "n_max": n, "betti_levels": R.betti_levels,
                "Hc_forms": R.betti, "Hc_cochains": RC.betti, "certificate": R.certificate(),
                "agree": _yes(ok) if cfg.format == "text" else ok}
        return _dump(info, cfg.format), ok

    if c == "derham-check":
        name = (cfg.input or "").partition(":")[0]
        if name in generators.LOCALLY_FINITE and not os.path.exists(cfg.input):
            rep = derham_check_compact(_exhaustion(cfg.input), cfg.exhaustion, cfg.degree)
        else:
            doc = _read(cfg.input)
            A = doc.subsets[cfg.subset] if cfg.subset else None
            rep = derham_check(doc.space, cfg.degree, A)
        return rep.render(cfg.format), rep.ok

    if c == "mv-check":
        D = cfg.degree or 3
        if cfg.version == 1:
            if cfg.input in V1_INSTANCES:
                X, U, V = V1_INSTANCES[cfg.input]()
            else:
                doc = _read(cfg.input)
                if not cfg.cover:
                    raise CliError("mv-check v1 needs --cover U,V naming two subsets")
                X, U, V = doc.space, doc.subsets[cfg.cover[0]], doc.subsets[cfg.cover[1]]
            rep = mv_v1(X, U, V, D)
        else:
            if cfg.input in V2_INSTANCES:
                data = V2_INSTANCES[cfg.input]()
            else:
                doc = _read(cfg.input)
                if not cfg.maps:
                    raise CliError("mv-check v2 needs --maps f,iota naming two maps")
                data = PushoutData.constant(doc.maps[cfg.maps[0]], doc.maps[cfg.maps[1]], "pushout")
            rep = mv_v2(data, D, max(cfg.exhaustion, 2))
        return rep.render(cfg.format), rep.ok

    if c == "bump":
        doc = _read(cfg.input)
        X = doc.space
        if not cfg.L:
            raise CliError("bump needs --L with vertex ids or a subset name")
        if len(cfg.L) == 1 and cfg.L[0] in doc.subsets:
            L = doc.subsets[cfg.L[0]]
        else:
            L = generated_subset(X, [X.ref(0, v) for v in cfg.L])
        K = doc.subsets[cfg.K] if cfg.K else minimal_neighborhood(X, L)
        phi = bump_function(X, L, K)
        if cfg.format == "structured":
            body = {"space": X.name, "L": [str(r) for r in sorted(L.members)],
                    "K": [str(r) for r in sorted(K.members)],
                    "form": {str(r): phi.values[r].render() for r in sorted(phi.values)}}
            return json.dumps(body, indent=2, sort_keys=True) + "\n", True
        return phi.render(), True

    raise CliError(f"unknown command {c}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plderham", description="Polynomial de Rham theory on simplicial sets.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="file in the simplicial-set text format, generator spec or instance name")
    p.add_argument("--degree", "-D", type=int, help="total-degree bound D of the form windows")
    p.add_argument("--exhaustion", type=int, default=4, help="exhaustion depth n_max")
    p.add_argument("--strict", action="store_true", help="exit 2 on any negative verdict")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--subset", help="relative computations: name of the subset A")
    p.add_argument("--cover", help="mv-check v1: two subset names U,V")
    p.add_argument("--mv-version", type=int, choices=(1, 2), default=1, dest="version")
    p.add_argument("--maps", help="mv-check v2: map names f,iota")
    p.add_argument("--L", nargs="+", default=(), help="bump: vertex ids or one subset name")
    p.add_argument("--K", help="bump: subset name of the neighbourhood K")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(
            command=args.command, input=args.input, degree=args.degree, exhaustion=args.exhaustion,
            out=args.out, format=args.format, strict=args.strict, subset=args.subset,
            cover=tuple(args.cover.split(",")) if args.cover else None, version=args.version,
            maps=tuple(args.maps.split(",")) if args.maps else None, L=tuple(args.L), K=args.K,
        )
        report, ok = run(cfg)
    except textio.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except HypothesisError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (CliError, SimplicialError, FormError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return 2 if cfg.strict and not ok else 0
