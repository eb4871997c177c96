"""Line-oriented text format for simplicial sets, subsets and maps.

::

    # comments and blank lines are ignored
    space circle(2)
    0 0 :
    0 1 :
    1 0|1 : 1 0
    1 1|0 : 0 1
    subset arc : 1:0|1
    map f : W -> U
    0 a -> 0
    1 e -> 0[s0]

A simplex record is ``dim id : face_0 ... face_dim``.  A face is the id of
a non-degenerate simplex, followed by ``[s_j1 s_j2 ...]`` (written without
spaces, increasing ``j``) when the face is degenerate; its dimension is
implied by the record's dimension and the word length.  ``subset`` records
list ``dim:id`` members of the current space.  A ``map`` section gives the
image of every non-degenerate simplex of its source space in the same
notation as faces.  Rendering is canonical, so ``render(parse(t)) == t``
for rendered text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .simplicial import (
    SimplexRef,
    SimplicialError,
    SimplicialMap,
    SimplicialSet,
    SubSet,
    deg_of,
    word_of,
)


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"line {line}: {msg}")


@dataclass
class Document:
    spaces: dict[str, SimplicialSet] = field(default_factory=dict)
    subsets: dict[str, SubSet] = field(default_factory=dict)
    maps: dict[str, SimplicialMap] = field(default_factory=dict)

    @property
    def space(self) -> SimplicialSet:
        """The only (or first) space."""
        if not self.spaces:
            raise ValueError("document holds no space")
        return next(iter(self.spaces.values()))


def face_token(base: SimplexRef, deg) -> str:
    w = word_of(deg)
    return base.id if not w else base.id + "[" + "".join(f"s{j}" for j in w) + "]"


def _parse_face(tok: str, n: int, line: int) -> tuple[SimplexRef, tuple[int, ...]]:
    """A face (``n`` = dimension of the face) or map image (``n`` = source dimension)."""
    if tok.endswith("]") and "[" in tok:
        ident, _, rest = tok[:-1].partition("[")
        parts = rest.split("s")
        if parts[0] != "" or any(not p.isdigit() for p in parts[1:]):
            raise ParseError(line, f"bad degeneracy word in {tok!r}")
        word = [int(p) for p in parts[1:]]
    else:
        ident, word = tok, []
    if word != sorted(set(word)) or any(j >= n for j in word):
        raise ParseError(line, f"degeneracy word in {tok!r} is not strictly increasing below {n}")
    m = n - len(word)
    if m < 0:
        raise ParseError(line, f"degeneracy word in {tok!r} is too long")
    return SimplexRef(m, ident), deg_of(word, n)


def parse(text: str) -> Document:
    doc = Document()
    records: list[tuple[str, dict, dict]] = []  # (name, faces, lines)
    pending_subsets: list[tuple[int, str, str, list[str]]] = []
    maps: list[tuple[int, str, str, str, list[tuple[int, str]]]] = []
    current = None
    mode = "space"

    def new_space(name):
        rec = (name, {}, {})
        records.append(rec)
        return rec

    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()[0]
        if head == "space":
            current = new_space(line[len("space"):].strip())
            mode = "space"
            continue
        if head == "subset":
            if current is None:
                raise ParseError(no, "subset before any simplex")
            left, sep, right = line.partition(":")
            parts = left.split()
            if not sep or len(parts) != 2:
                raise ParseError(no, "expected 'subset NAME : dim:id ...'")
            pending_subsets.append((no, current[0], parts[1], right.split()))
            continue
        if head == "map":
            left, sep, right = line.partition(":")
            parts = left.split()
            src, arrow, tgt = (right.split() + ["", "", ""])[:3]
            if not sep or len(parts) != 2 or arrow != "->":
                raise ParseError(no, "expected 'map NAME : SOURCE -> TARGET'")
            maps.append((no, parts[1], src, tgt, []))
            mode = "map"
            continue
        if mode == "map":
            maps[-1][4].append((no, line))
            continue
        if current is None:
            current = new_space("")
        left, sep, right = line.partition(":")
        parts = left.split()
        if not sep or len(parts) != 2:
            raise ParseError(no, "expected 'dim id : faces'")
        try:
            n = int(parts[0])
        except ValueError:
            raise ParseError(no, f"dimension {parts[0]!r} is not an integer") from None
        if n < 0:
            raise ParseError(no, "negative dimension")
        ref = SimplexRef(n, parts[1])
        toks = right.split()
        if len(toks) != (n + 1 if n else 0):
            raise ParseError(no, f"{n}-simplex {parts[1]} needs {n + 1 if n else 0} faces, got {len(toks)}")
        if ref in current[1]:
            raise ParseError(no, f"duplicate simplex {n} {parts[1]}")
        current[1][ref] = tuple(_parse_face(t, n - 1, no) for t in toks)
        current[2][ref] = no

    for name, faces, lines in records:
        try:
            X = SimplicialSet(faces, name=name)
        except SimplicialError as e:
            raise ParseError(_blame(str(e), lines), str(e)) from None
        doc.spaces[name] = X
    for no, sname, name, toks in pending_subsets:
        X = doc.spaces[sname]
        members = []
        for t in toks:
            d, _, i = t.partition(":")
            if not d.isdigit():
                raise ParseError(no, f"bad member {t!r}")
            members.append(SimplexRef(int(d), i))
        try:
            doc.subsets[name] = SubSet(X, frozenset(members))
        except SimplicialError as e:
            raise ParseError(no, str(e)) from None
    for no, name, src, tgt, rows in maps:
        if src not in doc.spaces or tgt not in doc.spaces:
            raise ParseError(no, f"map {name} refers to an unknown space")
        images = {}
        for lno, row in rows:
            left, sep, right = row.partition("->")
            parts = left.split()
            if not sep or len(parts) != 2 or len(right.split()) != 1:
                raise ParseError(lno, "expected 'dim id -> image'")
            n = int(parts[0])
            images[SimplexRef(n, parts[1])] = _parse_face(right.strip(), n, lno)
        try:
            doc.maps[name] = SimplicialMap(doc.spaces[src], doc.spaces[tgt], images)
        except SimplicialError as e:
            raise ParseError(no, f"map {name}: {e}") from None
    return doc


def _blame(msg: str, lines: dict) -> int:
    """Line of the simplex named in a validator message (0 if none)."""
    hits = [(len(str(ref)), no) for ref, no in lines.items() if str(ref) in msg]
    return max(hits)[1] if hits else 0


def load(text: str) -> SimplicialSet:
    return parse(text).space


def render(X: SimplicialSet, subsets: dict[str, SubSet] | None = None) -> str:
    lines = []
    if X.name:
        lines.append(f"space {X.name}")
    for r in X.simplices():
        faces = " ".join(face_token(b, d) for b, d in X.faces[r])
        lines.append(f"{r.dim} {r.id} :" + (f" {faces}" if faces else ""))
    for name in sorted(subsets or {}):
        mem = " ".join(f"{r.dim}:{r.id}" for r in sorted(subsets[name].members))
        lines.append(f"subset {name} :" + (f" {mem}" if mem else ""))
    return "\n".join(lines) + "\n"


def render_map(name: str, f: SimplicialMap, source: str, target: str) -> str:
    lines = [f"map {name} : {source} -> {target}"]
    for r in f.source.simplices():
        lines.append(f"{r.dim} {r.id} -> {face_token(*f.images[r])}")
    return "\n".join(lines) + "\n"


def render_document(doc: Document) -> str:
    parts = []
    for name, X in doc.spaces.items():
        subs = {k: s for k, s in doc.subsets.items() if s.host is X}
        parts.append(render(X, subs))
    names = {id(X): n for n, X in doc.spaces.items()}
    for name, f in doc.maps.items():
        parts.append(render_map(name, f, names[id(f.source)], names[id(f.target)]))
    return "".join(parts)
