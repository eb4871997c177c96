import json

import pytest
from hypothesis import given, settings

from plderham import generators as G
from plderham import linalg
from plderham.bump import HypothesisError, good_intersection
from plderham.cochains import CochainComplex
from plderham.generators import ordered_complex
from plderham.mv import (
    V1_INSTANCES,
    V2_INSTANCES,
    PushoutData,
    check_ses,
    long_exact_sequence,
    mv_v1,
    mv_v2,
)
from plderham.simplicial import SimplicialMap, SubSet, generated_subset
from strategies import covers


def test_circle_arcs_recovers_betti():
    rep = mv_v1(*V1_INSTANCES["circle-arcs"](), D=3)
    assert rep.ok
    assert rep.les.betti[0] == [1, 1]
    assert rep.les.betti[2] == [2, 0]
    assert rep.les.betti_from_sequence() == [1, 1]


def test_torus_cylinders():
    rep = mv_v1(*V1_INSTANCES["torus-cylinders"](), D=3, sample=3)
    assert rep.ok
    assert rep.les.betti[0] == [1, 2, 1]
    assert rep.les.betti_from_sequence() == [1, 2, 1]


def test_trivial_cover():
    rep = mv_v1(*V1_INSTANCES["trivial-cover"](), D=2)
    assert rep.ok
    for s in rep.ses:
        assert s.dims[1] == 2 * s.dims[0] == 2 * s.dims[2]


def test_v1_rejects_bad_cover():
    X = ordered_complex([(i, i + 1) for i in range(4)], label=lambda vs: "".join(map(str, vs)))
    U = generated_subset(X, [X.ref(1, "01"), X.ref(1, "12")])
    V = generated_subset(X, [X.ref(1, "23"), X.ref(1, "34")])
    with pytest.raises(HypothesisError):
        mv_v1(X, U, V, D=2)


@settings(max_examples=15)
@given(covers(max_vertices=5, max_dim=2))
def test_v1_on_random_good_covers(cover):
    X, U, V = cover
    if not good_intersection(X, U, V):
        return
    rep = mv_v1(X, U, V, D=max(X.dim, 1), sample=2)
    assert rep.ses_exact and rep.les_exact and rep.ok


@pytest.mark.parametrize("name,betti", [
    ("disjoint", [2, 1, 0]),
    ("circle-pushout", [1, 1]),
    ("real-line-pushout", [0, 1]),
])
def test_v2_instances(name, betti):
    rep = mv_v2(V2_INSTANCES[name](), D=3, n_max=3)
    assert rep.ok, rep.render()
    assert rep.les.betti[0][: len(betti)] == betti
    for k in ("g is proper", "h is proper", "f is proper"):
        assert rep.checks[k] is True


def test_v2_rejects_collapse():
    with pytest.raises(HypothesisError) as err:
        mv_v2(V2_INSTANCES["collapse"](), D=2, n_max=3)
    assert err.value.hypothesis == "f is proper"


def test_v2_rejects_non_injective_iota():
    V, U = G.simplex(1), G.point()
    W = V.sub([V.ref(0, "0"), V.ref(0, "1")])
    f = SimplicialMap(W, U, {r: (U.ref(0, 0), (0,)) for r in W.faces})
    squash = SimplicialMap(W, V, {r: (V.ref(0, "0"), (0,)) for r in W.faces})
    with pytest.raises(HypothesisError):
        mv_v2(PushoutData.constant(f, squash), D=2)


def test_ses_detects_failure():
    # 0 -> k -> k -> k -> 0 with both maps the identity is not exact
    one = CochainComplex([1], [])
    I = [[{0: 1}]]
    (s,) = check_ses(one, one, one, I, I)
    assert not s.composite_zero and not s.exact


def test_les_of_split_sequence():
    A = CochainComplex([1], [])
    B = CochainComplex([2], [])
    C = CochainComplex([1], [])
    F = [[{0: 1}, {}]]
    G_ = [[{1: 1}]]
    les = long_exact_sequence(A, B, C, F, G_)
    assert les.exact and les.betti == ([1], [2], [1])


def test_report_formats():
    rep = mv_v2(V2_INSTANCES["circle-pushout"](), D=2)
    d = json.loads(rep.render("structured"))
    assert d["ses_exact"] and d["les_exact"]
    assert "LES exact" in rep.render()
