import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from plderham import generators as G
from plderham import linalg
from plderham.cochains import cohomology, induced_on_cohomology, normalized_cochains, pullback_cochains
from plderham.derham import (
    colimit_Hc,
    derham_check,
    derham_check_compact,
    rho,
    rho_compact,
    rho_form,
    rho_relative,
)
from plderham.forms import GlobalForm, TruncatedComplex
from plderham.nabla import PolyForm
from plderham.simplicial import Exhaustion, SimplicialMap, generated_subset
from strategies import simplicial_sets, subsets, window_forms


def test_rho_of_dt_on_interval():
    X = G.simplex(1)
    NC = normalized_cochains(X)
    w = GlobalForm(X, 1, {X.ref(1, "01"): PolyForm.dt(1, 1)})
    assert rho_form(w, NC) == {NC.labels[1].index(X.ref(1, "01")): 1}


def test_rho_of_constant():
    X = G.torus(2, 1)
    NC = normalized_cochains(X)
    assert rho_form(GlobalForm.constant(X), NC) == {k: 1 for k in range(NC.dim(0))}


def test_rho_on_boundary_of_triangle():
    X = G.boundary(2)
    NC = normalized_cochains(X)
    t = PolyForm.coordinate(1, 1)
    dt = PolyForm.dt(1, 1)
    vals = {
        X.ref(1, "01"): (t ^ t ^ dt).scale(3),   # 3 * 1/3
        X.ref(1, "02"): dt.scale(mpq(-1, 2)),
        X.ref(1, "12"): (t ^ dt).scale(4),       # 4 * 1/2
    }
    w = GlobalForm(X, 1, vals)
    got = rho_form(w, NC)
    expected = {"01": 1, "02": mpq(-1, 2), "12": 2}
    for k, r in enumerate(NC.labels[1]):
        assert got.get(k, 0) == expected[r.id]


@pytest.mark.parametrize("X", [G.simplex(2), G.boundary(3), G.circle(1), G.torus(2, 1)])
def test_rho_is_chain_map(X):
    assert rho(X).is_chain_map()
    assert rho(X, X.dim + 1).is_chain_map()


@settings(max_examples=25)
@given(st.data())
def test_rho_commutes_with_d_on_random_forms(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    R = rho(X, max(X.dim, 1) + 1)
    T, NC = R.forms, R.cochains
    for q in range(len(T.dims) - 1):
        c = data.draw(window_forms(T, q))
        w = T.form(q, c)
        assert rho_form(w.d(), NC) == NC.diff(q, rho_form(w, NC))
        assert R(q, c) == rho_form(w, NC)


@settings(max_examples=25)
@given(st.data())
def test_rho_vanishes_on_degenerate_simplices(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    T = TruncatedComplex(X, max(X.dim, 1) + 1)
    for q in range(1, len(T.dims)):
        w = T.form(q, data.draw(window_forms(T, q)))
        for s in X.simplices(q - 1):
            for j in range(q):
                assert w.at(X.degeneracy(s, j)).integrate() == 0


@settings(max_examples=20)
@given(st.data())
def test_naturality_for_inclusions(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    Y = data.draw(subsets(X)).as_set()
    D = max(X.dim, 1)
    iota = SimplicialMap.inclusion(Y, X)
    TX, TY = TruncatedComplex(X, D), TruncatedComplex(Y, D)
    NX, NY = normalized_cochains(X, top=len(TX.dims) - 1), normalized_cochains(Y, top=len(TX.dims) - 1)
    FA = TY.pullback_matrices(iota, TX)
    FC = pullback_cochains(iota, NX, NY)
    RX, RY = TX.rho(NX), TY.rho(NY)
    for q in range(min(len(TY.dims), len(RX))):
        assert linalg.matmul(RY[q], FA[q]) == linalg.matmul(FC[q], RX[q])


def test_relative_interval_generator():
    X = G.simplex(1)
    A = generated_subset(X, X.simplices(0))
    R = rho_relative(X, A, 2)
    HA, HC = cohomology(R.forms.complex), cohomology(R.cochains)
    assert HA.betti == HC.betti == [0, 1]
    M = induced_on_cohomology(R.matrices, HA, HC)
    assert M[1][0][0] != 0


def test_rho_relative_to_empty_is_rho():
    X = G.circle(3)
    assert rho_relative(X, None, 2).matrices == rho(X, 2).matrices


def test_rho_compact_on_finite_is_rho():
    X = G.circle(3)
    E = Exhaustion.constant(X)
    assert rho_compact(E, 1, 2).matrices == rho(X, 2).matrices


@pytest.mark.parametrize("X", [G.simplex(1), G.simplex(2), G.boundary(2), G.cylinder(3, 1)])
def test_comparison_isomorphism(X):
    rep = derham_check(X)
    assert rep.isomorphism and rep.stabilized and rep.ok


def test_relative_comparison():
    X = G.simplex(2)
    A = generated_subset(X, X.simplices(1))
    rep = derham_check(X, A=A)
    assert rep.betti_forms == [0, 0, 1]
    assert rep.ok


def test_colimit_real_line_maps():
    R = colimit_Hc(G.real_line_exhaustion(), 3)
    assert R.betti == [0, 1]
    assert R.stable_level == 1
    assert "stable from n=1" in R.certificate()


def test_compact_report():
    rep = derham_check_compact(G.real_line_exhaustion(), 3)
    assert rep.betti_forms == rep.betti_cochains == [0, 1]
    assert rep.ok and rep.stable_level == 1


def test_unstabilized_certificate():
    R = colimit_Hc(G.real_line_exhaustion(), 1)
    assert not R.stabilized and R.betti is None
    assert "not stabilized" in R.certificate()


def test_report_serialization():
    rep = derham_check(G.circle(2))
    import json
    d = json.loads(rep.render("structured"))
    assert d["isomorphism"] is True and d["betti_cochains"] == [1, 1]
    assert "isomorphism: yes" in rep.render()
