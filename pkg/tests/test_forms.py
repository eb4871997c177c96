import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from plderham import generators as G
from plderham.forms import (
    GlobalForm,
    NotProperError,
    TruncatedComplex,
    extend_by_zero,
    extend_form,
    pullback,
    relative_complex,
    restrict,
    support,
)
from plderham.nabla import FormError, PolyForm
from plderham.simplicial import SimplicialMap, SubSet, complement_closure, generated_subset
from strategies import simplicial_sets, subsets, window_forms


def edge_form(X, value):
    return GlobalForm(X, 1, {X.simplices(1)[0]: value})


# -- algebra ----------------------------------------------------------------


def test_unit_and_d_of_constant():
    X = G.simplex(2)
    one = GlobalForm.constant(X)
    T = TruncatedComplex(X, 2)
    w = T.basis_form(1, 0)
    assert one.wedge(w) == w
    assert one.d().is_zero()
    assert GlobalForm.constant(X, 5).d().is_zero()


def test_wedge_on_interval_matches_simplexwise():
    X = G.simplex(1)
    e = X.ref(1, "01")
    t = PolyForm.coordinate(1, 1)
    one = PolyForm.constant(1, 1)
    f = GlobalForm(X, 0, {e: t, X.ref(0, "1"): PolyForm.constant(0, 1)})
    g = GlobalForm(X, 0, {e: one - t, X.ref(0, "0"): PolyForm.constant(0, 1)})
    w = GlobalForm(X, 1, {e: PolyForm.dt(1, 1)})
    assert (f ^ g)[e] == t ^ (one - t)
    assert (f ^ g).is_compatible()
    assert (f ^ w)[e] == t ^ PolyForm.dt(1, 1)


def test_incompatible_form_rejected():
    X = G.simplex(1)
    with pytest.raises(FormError):
        GlobalForm(X, 0, {X.ref(1, "01"): PolyForm.coordinate(1, 1)})


def test_host_mismatch():
    with pytest.raises(FormError):
        GlobalForm.constant(G.simplex(1)) + GlobalForm.constant(G.simplex(2))


def test_shape_checked():
    X = G.simplex(1)
    with pytest.raises(FormError):
        GlobalForm(X, 1, {X.ref(1, "01"): PolyForm.dt(2, 1)})


@settings(max_examples=30)
@given(st.data())
def test_window_operations_stay_compatible(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    D = max(X.dim, 1) + 1
    T = TruncatedComplex(X, D)
    q = data.draw(st.integers(0, len(T.dims) - 1))
    a = T.form(q, data.draw(window_forms(T, q)))
    b = T.form(0, data.draw(window_forms(T, 0)))
    assert a.is_compatible() and b.is_compatible()
    assert (a + a.scale(mpq(-1, 3))).is_compatible()
    assert a.d().is_compatible()
    assert a.d().d().is_zero()
    assert b.wedge(a).is_compatible()
    if q + 1 < len(T.dims):
        assert T.contains(a.d())
        assert T.form(q + 1, T.d(q, T.coords_of(a))) == a.d()


# -- support ----------------------------------------------------------------


def test_support_of_zero_is_empty():
    X = G.simplex(2)
    s = support(GlobalForm.zero(X))
    assert s.compact and s.K.members == frozenset()


def test_constant_on_real_line_not_compact():
    E = G.real_line_exhaustion()
    for n in (1, 2, 3):
        host, K = E.window(n)
        assert not support(GlobalForm.constant(host), core=K, level=n)


def test_bump_support_inside_hexagon():
    from plderham.bump import bump_function
    from plderham.simplicial import minimal_neighborhood
    X = G.plane_tessellation(2)
    L = [X.ref(0, "0,0")]
    phi = bump_function(X, L)
    s = support(phi)
    assert s.K.members <= minimal_neighborhood(X, L).members


@settings(max_examples=30)
@given(st.data())
def test_support_exists_on_finite_hosts(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    T = TruncatedComplex(X, max(X.dim, 1))
    q = data.draw(st.integers(0, len(T.dims) - 1))
    w = T.form(q, data.draw(window_forms(T, q)))
    s = support(w)
    assert s.compact
    assert w.vanishes_on(complement_closure(X, s.K).members)


# -- restriction and pullback ------------------------------------------------


def test_identity_pullback():
    X = G.torus(2, 1)
    T = TruncatedComplex(X, 2)
    w = T.basis_form(1, 3)
    assert pullback(w, SimplicialMap.identity(X)) == w


def test_restriction_to_boundary_is_facewise():
    X = G.simplex(2)
    T = TruncatedComplex(X, 3)
    top = X.ref(2, "012")
    w = T.form(1, {k: mpq(k + 1) for k in range(T.dims[1])})
    B = generated_subset(X, X.simplices(1))
    r = restrict(w, B)
    for i, (edge, _) in enumerate(X.faces[top]):
        assert r[edge] == w[top].face(i)


def test_proper_gate():
    E = G.real_line_exhaustion()
    host, K = E.window(1)
    P = G.point()
    f = SimplicialMap(host, P, {r: (P.ref(0, 0), (0,) * (r.dim + 1)) for r in host.faces})
    w = GlobalForm.constant(P)
    with pytest.raises(NotProperError):
        pullback(w, f, proper=False)
    assert pullback(w, f, proper=True) == GlobalForm.constant(host)


@settings(max_examples=30)
@given(st.data())
def test_restriction_preserves_compact_support(data):
    X = data.draw(simplicial_sets(max_vertices=5, max_dim=2))
    Y = data.draw(subsets(X))
    T = TruncatedComplex(X, max(X.dim, 1))
    q = data.draw(st.integers(0, len(T.dims) - 1))
    w = T.form(q, data.draw(window_forms(T, q)))
    r = restrict(w, Y)
    assert r.is_compatible()
    assert support(r).K.members <= support(w).K.members


def test_extend_by_zero_requires_vanishing_frontier():
    X = G.simplex(1)
    Y = generated_subset(X, [X.ref(0, "0")]).as_set()
    w = GlobalForm(Y, 0, {Y.ref(0, "0"): PolyForm.constant(0, 1)})
    with pytest.raises(FormError):
        extend_by_zero(w, X)


def test_extend_form_from_boundary():
    X = G.simplex(2)
    B = generated_subset(X, X.simplices(1))
    T = TruncatedComplex(B.as_set(), 2)
    w = T.form(0, {0: mpq(1), 2: mpq(-2)})
    W = GlobalForm(X, 0, dict(w.values), check=False)
    out = extend_form(W, B.members)
    assert out.is_compatible()
    assert restrict(out, B) == restrict(W, B)


# -- truncated and relative complexes -------------------------------------------


def test_relative_interval_window():
    X = G.simplex(1)
    A = generated_subset(X, X.simplices(0))
    T = relative_complex(X, A, 2)
    assert T.dims == [1, 2]
    b = T.basis_form(0, 0)
    t = PolyForm.coordinate(1, 1)
    e = X.ref(1, "01")
    # the q = 0 level is spanned by t(1 - t)
    c = b[e].terms[((), (1,))]
    assert c and b[e] == (t ^ (PolyForm.constant(1, 1) - t)).scale(c)


def test_relative_to_everything_is_zero():
    X = G.simplex(2)
    assert relative_complex(X, SubSet.everything(X), 3).dims == [0, 0, 0]


def test_relative_to_nothing_is_absolute():
    X = G.simplex(2)
    assert relative_complex(X, SubSet.empty(X), 3).dims == TruncatedComplex(X, 3).dims


@pytest.mark.parametrize("X", [G.simplex(2), G.circle(2), G.torus(1, 1)])
def test_d_is_chain_map_on_window(X):
    T = TruncatedComplex(X, X.dim + 1)
    assert T.complex.check_d_squared()
    for q in range(len(T.dims) - 1):
        for k in range(T.dims[q]):
            w = T.basis_form(q, k)
            assert T.form(q + 1, T.d(q, {k: mpq(1)})) == w.d()


def test_render_parse_round_trip():
    X = G.torus(2, 1)
    T = TruncatedComplex(X, 2)
    w = T.form(1, {0: mpq(1, 2), 3: mpq(-4)})
    assert GlobalForm.parse(w.render(), X) == w
    assert GlobalForm.parse(w.render(), X).render() == w.render()
    with pytest.raises(FormError):
        GlobalForm.parse("bogus 1\n", X)
