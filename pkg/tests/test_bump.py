import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plderham import generators as G
from plderham.bump import (
    HypothesisError,
    bump_function,
    good_intersection,
    intersection_conditions,
    partition_of_unity,
)
from plderham.forms import GlobalForm
from plderham.generators import ordered_complex
from plderham.mv import V1_INSTANCES
from plderham.simplicial import SubSet, complement_closure, generated_subset, minimal_neighborhood
from strategies import covers, simplicial_sets, subsets


def path(n):
    return ordered_complex([(i, i + 1) for i in range(n)], label=lambda vs: "".join(map(str, vs)))


def span(X, a, b):
    return generated_subset(X, [X.ref(1, f"{i}{i + 1}") for i in range(a, b)])


# -- bump functions -------------------------------------------------------------


def test_plane_bump():
    X = G.plane_tessellation(2)
    v = X.ref(0, "0,0")
    phi = bump_function(X, [v])
    eps = minimal_neighborhood(X, [v])
    assert phi[v].terms == {((), ()): 1}
    assert phi.vanishes_on(complement_closure(X, eps).members)
    assert set(phi.values) <= eps.members
    assert phi.degree == 1


def test_bump_everything_is_one():
    X = G.torus(2, 2)
    phi = bump_function(X, SubSet.everything(X), SubSet.everything(X))
    assert phi == GlobalForm.constant(X)


def test_bump_of_empty_is_zero():
    X = G.simplex(2)
    assert bump_function(X, SubSet.empty(X)).is_zero()


def test_bump_rejects_small_k():
    X = G.plane_tessellation(2)
    v = X.ref(0, "0,0")
    with pytest.raises(HypothesisError) as err:
        bump_function(X, [v], [v])
    assert "epsilon(L)" in err.value.hypothesis


def test_bump_is_deterministic():
    X = G.plane_tessellation(2)
    L = [X.ref(0, "0,0"), X.ref(0, "1,0")]
    assert bump_function(X, L).render() == bump_function(X, L).render()


@settings(max_examples=40)
@given(st.data())
def test_bump_contract_on_random_sets(data):
    X = data.draw(simplicial_sets())
    L = data.draw(subsets(X))
    eps = minimal_neighborhood(X, L)
    K = generated_subset(X, eps.members | data.draw(subsets(X)).members)
    phi = bump_function(X, L, K)
    assert phi.is_compatible()
    assert phi.equals_constant_on(L.members, 1)
    assert phi.vanishes_on(complement_closure(X, K).members)


# -- good intersection ------------------------------------------------------------


def test_good_path_cover():
    X = path(5)
    assert good_intersection(X, span(X, 0, 3), span(X, 2, 5))


def test_bad_path_cover():
    X = path(4)
    assert not good_intersection(X, span(X, 0, 2), span(X, 2, 4))


def test_trivial_cover_is_good():
    X = G.circle(3)
    assert good_intersection(X, SubSet.everything(X), SubSet.everything(X))


def test_not_a_cover():
    X = path(4)
    with pytest.raises(HypothesisError):
        good_intersection(X, span(X, 0, 1), span(X, 3, 4))


@settings(max_examples=60)
@given(covers())
def test_symmetry_on_random_covers(cover):
    X, U, V = cover
    a, b = intersection_conditions(X, U, V)
    assert a == b


# -- partitions of unity --------------------------------------------------------


def check_partition(X, U, V):
    pU, pV = partition_of_unity(X, U, V)
    assert pU + pV == GlobalForm.constant(X)
    diff = generated_subset(X, U.members - V.members)
    assert pU.equals_constant_on(diff.members, 1)
    assert pU.vanishes_on(complement_closure(X, U).members)
    assert pU.is_compatible() and pV.is_compatible()


def test_partition_trivial_cover():
    X = G.circle(3)
    check_partition(X, SubSet.everything(X), SubSet.everything(X))


def test_partition_path():
    X = path(5)
    check_partition(X, span(X, 0, 3), span(X, 2, 5))


@pytest.mark.parametrize("name", ["circle-arcs", "torus-cylinders"])
def test_partition_instances(name):
    check_partition(*V1_INSTANCES[name]())


def test_partition_needs_good_intersection():
    X = path(4)
    with pytest.raises(HypothesisError):
        partition_of_unity(X, span(X, 0, 2), span(X, 2, 4))
