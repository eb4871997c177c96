"""Acceptance criteria, each checked exactly (zero tolerance) over seeded samples.

The samplers below use ``random.Random`` with fixed seeds so that every run
sees the same cases and the sample counts are exact.
"""

import random
import time
from itertools import combinations

from gmpy2 import mpq

from plderham import generators as G
from plderham.bump import HypothesisError, bump_function, intersection_conditions
from plderham.cochains import cohomology, full_cochains, normalized_cochains
from plderham.derham import colimit_Hc, derham_check, derham_check_compact
from plderham.generators import ordered_complex
from plderham.mv import V1_INSTANCES, V2_INSTANCES, mv_v1, mv_v2
from plderham.nabla import PolyForm, basis, extend
from plderham.simplicial import (
    Exhaustion,
    SubSet,
    complement_closure,
    generated_subset,
    minimal_neighborhood,
)
from strategies import collapse


def rand_q(rng):
    return mpq(rng.randint(-9, 9), rng.randint(1, 6))


def rand_form(rng, p, q, maxdeg, terms=6):
    keys = basis(p, q, maxdeg)
    chosen = rng.sample(keys, min(terms, len(keys)))
    return PolyForm(p, q, {k: rand_q(rng) for k in chosen})


def rand_set(rng, max_vertices=6, max_dim=3):
    n = rng.randint(1, max_vertices)
    k = rng.randint(0, min(max_dim, n - 1))
    cands = [c for d in range(k + 1) for c in combinations(range(n), d + 1)]
    tops = rng.sample(cands, rng.randint(1, min(6, len(cands))))
    X = ordered_complex(tops + [(v,) for v in range(n)], label=lambda vs: "".join(map(str, vs)))
    if rng.random() < 0.4:
        pick = rng.sample(X.simplices(), rng.randint(1, min(3, len(X.simplices()))))
        X = collapse(X, generated_subset(X, pick).members)
    return X


def rand_subset(rng, X, max_gen=4):
    simp = X.simplices()
    return generated_subset(X, rng.sample(simp, rng.randint(0, min(max_gen, len(simp)))))


# 1 -----------------------------------------------------------------------------


def test_criterion_01_stokes():
    rng = random.Random(1)
    n = 0
    for p in (1, 2, 3):
        for _ in range(80):
            w = rand_form(rng, p, p - 1, 4)
            assert w.d().integrate() == w.total_boundary().integrate()
            n += 1
    assert n >= 200


# 2 -----------------------------------------------------------------------------


def boundary_data(rng, p, q):
    """A compatible tuple: the faces of a random form on the p-simplex."""
    W = rand_form(rng, p, q, rng.randint(0, 3))
    return [W.face(i) for i in range(p + 1)]


def test_criterion_02_extension():
    rng = random.Random(2)
    n = 0
    for p in (1, 2, 3):
        for q in range(0, min(2, p) + 1):
            for _ in range(15):
                w = boundary_data(rng, p, q)
                v = boundary_data(rng, p, q)
                E = extend(w, q)
                for i in range(p + 1):
                    assert E.face(i) == w[i]
                s = [a + b for a, b in zip(w, v)]
                assert extend(w, q) + extend(v, q) == extend(s, q)
                assert extend(w, q) == E
                n += 1
    assert n >= 100


# 3 -----------------------------------------------------------------------------


def test_criterion_03_bump():
    X = G.plane_tessellation(2)
    v = X.ref(0, "0,0")
    eps = minimal_neighborhood(X, [v])
    assert len(eps.members) == 25 and len([r for r in eps.members if r.dim == 2]) == 6
    phi = bump_function(X, [v], eps)
    assert phi[v] == PolyForm.constant(0, 1)
    assert phi.vanishes_on(complement_closure(X, eps).members)
    assert phi.is_compatible()

    rng = random.Random(3)
    n = 0
    while n < 60:
        Y = rand_set(rng)
        L = rand_subset(rng, Y)
        epsL = minimal_neighborhood(Y, L)
        K = generated_subset(Y, epsL.members | rand_subset(rng, Y).members)
        phi = bump_function(Y, L, K)
        assert phi.is_compatible()
        assert phi.equals_constant_on(L.members, 1)
        assert phi.vanishes_on(complement_closure(Y, K).members)
        n += 1


# 4 -----------------------------------------------------------------------------


def test_criterion_04_good_intersection_symmetry():
    rng = random.Random(4)
    n, good = 0, 0
    while n < 150:
        X = rand_set(rng)
        U = rand_subset(rng, X)
        rest = generated_subset(X, [r for r in X.faces if r not in U.members])
        V = SubSet(X, rest.members | rand_subset(rng, X).members)
        a, b = intersection_conditions(X, U, V)
        assert a == b
        good += a
        n += 1
    # both outcomes occur in the sample
    assert 0 < good < n


# 5 -----------------------------------------------------------------------------


def test_criterion_05_mv_v1():
    for name, betti in (("circle-arcs", [1, 1]), ("torus-cylinders", [1, 2, 1])):
        rep = mv_v1(*V1_INSTANCES[name](), D=3)
        for s in rep.ses:
            assert s.composite_zero and s.injective and s.middle_exact and s.surjective
        assert rep.les_exact and all(n.exact for n in rep.les.nodes)
        assert rep.les.betti[0] == betti
        assert rep.ok, rep.render()


# 6 -----------------------------------------------------------------------------


def test_criterion_06_mv_v2():
    for name in ("disjoint", "circle-pushout", "real-line-pushout"):
        rep = mv_v2(V2_INSTANCES[name](), D=3, n_max=3)
        assert rep.checks["g is proper"] and rep.checks["h is proper"]
        assert rep.ses_exact and rep.les_exact
        assert rep.ok, rep.render()
    try:
        mv_v2(V2_INSTANCES["collapse"](), D=3, n_max=3)
    except HypothesisError as e:
        assert e.hypothesis == "f is proper"
    else:
        raise AssertionError("non-proper f was accepted")


# 7 -----------------------------------------------------------------------------


def test_criterion_07_de_rham():
    spaces = [G.simplex(n) for n in range(4)] + [G.boundary(3), G.circle(1), G.circle(4), G.torus(1, 1), G.torus(2, 2)]
    for X in spaces:
        rep = derham_check(X)
        assert rep.isomorphism and rep.stabilized, rep.render()
        assert rep.betti_forms == rep.betti_cochains
    rep = derham_check(G.torus(2, 2))
    assert rep.betti_forms == [1, 2, 1]
    assert rep.multiplicative is True
    deg11 = [w for w in rep.witnesses if w.p == 1 and w.q == 1]
    assert len(deg11) == 4


# 8 -----------------------------------------------------------------------------


def test_criterion_08_compact_de_rham():
    for E, betti in ((G.real_line_exhaustion(), [0, 1]), (G.plane_exhaustion(), [0, 0, 1])):
        t0 = time.perf_counter()
        CA = colimit_Hc(E)
        CC = colimit_Hc(E, theory="cochains")
        rep = derham_check_compact(E)
        assert CA.betti == CC.betti == betti
        assert CA.stable_level is not None and "stable from n=" in CA.certificate()
        assert rep.isomorphism and rep.stabilized and rep.stable_level == CA.stable_level
        assert time.perf_counter() - t0 < 60


# 9 -----------------------------------------------------------------------------


def test_criterion_09_finite_colimit():
    for X in (G.simplex(2), G.boundary(3), G.circle(3), G.torus(2, 1), G.cylinder(3, 1)):
        E = Exhaustion.constant(X)
        for theory in ("forms", "cochains"):
            R = colimit_Hc(E, 3, theory=theory)
            assert R.stable_level == 1
            assert all(b == R.betti for b in R.betti_levels)
            assert R.betti == cohomology(normalized_cochains(X)).betti


# 10 ----------------------------------------------------------------------------


def test_criterion_10_normalized_vs_full():
    rng = random.Random(10)
    n = 0
    while n < 120:
        X = rand_set(rng, max_vertices=5, max_dim=2)
        top = max(X.dim, 0)
        full = cohomology(full_cochains(X, top=top + 1)).betti[: top + 1]
        norm = cohomology(normalized_cochains(X)).betti[: top + 1]
        assert full == norm
        n += 1
