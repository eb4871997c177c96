import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from plderham import linalg
from strategies import rationals


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    n = draw(st.integers(0, max_rows))
    m = draw(st.integers(1, max_cols))
    cells = draw(st.lists(st.one_of(st.just(mpq(0)), rationals), min_size=n * m, max_size=n * m))
    return [[cells[i * m + j] for j in range(m)] for i in range(n)], m


def sparse(M):
    return [{j: v for j, v in enumerate(row) if v} for row in M]


def sym(M, m):
    return sympy.Matrix(len(M), m, [sympy.Rational(int(v.numerator), int(v.denominator)) for r in M for v in r])


@settings(max_examples=80)
@given(matrices())
def test_rank_against_sympy(data):
    M, m = data
    assert linalg.rank(sparse(M)) == (sym(M, m).rank() if M else 0)


@settings(max_examples=80)
@given(matrices())
def test_nullspace_is_kernel_basis(data):
    M, m = data
    basis, free = linalg.nullspace(sparse(M), m)
    assert len(basis) == m - linalg.rank(sparse(M))
    for k, v in enumerate(basis):
        assert not linalg.apply(sparse(M), v)
        assert v[free[k]] == 1
        assert all(v.get(f, 0) == 0 for f in free if f != free[k])


@settings(max_examples=80)
@given(matrices(), st.data())
def test_solver_consistency(data, more):
    M, m = data
    x = {j: more.draw(rationals) for j in range(m)}
    b = linalg.apply(sparse(M), x)
    S = linalg.Solver(sparse(M), m)
    y = S.solve(b)
    assert y is not None and linalg.apply(sparse(M), y) == b


def test_inconsistent_system():
    S = linalg.Solver([{0: mpq(1)}, {0: mpq(2)}], 1)
    assert S.solve({0: mpq(1), 1: mpq(1)}) is None


def test_coercion():
    from fractions import Fraction
    assert linalg.q("3/4") == mpq(3, 4)
    assert linalg.q(Fraction(1, 3)) == mpq(1, 3)
    assert linalg.q(5) == 5


def test_solution_ignores_appended_columns():
    rows = [{0: mpq(1), 1: mpq(1)}]
    a = linalg.Solver(rows, 2).solve({0: mpq(3)})
    rows2 = [{0: mpq(1), 1: mpq(1), 2: mpq(7)}]
    b = linalg.Solver(rows2, 3).solve({0: mpq(3)})
    assert a == b
