import random
from collections import Counter
from fractions import Fraction

import pytest
from gmpy2 import mpq

from rathomotopy.linalg import rank
from rathomotopy.liedata import (
    E6_TAKEUCHI_ROWS,
    InvalidCategory,
    LieDataError,
    SimpleType,
    Unsupported,
    _e6_standard_forms,
    cartan_matrix,
    e6_form_vectors,
    exponents,
    first_category_rows,
    gram_matrix,
    invariant_generators,
    kac_basis_matrix,
    second_category_rows,
)
from rathomotopy.poly import Polynomial, evaluate

T = SimpleType.parse

ALL_TYPES = ["A1", "A2", "A3", "A5", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "D6",
             "G2", "F4", "E6", "E7", "E8"]
WITH_GENERATORS = [t for t in ALL_TYPES if t not in ("E7", "E8")]


# -- types and exponents -----------------------------------------------------------

def test_simple_type_bounds():
    assert str(T("A5")) == "A5"
    for bad in ("B1", "C2", "D3", "G3", "F5", "E9", "H2", "A0"):
        with pytest.raises(LieDataError):
            T(bad)


@pytest.mark.parametrize("name,expected", [
    ("A5", [2, 3, 4, 5, 6]),
    ("B3", [2, 4, 6]),
    ("C4", [2, 4, 6, 8]),
    ("D4", [2, 4, 4, 6]),
    ("D5", [2, 4, 5, 6, 8]),
    ("G2", [2, 6]),
    ("F4", [2, 6, 8, 12]),
    ("E6", [2, 5, 6, 8, 9, 12]),
    ("E7", [2, 6, 8, 10, 12, 14, 18]),
    ("E8", [2, 8, 12, 14, 18, 20, 24, 30]),
])
def test_exponents(name, expected):
    ex = exponents(T(name))
    assert sorted(k for k, m in ex for _ in range(m)) == expected
    assert ex.rank == T(name).rank


def test_d4_repeated_exponent():
    assert exponents(T("D4")).multiplicity(4) == 2
    assert exponents(T("D6")).multiplicity(6) == 2
    assert exponents(T("D5")).multiplicity(5) == 1


@pytest.mark.parametrize("name,dim", [("A3", 15), ("B3", 21), ("C3", 21), ("D4", 28), ("G2", 14),
                                      ("F4", 52), ("E6", 78), ("E7", 133), ("E8", 248)])
def test_group_dimension_from_exponents(name, dim):
    # dim G = sum over exponents of (2k - 1)
    assert exponents(T(name)).dimension() == dim


# -- generators --------------------------------------------------------------------

def test_b2_generators():
    vs, gens = invariant_generators(T("B2"))
    assert [(g.symbol, str(g.polynomial)) for g in gens] == [("P2", "x1^2 + x2^2"), ("P4", "x1^4 + x2^4")]


def test_d4_generators():
    vs, gens = invariant_generators(T("D4"))
    assert [g.symbol for g in gens] == ["P2", "P4", "P4'", "P6"]
    assert str(gens[2].polynomial) == "x1*x2*x3*x4"


def test_g2_generators():
    vs, gens = invariant_generators(T("G2"))
    assert len(vs) == 3
    assert str(gens[0].polynomial) == "2*x1^2 + 2*x2^2 + 2*x3^2"
    assert str(gens[1].polynomial) == "2*x1^6 + 2*x2^6 + 2*x3^6"


def test_unsupported_and_bad_variant():
    with pytest.raises(Unsupported):
        invariant_generators(T("E7"))
    with pytest.raises(LieDataError):
        invariant_generators(T("F4"), "takeuchi")


@pytest.mark.parametrize("name", WITH_GENERATORS)
def test_generator_weights_match_exponents(name):
    _, gens = invariant_generators(T(name))
    assert sorted(g.weight for g in gens) == sorted(k for k, m in exponents(T(name)) for _ in range(m))
    for g in gens:
        assert g.polynomial.is_homogeneous() and g.polynomial.degree() == g.weight


def _derivative(p: Polynomial, i: int) -> Polynomial:
    terms = {}
    for e, c in p.terms.items():
        if e[i]:
            d = list(e)
            d[i] -= 1
            terms[tuple(d)] = c * e[i]
    return Polynomial(p.variables, terms)


def _random_cartan_point(frame, rng):
    coeffs = [rng.randint(-10 ** 6, 10 ** 6) for _ in frame.rows]
    return [sum((c * r[j] for c, r in zip(coeffs, frame.rows)), mpq(0)) for j in range(len(frame.variables))]


@pytest.mark.parametrize("name", WITH_GENERATORS)
def test_generators_independent_on_cartan(name):
    # Jacobian along the Cartan directions has full rank at a random point
    frame = kac_basis_matrix(T(name))
    rng = random.Random(name)
    pt = dict(zip(frame.variables, _random_cartan_point(frame, rng)))
    gens = frame.generators()
    jac = []
    for g in gens:
        grad = [evaluate(_derivative(g.polynomial, i), pt) for i in range(len(frame.variables))]
        jac.append([sum(a * b for a, b in zip(grad, r)) for r in frame.rows])
    assert rank(jac) == len(gens) == T(name).rank


def _reflect(x, root, gram):
    def b(u, v):
        return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))
    f = 2 * b(x, root) / b(root, root)
    return [xi - f * ri for xi, ri in zip(x, root)]


@pytest.mark.parametrize("name", WITH_GENERATORS)
def test_generators_weyl_invariant(name):
    frame = kac_basis_matrix(T(name))
    gram = frame.gram()
    rng = random.Random(name + "w")
    for _ in range(2):
        x = _random_cartan_point(frame, rng)
        for root in frame.rows:
            y = _reflect(x, root, gram)
            for g in frame.generators():
                assert evaluate(g.polynomial, dict(zip(frame.variables, x))) == \
                    evaluate(g.polynomial, dict(zip(frame.variables, y)))


def test_takeuchi_generators_weyl_invariant():
    frame = kac_basis_matrix(T("E6"), 2)
    gram = frame.gram()
    rng = random.Random(6)
    x = _random_cartan_point(kac_basis_matrix(T("E6"), 2), rng)
    # the a-forms are coordinates on the fixed subalgebra only; reflect inside it
    for root in frame.rows:
        y = _reflect(x, root, gram)
        for g in frame.generators():
            assert evaluate(g.polynomial, dict(zip(frame.variables, x))) == \
                evaluate(g.polynomial, dict(zip(frame.variables, y)))


# -- first-category matrices, one test per rule ------------------------------

def _sparse(nrows, ncols, entries):
    m = [[Fraction(0)] * ncols for _ in range(nrows)]
    for (i, j), v in entries.items():
        m[i][j - 1] = Fraction(v)
    return m


def _as_fractions(rows):
    return [[Fraction(int(c.numerator), int(c.denominator)) for c in r] for r in rows]


@pytest.mark.parametrize("n", range(1, 7))
def test_rows_type_a(n):
    e = {(i, i): 1 for i in range(1, n + 1)}
    e.update({(i - 1, i): -1 for i in range(1, n + 2)})
    e[(0, n + 1)] = 1
    assert _as_fractions(first_category_rows("A", n)) == _sparse(n + 1, n + 1, e)


@pytest.mark.parametrize("n", range(2, 7))
def test_rows_type_b(n):
    e = {(i, i): 1 for i in range(1, n)}
    e.update({(i - 1, i): -1 for i in range(1, n + 1)})
    e[(0, 2)] = -1
    e[(n, n)] = 2
    assert _as_fractions(first_category_rows("B", n)) == _sparse(n + 1, n, e)


@pytest.mark.parametrize("n", range(3, 7))
def test_rows_type_c(n):
    e = {(i, i): 1 for i in range(1, n + 1)}
    e.update({(i - 1, i): -1 for i in range(1, n + 1)})
    assert _as_fractions(first_category_rows("C", n)) == _sparse(n + 1, n, e)


@pytest.mark.parametrize("n", range(4, 8))
def test_rows_type_d(n):
    e = {(i, i): 1 for i in range(1, n + 1)}
    e.update({(i - 1, i): -1 for i in range(1, n + 1)})
    e[(0, 2)] = -1
    e[(n, n - 1)] = 1
    assert _as_fractions(first_category_rows("D", n)) == _sparse(n + 1, n, e)


def test_rows_g2_reference():
    assert _as_fractions(first_category_rows("G", 2)) == [[-1, 0, 1], [1, -2, 1], [0, 1, -1]]


def test_rows_f4_reference():
    assert _as_fractions(first_category_rows("F", 4)) == [
        [-1, -1, 0, 0], [1, -1, -1, -1], [0, 0, 0, 2], [0, 0, 1, -1], [0, 1, -1, 0]]


def test_rows_e6():
    half = Fraction(1, 2)
    e = {(i, i): 1 for i in range(1, 6)}
    e.update({(i - 1, i): -1 for i in range(2, 7)})
    e.update({(6, i): -half for i in range(1, 4)})
    e.update({(6, i): half for i in range(4, 7)})
    e[(0, 7)] = -1  # eps is the seventh column
    e[(6, 7)] = half
    assert _as_fractions(first_category_rows("E", 6)) == _sparse(7, 7, e)


def test_rows_e7():
    half = Fraction(1, 2)
    e = {(i, i): 1 for i in range(1, 7)}
    e.update({(i - 1, i): -1 for i in range(2, 8)})
    e.update({(7, i): -half for i in range(1, 5)})
    e.update({(7, i): half for i in range(5, 9)})
    e[(0, 7)] = 1
    e[(0, 8)] = -1
    assert _as_fractions(first_category_rows("E", 7)) == _sparse(8, 8, e)


def test_rows_e8():
    e = {(i, i): 1 for i in range(1, 8)}
    e.update({(i - 1, i): -1 for i in range(1, 9)})
    e.update({(8, i): Fraction(-1, 3) for i in range(1, 6)})
    e.update({(8, i): Fraction(2, 3) for i in range(6, 9)})
    assert _as_fractions(first_category_rows("E", 8)) == _sparse(9, 8, e)


# -- second-category matrices --------------------------------------------------------

@pytest.mark.parametrize("r", range(1, 5))
def test_rows_a_even_second_category(r):
    ncols = 2 * r + 1
    e = {(i, i): 1 for i in range(1, r)}
    e.update({(i - 1, i): -1 for i in range(1, r + 1)})
    e[(r, r)] = 2
    m = _sparse(r + 1, ncols, e)
    for i in range(r + 1):
        for j in range(1, r + 1):
            m[i][2 * r - j + 1] = -m[i][j - 1]
    assert _as_fractions(second_category_rows("A", 2 * r)) == m


@pytest.mark.parametrize("r", range(2, 5))
def test_rows_a_odd_second_category(r):
    # mirror column taken as 2r+1-j; with 2r-j the middle column would be forced to vanish
    ncols = 2 * r
    e = {(i, i): 1 for i in range(1, r + 1)}
    e.update({(i - 1, i): -1 for i in range(1, r + 1)})
    e[(0, 2)] = -1
    m = _sparse(r + 1, ncols, e)
    for i in range(r + 1):
        for j in range(1, r + 1):
            m[i][2 * r - j] = -m[i][j - 1]
    assert _as_fractions(second_category_rows("A", 2 * r - 1)) == m


@pytest.mark.parametrize("r", range(3, 7))
def test_rows_d_second_category(r):
    e = {(i, i): 1 for i in range(1, r)}
    e.update({(i, i + 1): -1 for i in range(1, r)})
    e[(0, 1)] = -2
    e[(r, r)] = 2
    assert _as_fractions(second_category_rows("D", r + 1)) == _sparse(r + 1, r + 1, e)


def test_rows_d4_triality_reference():
    assert _as_fractions(second_category_rows("D", 4, 3)) == [
        [-2, -1, -1, 0], [1, -1, 2, 0], [0, 1, -1, 0]]


def test_rows_e6_takeuchi_reference():
    assert [list(r) for r in E6_TAKEUCHI_ROWS] == [
        [-2, -1, -1, -1, -1, 0], [1, -1, 0, 0, 1, -1], [0, 1, -1, 1, -1, 0],
        [0, 0, 1, -1, 0, 0], [0, 0, 0, 1, 1, 1]]


def _combo(rows, coeffs):
    return [sum((c * rows[i][j] for i, c in coeffs.items()), mpq(0)) for j in range(len(rows[0]))]


def test_second_category_rows_are_the_bar_combinations():
    a = first_category_rows("E", 6)
    bars = [
        {1: -2, 2: -3, 3: -4, 4: -3, 5: -2, 6: -2},
        {1: 1, 5: 1}, {2: 1, 4: 1}, {3: 1}, {6: 1},
    ]
    std = kac_basis_matrix(T("E6"), 2, variant="standard").rows
    assert [list(r) for r in std] == [_combo(a, c) for c in bars]
    d = first_category_rows("D", 4)
    bars = [{2: -3, 1: -2, 3: -2, 4: -2}, {1: 1, 3: 1, 4: 1}, {2: 1}]
    assert [list(r) for r in second_category_rows("D", 4, 3)] == [_combo(d, c) for c in bars]


def test_e6_form_multisets_agree_between_frames():
    std = kac_basis_matrix(T("E6"), 2, variant="standard")
    tak = kac_basis_matrix(T("E6"), 2)

    def values(forms, rows):
        return Counter(tuple(sum(f[j] * r[j] for j in range(len(f))) for r in rows) for f in forms)

    assert len(e6_form_vectors()) == 27
    assert values(_e6_standard_forms(), std.rows) == values(e6_form_vectors(), tak.rows)


def test_invalid_category_pairs():
    for name, cat in (("B3", 2), ("C3", 2), ("G2", 2), ("F4", 2), ("A1", 2), ("E7", 2)):
        with pytest.raises(InvalidCategory):
            kac_basis_matrix(T(name), cat)
    with pytest.raises(InvalidCategory):
        kac_basis_matrix(T("D5"), 2, twist=3)
    with pytest.raises(InvalidCategory):
        kac_basis_matrix(T("A3"), 3)


# -- Cartan matrices from the rows ------------------------------------------------------

FINITE_DET = {"A": lambda n: n + 1, "B": lambda n: 2, "C": lambda n: 2, "D": lambda n: 4,
              "G": lambda n: 1, "F": lambda n: 1, "E": lambda n: 9 - n}


def _det(m):
    m = [list(map(Fraction, r)) for r in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


@pytest.mark.parametrize("name", ALL_TYPES)
def test_affine_cartan_matrix(name):
    t = T(name)
    frame = kac_basis_matrix(t)
    c = cartan_matrix(frame.rows, gram_matrix(t.family, t.rank))
    assert all(c[i][i] == 2 for i in range(len(c)))
    assert all(c[i][j] <= 0 for i in range(len(c)) for j in range(len(c)) if i != j)
    assert _det(c) == 0
    finite = [row[1:] for row in c[1:]]
    assert _det(finite) == FINITE_DET[t.family](t.rank)


def test_twisted_cartan_matrices_are_affine():
    for name, twist in (("A2", 2), ("A3", 2), ("A4", 2), ("A5", 2), ("D4", 2), ("D5", 2), ("D4", 3),
                        ("E6", 2)):
        frame = kac_basis_matrix(T(name), 2, twist=twist)
        c = cartan_matrix(frame.rows, frame.gram())
        assert _det(c) == 0
        assert rank(c) == len(c) - 1
