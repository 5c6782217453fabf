import itertools
from fractions import Fraction
from math import gcd, prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from dgscert.errors import MatrixFormatError, NonSquare, NotPrime, NotSupported, Singular
from dgscert.linalg import (
    IntMatrix,
    RatMatrix,
    charpoly,
    det,
    nullspace_mod_p,
    rank_mod_p,
    rat_inverse,
    snf,
    solve_mod_p,
)
from strategies import int_matrices

# oracles ------------------------------------------------------------------------


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inv * prod(rows[i][perm[i]] for i in range(n))
    return total


def minors(rows, k):
    r, c = len(rows), len(rows[0])
    for ri in itertools.combinations(range(r), k):
        for ci in itertools.combinations(range(c), k):
            yield leibniz_det([[rows[i][j] for j in ci] for i in ri])


def determinantal_factors(rows):
    """d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors."""
    out, prev = [], 1
    for k in range(1, min(len(rows), len(rows[0])) + 1):
        dk = 0
        for m in minors(rows, k):
            dk = gcd(dk, m)
        out.append(dk // prev if dk else 0)
        if dk == 0:
            out += [0] * (min(len(rows), len(rows[0])) - k)
            break
        prev = dk
    return tuple(out)


def rank_by_minors(rows, p):
    best = 0
    for k in range(1, min(len(rows), len(rows[0])) + 1):
        if any(m % p for m in minors(rows, k)):
            best = k
    return best


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def charpoly_by_expansion(rows):
    """det(xI - A) by the Leibniz formula over polynomial entries (low-first)."""
    n = len(rows)
    entry = [[[-rows[i][j], 1] if i == j else [-rows[i][j]] for j in range(n)] for i in range(n)]
    total = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = [sign]
        for i in range(n):
            term = poly_mul(term, entry[i][perm[i]])
        for k, c in enumerate(term):
            total[k] += c
    return tuple(reversed(total))[1:]


# SNF -----------------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4))
def test_snf_matches_determinantal_divisors(m):
    assert snf(m).d == determinantal_factors(m.tolist())


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_rows=5, max_cols=5, bound=30, square=True))
def test_snf_matches_sympy(m):
    s = smith_normal_form(sympy.Matrix(m.tolist()), domain=sympy.ZZ)
    ref = tuple(abs(int(s[i, i])) for i in range(m.shape[0]))
    assert snf(m).d == ref


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=5, max_cols=5, bound=20))
def test_snf_transforms_reproduce_matrix(m):
    dec = snf(m, want_transforms=True)
    assert dec.U @ dec.diagonal(m.shape) @ dec.V == m
    assert abs(det(dec.U)) == 1 and abs(det(dec.V)) == 1
    nz = [x for x in dec.d if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(dec.d, dec.d[1:]) if a)


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=6, bound=50, square=True))
def test_det_equals_product_of_factors(m):
    assert abs(det(m)) == prod(snf(m).d)


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=5, bound=50, square=True))
def test_bareiss_matches_leibniz(m):
    assert det(m) == leibniz_det(m.tolist())


def test_snf_zero_and_unit():
    assert snf(IntMatrix([[0, 0], [0, 0]])).d == (0, 0)
    assert snf(IntMatrix.identity(3)).d == (1, 1, 1)
    assert snf(IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])).d == (2, 6, 12)


def test_det_requires_square():
    with pytest.raises(NonSquare):
        det(IntMatrix([[1, 2]]))


# characteristic polynomial ---------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=5, bound=6, square=True))
def test_charpoly_matches_expansion(m):
    assert charpoly(m).coeffs == charpoly_by_expansion(m.tolist())


@settings(max_examples=40, deadline=None)
@given(int_matrices(max_rows=7, bound=9, square=True))
def test_charpoly_constant_and_trace(m):
    cp = charpoly(m)
    n = m.shape[0]
    assert cp.c(1) == -sum(m[i, i] for i in range(n))
    assert cp.c(n) == (-1) ** n * det(m)


def test_charpoly_str():
    cp = charpoly(IntMatrix([[0, 1], [1, 0]]))
    assert cp.coeffs == (0, -1)
    assert str(cp) == "x^2 - 1"
    assert cp(3) == 8 and cp.eval_mod(3, 5) == 3


# finite fields -------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_oracles(m, p):
    r = rank_mod_p(m, p)
    assert r == rank_by_minors(m.tolist(), p)
    # rank over F_p counts the invariant factors coprime to p
    assert r == sum(1 for x in snf(m).d if x % p)


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=5, max_cols=5), st.sampled_from([2, 3, 5, 11]))
def test_nullspace_mod_p(m, p):
    basis = nullspace_mod_p(m, p)
    assert len(basis) == m.shape[1] - rank_mod_p(m, p)
    for v in basis:
        assert all(x % p == 0 for x in m.apply(v))
    if basis:
        assert rank_mod_p(IntMatrix(basis), p) == len(basis)


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4), st.sampled_from([2, 3, 5]), st.data())
def test_solve_mod_p(m, p, data):
    x0 = [data.draw(st.integers(0, p - 1)) for _ in range(m.shape[1])]
    b = m.apply(x0)
    x = solve_mod_p(m, b, p)
    assert x is not None
    assert all((u - v) % p == 0 for u, v in zip(m.apply(x), b))


def test_solve_inconsistent():
    assert solve_mod_p(IntMatrix([[1, 1], [1, 1]]), [0, 1], 2) is None


def test_prime_validation():
    with pytest.raises(NotPrime):
        rank_mod_p(IntMatrix.identity(2), 4)
    with pytest.raises(NotSupported):
        rank_mod_p(IntMatrix.identity(2), 2**89 - 1)


# rational inverse and formats --------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_rows=5, bound=9, square=True))
def test_rat_inverse(m):
    n = m.shape[0]
    if det(m) == 0:
        with pytest.raises(Singular):
            rat_inverse(m)
        return
    inv = rat_inverse(m)
    ident = RatMatrix(IntMatrix.identity(n).rows)
    assert RatMatrix(m.rows) @ inv == ident and inv @ RatMatrix(m.rows) == ident


def test_ratmatrix_helpers():
    q = RatMatrix([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)]])
    assert not q.is_integral
    assert q.scale(2).to_int() == IntMatrix([[1, 1], [1, -1]])


@settings(max_examples=50)
@given(int_matrices(max_rows=6, max_cols=6, bound=10**30))
def test_text_format_round_trip(m):
    assert IntMatrix.parse(m.dumps()) == m


@pytest.mark.parametrize("text", ["", "2 2\n1 2\n3\n", "1 1\nx\n", "0 0\n", "2\n1 2\n"])
def test_text_format_errors(text):
    with pytest.raises(MatrixFormatError):
        IntMatrix.parse(text)


def test_text_format_comments():
    assert IntMatrix.parse("# header\n2 1\n5\n-7\n") == IntMatrix([[5], [-7]])


def test_intmatrix_rejects_non_integers():
    with pytest.raises(TypeError):
        IntMatrix([[0.5]])
