import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_corpus
from dgscert.errors import NotPrime
from dgscert.graph import Graph, adjacency
from dgscert.linalg import IntMatrix, charpoly, det, rank_mod_p, snf
from dgscert.walk import (
    annihilator_matrix,
    annihilator_poly,
    annihilator_vector,
    bar_walk_matrix,
    hat_walk_matrix,
    m_matrix_even,
    shifted_walk_matrix,
    walk_matrix,
)
from strategies import graphs

K2 = Graph.complete(2)


def count_walks(g: Graph, start: int, length: int) -> int:
    """Walks of the given length from start, by explicit enumeration."""
    frontier = {start: 1}
    for _ in range(length):
        nxt: dict[int, int] = {}
        for v, c in frontier.items():
            for u in g.neighbors(v):
                nxt[u] = nxt.get(u, 0) + c
        frontier = nxt
    return sum(frontier.values())


def test_k2_walk_matrix():
    assert walk_matrix(K2).w == IntMatrix([[1, 1], [1, 1]])
    assert walk_matrix(Graph.empty(1)).w == IntMatrix([[1]])


def test_k2_shifted():
    assert shifted_walk_matrix(K2, 1).w == IntMatrix([[1, 3], [1, 3]])
    assert shifted_walk_matrix(Graph.empty(1), 1).w == IntMatrix([[1]])


@settings(max_examples=50)
@given(graphs(max_n=7))
def test_walk_entries_count_walks(g):
    w = walk_matrix(g).w
    for i in range(g.n):
        for j in range(g.n):
            assert w[i, j] == count_walks(g, i, j)


@settings(max_examples=50)
@given(graphs(max_n=8), st.integers(-3, 3))
def test_shifted_column_recurrence(g, t):
    w = shifted_walk_matrix(g, t).w
    n = g.n
    at = [[adjacency(g)[i, j] + t for j in range(n)] for i in range(n)]
    cols = w.columns()
    assert cols[0] == [1] * n
    for k in range(1, n):
        assert cols[k] == [sum(at[i][j] * cols[k - 1][j] for j in range(n)) for i in range(n)]
    if t == 0:
        assert w == walk_matrix(g).w


def test_k2_annihilator():
    ann = annihilator_poly(K2, 2)
    assert (ann.r, ann.coeffs) == (1, (1,))
    assert hat_walk_matrix(K2, 2, ann) == IntMatrix([[1, 1], [1, 1]])
    assert bar_walk_matrix(K2, 2, ann) == IntMatrix([[1, 2], [1, 2]])


def test_k2_and_single_vertex_m_matrix():
    assert m_matrix_even(K2) == IntMatrix([[-1, 1], [1, -1]])
    assert m_matrix_even(Graph.empty(1)) == IntMatrix([[0]])


def test_annihilator_rejects_composite():
    with pytest.raises(NotPrime):
        annihilator_poly(K2, 9)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=9), st.sampled_from([2, 3, 5, 7]))
def test_annihilator_and_null_basis(g, p):
    ann = annihilator_poly(g, p)
    w = walk_matrix(g).w
    assert ann.r == rank_mod_p(w, p)
    assert all(x % p == 0 for x in annihilator_vector(g, ann))
    assert annihilator_matrix(g, ann).apply([1] * g.n) == annihilator_vector(g, ann)
    vecs = ann.shift_vectors(g.n)
    assert len(vecs) == g.n - ann.r
    for v in vecs:
        assert all(x % p == 0 for x in w.apply(v))
    if vecs:
        assert rank_mod_p(IntMatrix(vecs), p) == len(vecs)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=10))
def test_m_even_agrees_with_annihilator(g):
    n = g.n
    w = walk_matrix(g).w
    r = (n + 1) // 2
    if rank_mod_p(w, 2) != r:
        return
    phi = charpoly(adjacency(g))
    # low-first coefficients below A^r: c_n, c_{n-2}, ... (odd n starts at 0, c_{n-1}, ...)
    expected = [phi.c(n - 2 * k) if n % 2 == 0 else (0 if k == 0 else phi.c(n + 1 - 2 * k)) for k in range(r)]
    ann = annihilator_poly(g, 2)
    assert [x % 2 for x in ann.coeffs] == [x % 2 for x in expected]


def test_bar_same_snf_as_w():
    for g in random_corpus(31, 200, 1, 8):
        for p in (2, 3):
            ann = annihilator_poly(g, p)
            bar = bar_walk_matrix(g, p, ann)
            w = walk_matrix(g).w
            assert snf(bar).d == snf(w).d
            assert bar.columns()[: ann.r] == w.columns()[: ann.r]
            hat = hat_walk_matrix(g, p, ann)
            scaled = [c if j < ann.r else [p * x for x in c] for j, c in enumerate(hat.columns())]
            assert IntMatrix.from_columns(scaled) == bar


def test_hat_snf_halves_even_factors():
    """Odd primes too: when p divides exactly the trailing factors, SNF(hat) divides them by p."""
    rng = random.Random(77)
    seen = {2: 0, 3: 0, 5: 0}
    for _ in range(400):
        n = rng.randint(4, 10)
        g = Graph.from_mask(n, rng.getrandbits(n * (n - 1) // 2))
        w = walk_matrix(g).w
        d = snf(w).d
        if d[-1] == 0:
            continue
        for p in seen:
            r = rank_mod_p(w, p)
            if r == n or d[r - 1] % p == 0:
                continue
            seen[p] += 1
            hat = hat_walk_matrix(g, p, annihilator_poly(g, p))
            assert snf(hat).d == d[:r] + tuple(x // p for x in d[r:])
            assert abs(det(hat)) * p ** (n - r) == abs(det(w))
    assert all(seen.values())
