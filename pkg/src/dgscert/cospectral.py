"""Generalized cospectrality and the regular rational orthogonal matrix of a pair."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotCospectral, Singular, SingularWalkMatrix, SizeMismatch, VerificationFailed
from .graph import Graph, adjacency, complement
from .linalg import CharPoly, IntMatrix, RatMatrix, charpoly, lcm_all, rat_inverse, snf
from .walk import walk_matrix


def generalized_spectrum_key(g: Graph) -> tuple[CharPoly, CharPoly]:
    return charpoly(adjacency(g)), charpoly(adjacency(complement(g)))


def generalized_cospectral(g: Graph, h: Graph) -> bool:
    if g.n != h.n:
        raise SizeMismatch(f"vertex counts differ: {g.n} vs {h.n}")
    return generalized_spectrum_key(g) == generalized_spectrum_key(h)


def level(q: RatMatrix) -> int:
    """Least k with k*q integral."""
    return lcm_all(x.denominator for row in q.rows for x in row)


@dataclass(frozen=True)
class RroMatrix:
    q: RatMatrix
    level: int

    @property
    def is_permutation(self) -> bool:
        return self.level == 1


def _identity(n: int) -> RatMatrix:
    return RatMatrix(IntMatrix.identity(n).rows)


def check_regular_orthogonal(q: RatMatrix) -> list[str]:
    """Names of the failed identities among Q^T Q = I and Q e = e."""
    n = q.shape[0]
    failed = []
    if q.T @ q != _identity(n):
        failed.append("orthogonality")
    if any(sum(row) != 1 for row in q.rows):
        failed.append("regularity")
    return failed


def recover_q(g: Graph, h: Graph) -> RroMatrix:
    """The unique regular rational orthogonal Q with Q^T A(g) Q = A(h).

    Q^T = W(h) W(g)^{-1}; every defining identity is checked before return.
    """
    if not generalized_cospectral(g, h):
        raise NotCospectral("graphs are not generalized cospectral")
    wg, wh = walk_matrix(g).w, walk_matrix(h).w
    try:
        inv = rat_inverse(wg)
    except Singular:
        raise SingularWalkMatrix("det W(g) = 0; Q is not determined") from None
    q = (wh @ inv).T
    failed = check_regular_orthogonal(q)
    if q.T @ adjacency(g) @ q != RatMatrix(adjacency(h).rows):
        failed.append("conjugation")
    if failed:
        raise VerificationFailed(f"recovered Q violates: {', '.join(failed)}")
    return RroMatrix(q, level(q))


def verify_q_action(q: RroMatrix | RatMatrix, g: Graph) -> Graph | None:
    """The graph with adjacency Q^T A(g) Q, if that product is a 0/1 adjacency."""
    mat = q.q if isinstance(q, RroMatrix) else q
    if mat.shape != (g.n, g.n):
        raise SizeMismatch(f"Q is {mat.shape}, graph has {g.n} vertices")
    prod = mat.T @ adjacency(g) @ mat
    rows = prod.rows
    n = g.n
    for i in range(n):
        if rows[i][i] != 0:
            return None
        for j in range(n):
            if rows[i][j] not in (0, 1) or rows[i][j] != rows[j][i]:
                return None
    return Graph.from_adjacency([[int(x) for x in r] for r in rows])


def permutation_matrix(perm) -> RatMatrix:
    """P with P[i][perm[i]] = 1, so that P^T A(g) P = A(g.relabel(perm))."""
    n = len(perm)
    return RatMatrix([[int(perm[i] == j) for j in range(n)] for i in range(n)])


def level_divisibility_check(g: Graph, h: Graph) -> bool:
    """level(Q) divides gcd(d_n(W(g)), d_n(W(h)))."""
    rq = recover_q(g, h)
    dg = snf(walk_matrix(g).w).last
    dh = snf(walk_matrix(h).w).last
    return gcd(dg, dh) % rq.level == 0
