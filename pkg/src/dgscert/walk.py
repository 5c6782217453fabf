"""Walk matrices and the mod-p annihilator construction built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NonIntegralColumn, NotPrime
from .graph import Graph, adjacency
from .linalg import CharPoly, IntMatrix, charpoly, rank_mod_p, solve_mod_p
from .primes import is_prime


def krylov_columns(a: IntMatrix, count: int, start: Sequence[int] | None = None) -> list[list[int]]:
    """[v, Av, A^2 v, ...] with ``count`` vectors; v defaults to all-ones."""
    n = a.shape[0]
    v = list(start) if start is not None else [1] * n
    cols = []
    for _ in range(count):
        cols.append(v)
        v = a.apply(v)
    return cols


@dataclass(frozen=True)
class WalkMatrix:
    graph: Graph
    w: IntMatrix
    shift: int = 0


def walk_matrix(g: Graph) -> WalkMatrix:
    return WalkMatrix(g, IntMatrix.from_columns(krylov_columns(adjacency(g), g.n)))


def shifted_adjacency(g: Graph, t: int) -> IntMatrix:
    """A + tJ."""
    return IntMatrix([[x + t for x in row] for row in adjacency(g).rows])


def shifted_walk_matrix(g: Graph, t: int) -> WalkMatrix:
    a = shifted_adjacency(g, t)
    return WalkMatrix(g, IntMatrix.from_columns(krylov_columns(a, g.n)), shift=t)


@dataclass(frozen=True)
class AnnihilatorPoly:
    """Residues a_0..a_{r-1} with a_0 e + ... + a_{r-1} A^{r-1} e + A^r e = 0 mod p."""

    p: int
    r: int
    coeffs: tuple[int, ...]

    def monic(self) -> tuple[int, ...]:
        return (*self.coeffs, 1)

    def shift_vectors(self, n: int) -> list[list[int]]:
        """The n - r shifted copies of (a_0, ..., a_{r-1}, 1) padded to length n."""
        base = list(self.monic())
        return [[0] * i + base + [0] * (n - self.r - 1 - i) for i in range(n - self.r)]


def annihilator_poly(g: Graph, p: int) -> AnnihilatorPoly:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    a = adjacency(g)
    cols = krylov_columns(a, g.n + 1)
    w = IntMatrix.from_columns(cols[: g.n])
    r = rank_mod_p(w, p)
    # r >= 1 because e is nonzero mod p
    basis = IntMatrix.from_columns(cols[:r])
    target = [-x for x in cols[r]]
    sol = solve_mod_p(basis, target, p)
    if sol is None:
        raise ArithmeticError(f"A^{r} e is not in the span of the first {r} walk columns mod {p}")
    ann = AnnihilatorPoly(p, r, tuple(sol))
    check = _combine(cols, ann.monic())
    if any(x % p for x in check):
        raise ArithmeticError("annihilator verification failed")
    return ann


def _combine(cols: Sequence[Sequence[int]], coeffs: Sequence[int]) -> list[int]:
    n = len(cols[0])
    out = [0] * n
    for c, v in zip(coeffs, cols):
        if c:
            for i in range(n):
                out[i] += c * v[i]
    return out


def annihilator_vector(g: Graph, ann: AnnihilatorPoly) -> list[int]:
    """M(G) e as an integer vector, M = a_0 I + ... + a_{r-1} A^{r-1} + A^r."""
    cols = krylov_columns(adjacency(g), ann.r + 1)
    return _combine(cols, ann.monic())


def annihilator_matrix(g: Graph, ann: AnnihilatorPoly) -> IntMatrix:
    return poly_in_matrix(adjacency(g), ann.monic())


def poly_in_matrix(a: IntMatrix, coeffs_low_first: Sequence[int]) -> IntMatrix:
    """sum_k coeffs[k] A^k by Horner's rule."""
    n = a.shape[0]
    acc = IntMatrix([[0] * n for _ in range(n)])
    for c in reversed(coeffs_low_first):
        prod = (acc @ a).tolist()
        for i in range(n):
            prod[i][i] += c
        acc = IntMatrix(prod)
    return acc


def m_matrix_even(g: Graph, phi: CharPoly | None = None) -> IntMatrix:
    """sum_k c_{2k} A^{ceil(n/2)-k} over even-indexed charpoly coefficients.

    For odd n the sum stops at c_{n-1} A, so there is no constant term.
    """
    a = adjacency(g)
    phi = phi or charpoly(a)
    n = g.n
    top = (n + 1) // 2
    coeffs = [0] * (top + 1)
    for k in range(n // 2 + 1):
        coeffs[top - k] = phi.c(2 * k)
    return poly_in_matrix(a, coeffs)


def _compressed_columns(g: Graph, p: int, ann: AnnihilatorPoly) -> tuple[list[list[int]], list[list[int]]]:
    if ann.p != p:
        raise ValueError(f"annihilator was built for p={ann.p}, not {p}")
    a = adjacency(g)
    head = krylov_columns(a, ann.r)
    tail = krylov_columns(a, g.n - ann.r, start=annihilator_vector(g, ann))
    return head, tail


def bar_walk_matrix(g: Graph, p: int, ann: AnnihilatorPoly) -> IntMatrix:
    head, tail = _compressed_columns(g, p, ann)
    return IntMatrix.from_columns(head + tail)


def hat_walk_matrix(g: Graph, p: int, ann: AnnihilatorPoly) -> IntMatrix:
    head, tail = _compressed_columns(g, p, ann)
    divided = []
    for j, col in enumerate(tail):
        q = []
        for x in col:
            d, rem = divmod(x, p)
            if rem:
                raise NonIntegralColumn(f"column {ann.r + j} is not divisible by {p}")
            q.append(d)
        divided.append(q)
    return IntMatrix.from_columns(head + divided)
