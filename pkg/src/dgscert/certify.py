"""DGS certificates: the odd-square-free test, SNF profile, and level bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    FactorizationIncomplete,
    NotOddPrime,
    RankHypothesisFailed,
    SingularWalkMatrix,
)
from .graph import Graph, adjacency, complement
from .linalg import (
    WORD_LIMIT,
    CharPoly,
    IntMatrix,
    charpoly,
    det,
    nullspace_mod_p,
    rank_mod_p,
    snf,
)
from .primes import factorize, is_certain_prime, is_prime, is_square_free
from .walk import krylov_columns, shifted_adjacency, walk_matrix

DEFAULT_BUDGET_MS = 2000.0

# provenance rule names
RULE_EVEN = "rank2-half"  # p = 2 with rank_2 W = ceil(n/2)
RULE_ODD = "rankp-corank1"  # odd p with rank_p W = n - 1
RULE_NONE = "no-reduction"  # hypothesis fails; exponent kept
RULE_BIG = "prime-beyond-word"  # rank not computed for huge primes
RULE_UNFACTORED = "unfactored"  # composite cofactor left at full multiplicity


class Kind(str, enum.Enum):
    CERTIFIED = "CertifiedDGS"
    LEVEL_BOUND = "LevelBound"
    MATE_FOUND = "MateFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Theorem1Result:
    certified: bool
    reason: str
    det_w: int
    quotient: int | None = None


def theorem1_check(g: Graph, budget_ms: float | None = DEFAULT_BUDGET_MS) -> Theorem1Result:
    """Certify g when det W / 2^floor(n/2) is odd and square-free."""
    d = det(walk_matrix(g).w)
    half = g.n // 2
    if d == 0:
        return Theorem1Result(False, "walk matrix is singular", d)
    if d % (1 << half):
        return Theorem1Result(False, f"2^{half} does not divide det W", d)
    q = abs(d) >> half
    if q % 2 == 0:
        return Theorem1Result(False, "quotient is even", d, q)
    sf = is_square_free(q, budget_ms)
    if sf is None:
        raise FactorizationIncomplete(f"could not finish factoring the odd quotient {q}")
    if not sf:
        return Theorem1Result(False, "quotient is not square-free", d, q)
    return Theorem1Result(True, "quotient is odd and square-free", d, q)


def snf_profile_matches(factors: tuple[int, ...] | list[int], n: int, budget_ms: float | None = DEFAULT_BUDGET_MS) -> bool:
    """diag(1 x ceil(n/2), 2 x (floor(n/2) - 1), 2m) with m odd and square-free."""
    factors = list(factors)
    if len(factors) != n:
        return False
    ones, twos = (n + 1) // 2, n // 2
    if any(x != 1 for x in factors[:ones]):
        return False
    if twos == 0:
        return True
    if any(x != 2 for x in factors[ones:-1]):
        return False
    last = factors[-1]
    if last % 2 or (last // 2) % 2 == 0:
        return False
    sf = is_square_free(last // 2, budget_ms)
    if sf is None:
        raise FactorizationIncomplete(f"could not finish factoring {last // 2}")
    return sf


def snf_profile_check(g: Graph, budget_ms: float | None = DEFAULT_BUDGET_MS) -> bool:
    return snf_profile_matches(snf(walk_matrix(g).w).d, g.n, budget_ms)


@dataclass(frozen=True)
class Provenance:
    prime: int
    exponent_in_dn: int
    exponent_in_bound: int
    rule: str
    rank: int | None = None


@dataclass(frozen=True)
class LevelBound:
    divisor: int
    provenance: tuple[Provenance, ...]
    complete: bool
    dn: int

    @property
    def certifies(self) -> bool:
        return self.divisor == 1


def level_bound(g: Graph, budget_ms: float | None = DEFAULT_BUDGET_MS, *, w: IntMatrix | None = None,
                factors: tuple[int, ...] | None = None) -> LevelBound:
    """Divisor that every level of every Q in the admissible set must divide.

    Starts from the last invariant factor d_n and strips one power of each
    prime whose rank hypothesis holds: p = 2 needs rank_2 W = ceil(n/2), odd
    p needs rank_p W = n - 1.
    """
    w = w if w is not None else walk_matrix(g).w
    factors = factors if factors is not None else snf(w).d
    dn = factors[-1]
    if dn == 0:
        raise SingularWalkMatrix("det W = 0, so no rational orthogonal matrix is determined")
    n = g.n
    fac = factorize(dn, budget_ms)
    divisor = 1
    prov = []
    for p in sorted(fac.primes):
        e = fac.primes[p]
        keep, rule, rank = e, RULE_NONE, None
        if p >= WORD_LIMIT or not is_certain_prime(p):
            rule = RULE_BIG
        else:
            rank = rank_mod_p(w, p)
            if p == 2 and rank == (n + 1) // 2:
                keep, rule = e - 1, RULE_EVEN
            elif p != 2 and rank == n - 1:
                keep, rule = e - 1, RULE_ODD
        divisor *= p**keep
        prov.append(Provenance(p, e, keep, rule, rank))
    if not fac.complete:
        divisor *= fac.cofactor
        prov.append(Provenance(fac.cofactor, 1, 1, RULE_UNFACTORED))
    return LevelBound(divisor, tuple(prov), fac.complete, dn)


# odd-p machinery ---------------------------------------------------------------


def _poly_compose_affine(coeffs_high_first: list[int], a: int, b: int) -> list[int]:
    """Coefficients (high first) of f(a + b x) given f high first."""
    out = [0]
    for c in coeffs_high_first:
        # out = out * (a + b x) + c, with out stored low-first while building
        nxt = [0] * (len(out) + 1)
        for i, x in enumerate(out):
            nxt[i] += a * x
            nxt[i + 1] += b * x
        nxt[0] += c
        out = nxt
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out[::-1]


def phi_shifted(g: Graph, t: int, *, phi: CharPoly | None = None, phi_bar: CharPoly | None = None) -> CharPoly:
    """det(xI - A - tJ) from the charpolys of g and its complement alone.

    Uses (1+t) phi_G(x) - (-1)^n t phi_Gbar(-1-x).
    """
    n = g.n
    phi = phi or charpoly(adjacency(g))
    phi_bar = phi_bar or charpoly(adjacency(complement(g)))
    first = [(1 + t) * c for c in phi.full()]
    second = _poly_compose_affine(phi_bar.full(), -1, -1)
    sign = -1 if n % 2 else 1
    out = [x - sign * t * y for x, y in zip(first, second)]
    assert out[0] == 1
    return CharPoly(tuple(out[1:]))


def roots_mod_p(poly: CharPoly, p: int) -> list[int]:
    return [x for x in range(p) if poly.eval_mod(x, p) == 0]


def find_t0(g: Graph, p: int) -> int | None:
    """Least t in 0..p-1 for which phi(x, t) has at most one root in F_p."""
    if p == 2 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    phi = charpoly(adjacency(g))
    phi_bar = charpoly(adjacency(complement(g)))
    for t in range(p):
        if len(roots_mod_p(phi_shifted(g, t, phi=phi, phi_bar=phi_bar), p)) <= 1:
            return t
    return None


@dataclass(frozen=True)
class NullVectorReport:
    p: int
    eta: tuple[int, ...]
    recurrence_ok: bool
    root_ok: bool
    companion_ok: bool

    @property
    def ok(self) -> bool:
        return self.recurrence_ok and self.root_ok and self.companion_ok


def companion_matrix(phi: CharPoly) -> list[list[int]]:
    """Ones on the subdiagonal, last column (-c_n, ..., -c_1)."""
    n = phi.degree
    c = [[0] * n for _ in range(n)]
    for k in range(n):
        if k:
            c[k][k - 1] = 1
        c[k][n - 1] = -phi.c(n - k)
    return c


def null_vector_check(g: Graph, p: int, *, shift: int = 0) -> NullVectorReport:
    """Check the identities satisfied by the null vector of W mod p when rank_p W = n - 1.

    The null vector is scaled to eta = (a_0, ..., a_{n-2}, 1).  With
    lam = a_{n-2} - c_1 (c_1 vanishes for an adjacency matrix, not for a
    shifted one) three checks run mod p: the coefficient recurrence
    a_0 lam = -c_n, -a_{i-1} + a_i lam = -c_{n-i}; phi(lam) = 0; and
    (lam I - C) eta = 0 for the companion matrix C of phi.
    """
    if p == 2 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")
    n = g.n
    a_mat = shifted_adjacency(g, shift) if shift else adjacency(g)
    w = IntMatrix.from_columns(krylov_columns(a_mat, n))
    if n < 2 or rank_mod_p(w, p) != n - 1:
        raise RankHypothesisFailed(f"rank_{p} W != n - 1")
    (v,) = nullspace_mod_p(w, p)
    last = v[-1] % p
    if last == 0:
        raise ArithmeticError("last coordinate of the null vector vanished; first n-1 columns dependent")
    inv = pow(last, -1, p)
    eta = tuple(x * inv % p for x in v)
    a = eta[:-1]
    phi = charpoly(a_mat)
    lam = (a[-1] - phi.c(1)) % p

    rec = (a[0] * lam + phi.c(n)) % p == 0
    for i in range(1, n - 1):
        rec = rec and (-a[i - 1] + a[i] * lam + phi.c(n - i)) % p == 0
    root = phi.eval_mod(lam, p) == 0
    comp = companion_matrix(phi)
    resid = [
        (lam * eta[i] - sum(comp[i][j] * eta[j] for j in range(n))) % p for i in range(n)
    ]
    return NullVectorReport(p, eta, rec, root, not any(resid))


# verdicts -----------------------------------------------------------------------


@dataclass
class Verdict:
    kind: Kind
    reason: str
    bound: LevelBound | None = None
    theorem1: Theorem1Result | None = None
    det_w: int | None = None
    snf: tuple[int, ...] | None = None
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)


def certify(g: Graph, budget_ms: float | None = DEFAULT_BUDGET_MS) -> Verdict:
    w = walk_matrix(g).w
    d = det(w)
    factors = snf(w).d
    if d == 0:
        t1 = Theorem1Result(False, "walk matrix is singular", d)
        return Verdict(Kind.INCONCLUSIVE, "walk matrix is singular", theorem1=t1, det_w=d, snf=factors)
    notes = []
    t1 = None
    try:
        t1 = theorem1_check(g, budget_ms)
    except FactorizationIncomplete as exc:
        notes.append(f"odd-square-free test unresolved: {exc}")
    bound = level_bound(g, budget_ms, w=w, factors=factors)
    if not bound.complete:
        notes.append("last invariant factor not fully factored")
    if t1 is not None and t1.certified:
        return Verdict(Kind.CERTIFIED, t1.reason, bound, t1, d, factors, notes=notes)
    if bound.certifies:
        return Verdict(Kind.CERTIFIED, "level bound divisor is 1", bound, t1, d, factors, notes=notes)
    return Verdict(Kind.LEVEL_BOUND, f"every level divides {bound.divisor}", bound, t1, d, factors, notes=notes)


__all__ = [
    "Kind",
    "LevelBound",
    "NullVectorReport",
    "Provenance",
    "Theorem1Result",
    "Verdict",
    "certify",
    "find_t0",
    "level_bound",
    "null_vector_check",
    "phi_shifted",
    "snf_profile_check",
    "snf_profile_matches",
    "theorem1_check",
]
