"""Exact dense linear algebra over the integers, the rationals and F_p.

Everything here works on Python integers and `fractions.Fraction`; no floating
point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import MatrixFormatError, NonSquare, NotPrime, NotSupported, Singular
from .primes import is_prime

WORD_LIMIT = 1 << 64


class _DenseMatrix:
    """Row-major immutable matrix; subclasses fix the entry type."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(self._coerce(x) for x in r) for r in rows)
        if not data or not data[0]:
            raise ValueError("matrices need at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @staticmethod
    def _coerce(x):
        return x

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, _DenseMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [list(c) for c in zip(*self.rows)]

    @property
    def T(self):
        return type(self)(zip(*self.rows))

    def apply(self, v: Sequence) -> list:
        """Matrix times column vector."""
        return [sum(a * b for a, b in zip(r, v)) for r in self.rows]

    def __matmul__(self, other: "_DenseMatrix") -> "_DenseMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        out = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows]
        if isinstance(self, RatMatrix) or isinstance(other, RatMatrix):
            return RatMatrix(out)
        return IntMatrix(out)


class IntMatrix(_DenseMatrix):
    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                return int(x)
            raise TypeError(f"IntMatrix entries must be integers, got {x!r}")
        return x

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, d: Sequence[int]) -> "IntMatrix":
        n = len(d)
        return cls([[d[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(zip(*cols))

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        """Read the text format: a "rows cols" line followed by the rows."""
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise MatrixFormatError("empty matrix file")
        try:
            header = [int(x) for x in lines[0].split()]
            body = [[int(x) for x in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise MatrixFormatError(f"non-integer token: {exc}") from None
        if len(header) != 2 or min(header) < 1:
            raise MatrixFormatError("first line must be 'rows cols' with positive sizes")
        r, c = header
        if len(body) != r or any(len(row) != c for row in body):
            raise MatrixFormatError(f"body does not match declared shape {r}x{c}")
        return cls(body)

    def dumps(self) -> str:
        r, c = self.shape
        return "\n".join([f"{r} {c}"] + [" ".join(str(x) for x in row) for row in self.rows]) + "\n"


class RatMatrix(_DenseMatrix):
    """Rational matrix; `Fraction` keeps every entry in lowest terms."""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        return Fraction(x)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def to_int(self) -> IntMatrix:
        if not self.is_integral:
            raise ValueError("matrix has non-integral entries")
        return IntMatrix([[int(x) for x in r] for r in self.rows])

    def scale(self, k) -> "RatMatrix":
        return RatMatrix([[k * x for x in r] for r in self.rows])


# Smith normal form -------------------------------------------------------------


@dataclass(frozen=True)
class SnfDecomposition:
    """Invariant factors d_1 | d_2 | ...; with transforms, m = U diag(d) V."""

    d: tuple[int, ...]
    U: IntMatrix | None = field(default=None, compare=False)
    V: IntMatrix | None = field(default=None, compare=False)

    @property
    def last(self) -> int:
        return self.d[-1]

    def diagonal(self, shape: tuple[int, int]) -> IntMatrix:
        r, c = shape
        return IntMatrix([[self.d[i] if i == j and i < len(self.d) else 0 for j in range(c)] for i in range(r)])


def snf(m: IntMatrix, want_transforms: bool = False) -> SnfDecomposition:
    """Smith normal form by gcd pivoting.

    Each step moves the smallest nonzero entry of the trailing block to the
    pivot, clears its row and column with Euclidean steps, and folds in any
    row whose entries the pivot fails to divide, so the divisibility chain
    comes out directly.
    """
    a = [list(r) for r in m.rows]
    rows, cols = m.shape
    # U and V are kept as the inverses of the accumulated row/column operations.
    U = [[int(i == j) for j in range(rows)] for i in range(rows)] if want_transforms else None
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if want_transforms else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if U is not None:
            for r in U:
                r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        if V is not None:
            V[j], V[k] = V[k], V[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src; U absorbs the inverse as a column operation
        if q == 0:
            return
        rs, rd = a[src], a[dst]
        for j in range(cols):
            if rs[j]:
                rd[j] += q * rs[j]
        if U is not None:
            for r in U:
                r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        if V is not None:
            vs, vd = V[src], V[dst]
            for j in range(cols):
                vs[j] -= q * vd[j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if U is not None:
            for r in U:
                r[i] = -r[i]

    d: list[int] = []
    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                ri = a[i]
                for j in range(t, cols):
                    x = ri[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                d.extend([0] * (min(rows, cols) - t))
                return _finish(d, U, V)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) if any(a[i][j] % p for j in range(t + 1, cols))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        d.append(a[t][t])
    return _finish(d, U, V)


def _finish(d, U, V) -> SnfDecomposition:
    if U is None:
        return SnfDecomposition(tuple(d))
    return SnfDecomposition(tuple(d), IntMatrix(U), IntMatrix(V))


# determinant, characteristic polynomial --------------------------------------


def det(m: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.shape} matrix")
    a = [list(r) for r in m.rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class CharPoly:
    """Monic x^n + c_1 x^(n-1) + ... + c_n, stored as (c_1, ..., c_n)."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full(self) -> list[int]:
        """Coefficients from the leading 1 down to the constant term."""
        return [1, *self.coeffs]

    def c(self, i: int) -> int:
        return 1 if i == 0 else self.coeffs[i - 1]

    def __call__(self, x):
        acc = 1
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def eval_mod(self, x: int, p: int) -> int:
        acc = 1
        for c in self.coeffs:
            acc = (acc * x + c) % p
        return acc

    def __str__(self) -> str:
        n = self.degree
        terms = [f"x^{n}" if n > 1 else "x"]
        for i, c in enumerate(self.coeffs, 1):
            if c:
                k = n - i
                mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
                mag = abs(c)
                body = f"{mag}{mono}" if mag != 1 or not mono else mono
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)


def charpoly(m: IntMatrix) -> CharPoly:
    """Faddeev-LeVerrier; every division by k is exact over the integers."""
    if not m.is_square:
        raise NonSquare(f"characteristic polynomial of a {m.shape} matrix")
    n = m.shape[0]
    a = m.rows
    mk = [[0] * n for _ in range(n)]  # holds A M_{k-1}; M_0 = 0
    c_prev = 1
    coeffs = []
    for k in range(1, n + 1):
        for i in range(n):
            mk[i][i] += c_prev
        # diagonal shift above turned it into M_k = A M_{k-1} + c_{k-1} I
        mcols = list(zip(*mk))
        mk = [[sum(x * y for x, y in zip(row, col)) for col in mcols] for row in a]
        tr = sum(mk[i][i] for i in range(n))
        q, rem = divmod(-tr, k)
        assert rem == 0, "Faddeev-LeVerrier division must be exact"
        coeffs.append(q)
        c_prev = q
    return CharPoly(tuple(coeffs))


# finite fields -----------------------------------------------------------------


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p >= WORD_LIMIT:
        raise NotSupported(f"prime {p} exceeds the machine-word range")


def _echelon_mod_p(m: IntMatrix, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod p and its pivot columns."""
    a = [[x % p for x in r] for r in m.rows]
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        pr = a[r]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], pr)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_mod_p(m: IntMatrix, p: int) -> int:
    _check_prime(p)
    return len(_echelon_mod_p(m, p)[1])


def nullspace_mod_p(m: IntMatrix, p: int) -> list[list[int]]:
    """Basis of {v : m v = 0 over F_p}, entries in 0..p-1."""
    _check_prime(p)
    a, pivots = _echelon_mod_p(m, p)
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f] % p
        basis.append(v)
    return basis


def solve_mod_p(m: IntMatrix, b: Sequence[int], p: int) -> list[int] | None:
    """One solution of m x = b over F_p, or None if inconsistent."""
    _check_prime(p)
    rows, cols = m.shape
    aug = IntMatrix([list(r) + [bi] for r, bi in zip(m.rows, b)])
    a, pivots = _echelon_mod_p(aug, p)
    if cols in pivots:
        return None
    x = [0] * cols
    for row, pc in enumerate(pivots):
        x[pc] = a[row][cols]
    return x


# rational inverse --------------------------------------------------------------


def rat_inverse(m: IntMatrix | RatMatrix) -> RatMatrix:
    if not m.is_square:
        raise NonSquare(f"inverse of a {m.shape} matrix")
    n = m.shape[0]
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise Singular("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        pr = a[c]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
    return RatMatrix([r[n:] for r in a])


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
