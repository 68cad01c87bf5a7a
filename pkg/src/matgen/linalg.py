"""Exact dense linear algebra over ZZ, prime fields and integer (Laurent) polynomials.

Everything here works on Python integers, so entries never overflow.  The
lattice helpers (`hnf`, `snf`, `LatticeBasis`) are what the generation tests
are built on; the span classes at the bottom give ranks over F_p and over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "ResourceCapExceeded",
    "Ring",
    "ZZ",
    "ZT",
    "ZTT",
    "GF",
    "LaurentPoly",
    "IntMatrix",
    "LatticeBasis",
    "DimensionMismatch",
    "hnf",
    "snf",
    "lattice_membership",
    "xgcd",
    "det",
    "rank_mod_p",
    "ModpSpan",
    "RationalSpan",
    "rational_inverse",
    "is_prime",
]


class ResourceCapExceeded(RuntimeError):
    """A computation would exceed a configured size cap."""


class DimensionMismatch(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``kind`` is one of ZZ, GF, ZT (=ZZ[t]) or ZTT (=ZZ[t, 1/t])."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "GF", "ZT", "ZTT"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "GF" and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_poly(self) -> bool:
        return self.kind in ("ZT", "ZTT")

    def __str__(self) -> str:
        return {"ZZ": "ZZ", "ZT": "ZZ[t]", "ZTT": "ZZ[t,1/t]"}.get(self.kind, f"GF({self.p})")


ZZ = Ring("ZZ")
ZT = Ring("ZT")
ZTT = Ring("ZTT")


def GF(p: int) -> Ring:
    return Ring("GF", p)


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Finite map exponent -> nonzero integer coefficient, i.e. an element of ZZ[t, 1/t]."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def t(cls, e: int = 1, c: int = 1) -> "LaurentPoly":
        return cls({e: c})

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    @property
    def min_exponent(self) -> int:
        return min(self.terms) if self.terms else 0

    def __call__(self, value):
        """Evaluate at an integer or Fraction (negative exponents need a nonzero value)."""
        total = 0
        for e, c in self.terms.items():
            total += c * (Fraction(value) ** e if e < 0 else value**e)
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Matrices


def _zero(ring: Ring):
    return LaurentPoly() if ring.is_poly else 0


def _norm_entry(x, ring: Ring):
    if ring.kind == "GF":
        return int(x) % ring.p
    if ring.is_poly:
        x = x if isinstance(x, LaurentPoly) else LaurentPoly({0: int(x)})
        if ring.kind == "ZT" and x.terms and x.min_exponent < 0:
            raise ValueError("negative exponent in a ZZ[t] entry")
        return x
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        return int(x)
    return int(x)


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """Dense matrix with exact entries, stored row-major."""

    rows: int
    cols: int
    entries: tuple
    ring: Ring = ZZ

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entries length does not match shape")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ring: Ring = ZZ) -> "IntMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(nrows, ncols, tuple(_norm_entry(x, ring) for r in rows for x in r), ring)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, ring: Ring = ZZ) -> "IntMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple(_zero(ring) for _ in range(rows * cols)), ring)

    @classmethod
    def identity(cls, n: int, ring: Ring = ZZ) -> "IntMatrix":
        one = LaurentPoly({0: 1}) if ring.is_poly else 1
        z = _zero(ring)
        return cls(n, n, tuple(one if i == j else z for i in range(n) for j in range(n)), ring)

    @classmethod
    def unit(cls, n: int, i: int, j: int, ring: Ring = ZZ, value=1) -> "IntMatrix":
        """E_ij scaled by ``value``; indices are 1-based and taken modulo n."""
        i, j = (i - 1) % n, (j - 1) % n
        z = _zero(ring)
        v = _norm_entry(value, ring)
        return cls(n, n, tuple(v if (a, b) == (i, j) else z for a in range(n) for b in range(n)), ring)

    @classmethod
    def shift(cls, n: int, ring: Ring = ZZ) -> "IntMatrix":
        """X = E_21 + E_32 + ... + E_n,n-1 + E_1n, so X e_i = e_{i+1}."""
        return sum((cls.unit(n, i + 1, i, ring) for i in range(1, n + 1)), cls.zeros(n, n, ring))

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries, self.ring))

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r}, ring={self.ring})"

    # -- arithmetic -------------------------------------------------------
    def _check_compatible(self, other: "IntMatrix"):
        if self.ring != other.ring:
            raise DimensionMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def _wrap(self, rows, cols, entries) -> "IntMatrix":
        if self.ring.kind == "GF":
            p = self.ring.p
            entries = tuple(e % p for e in entries)
        return IntMatrix(rows, cols, tuple(entries), self.ring)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check_compatible(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch in addition")
        return self._wrap(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self.rows, self.cols, (-a for a in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "IntMatrix":
        return self._wrap(self.rows, self.cols, (c * a for a in self.entries))

    def __rmul__(self, c):
        if isinstance(c, (int, LaurentPoly)):
            return self.scale(c)
        return NotImplemented

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_compatible(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        if self.ring.is_poly:
            z = LaurentPoly()
            out = []
            for i in range(n):
                ai = a[i * k : (i + 1) * k]
                for j in range(m):
                    acc = z
                    for t in range(k):
                        x = ai[t]
                        if x:
                            y = b[t * m + j]
                            if y:
                                acc = acc + x * y
                    out.append(acc)
            return IntMatrix(n, m, tuple(out), self.ring)
        bcols = [b[j::m] for j in range(m)]
        out = [sum(x * y for x, y in zip(a[i * k : (i + 1) * k], col)) for i in range(n) for col in bcols]
        return self._wrap(n, m, out)

    def __pow__(self, e: int) -> "IntMatrix":
        if not self.is_square:
            raise DimensionMismatch("power of a non-square matrix")
        if e < 0:
            raise ValueError("negative power")
        result = IntMatrix.identity(self.rows, self.ring)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)), self.ring)

    T = property(transpose)

    def trace(self):
        if not self.is_square:
            raise DimensionMismatch("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), _zero(self.ring))

    def flatten(self) -> tuple:
        return self.entries

    def reduce_mod(self, p: int) -> "IntMatrix":
        if self.ring != ZZ:
            raise ValueError("reduction mod p needs an integer matrix")
        return IntMatrix(self.rows, self.cols, tuple(e % p for e in self.entries), GF(p))

    def lift(self) -> "IntMatrix":
        """Forget the modulus: canonical representatives as an integer matrix."""
        return IntMatrix(self.rows, self.cols, self.entries, ZZ) if self.ring.kind == "GF" else self

    def evaluate(self, value) -> list[list]:
        """Substitute t = value in a polynomial matrix (returns rows of ints/Fractions)."""
        return [[e(value) for e in self.row(i)] for i in range(self.rows)]

    def block(self, r0: int, c0: int, nr: int, nc: int) -> "IntMatrix":
        return IntMatrix(nr, nc, tuple(self[r0 + i, c0 + j] for i in range(nr) for j in range(nc)), self.ring)

    @classmethod
    def block_diag(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        ring = blocks[0].ring
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        rows = [[_zero(ring)] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    rows[r + i][c + j] = b[i, j]
            r += b.rows
            c += b.cols
        return cls(n, m, tuple(x for row in rows for x in row), ring)

    @classmethod
    def kron(cls, a: "IntMatrix", b: "IntMatrix") -> "IntMatrix":
        rows = []
        for i in range(a.rows):
            for k in range(b.rows):
                rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
        return cls.from_rows(rows, a.ring)

    def det(self):
        return det(self)


# ---------------------------------------------------------------------------
# scalar helpers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def det(M: IntMatrix | Sequence[Sequence[int]]):
    """Determinant by fraction-free (Bareiss) elimination; over GF(p) by Gaussian elimination."""
    ring = ZZ
    if isinstance(M, IntMatrix):
        if not M.is_square:
            raise DimensionMismatch("determinant of a non-square matrix")
        ring = M.ring
        rows = M.to_rows()
    else:
        rows = [list(r) for r in M]
    n = len(rows)
    if n == 0:
        return 1
    if ring.kind == "GF":
        p = ring.p
        return _det_mod_p(rows, p)
    if ring.is_poly:
        raise NotImplementedError("determinants over polynomial rings are not supported")
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def _det_mod_p(rows, p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    n = len(a)
    d = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        d = d * a[k][k] % p
        inv = pow(a[k][k], -1, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return d % p


def rank_mod_p(rows: Iterable[Sequence[int]], p: int) -> int:
    span = ModpSpan(None, p)
    for r in rows:
        span.add(r)
    return span.rank


def rational_inverse(M: IntMatrix | Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises ZeroDivisionError when singular."""
    rows = M.to_rows() if isinstance(M, IntMatrix) else [list(r) for r in M]
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [r[n:] for r in a]


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        if M.ring != ZZ:
            raise ValueError("integer matrix required")
        return M.to_rows()
    return [[int(x) for x in r] for r in M]


def _hnf_rows(rows: list[list[int]], ncols: int, track: bool = False):
    """Row-style HNF of ``rows`` in place.  Returns (nonzero rows, transform or None)."""
    m = len(rows)
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= m:
            break
        # gcd-combine column c over rows r..m-1 into row r
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            if x == 0:
                a[r], a[i] = a[i], a[r]
                if track:
                    u[r], u[i] = u[i], u[r]
                continue
            g, s, t = xgcd(x, y)
            xg, yg = x // g, y // g
            ar, ai = a[r], a[i]
            a[r] = [s * p + t * q for p, q in zip(ar, ai)]
            a[i] = [xg * q - yg * p for p, q in zip(ar, ai)]
            if track:
                ur, ui = u[r], u[i]
                u[r] = [s * p + t * q for p, q in zip(ur, ui)]
                u[i] = [xg * q - yg * p for p, q in zip(ur, ui)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if track:
                u[r] = [-x for x in u[r]]
        piv = a[r][c]
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                if track:
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return a[:r], u, a


def hnf(M: IntMatrix | Sequence[Sequence[int]]) -> tuple["LatticeBasis", IntMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` where ``U`` is unimodular and ``U @ M`` equals the HNF
    rows of ``H`` followed by zero rows.
    """
    rows = _as_rows(M)
    ncols = M.cols if isinstance(M, IntMatrix) else (len(rows[0]) if rows else 0)
    nz, u, _ = _hnf_rows(rows, ncols, track=True)
    basis = LatticeBasis(ncols)
    basis._set_hnf(nz)
    U = IntMatrix.from_rows(u) if u else IntMatrix(0, 0, ())
    return basis, U


def snf(M: IntMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... | d_r (r = rank over Q)."""
    a = [r[:] for r in _as_rows(M)]
    a = [r for r in a if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    divisors = []
    while a:
        a = [r for r in a if any(r)]
        if not a:
            break
        ncols = len(a[0])
        # move an entry of least absolute value to (0,0)
        while True:
            best = None
            for i, r in enumerate(a):
                for j, x in enumerate(r):
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            _, bi, bj = best
            a[0], a[bi] = a[bi], a[0]
            for r in a:
                r[0], r[bj] = r[bj], r[0]
            piv = a[0][0]
            dirty = False
            for i in range(1, len(a)):
                q = a[i][0] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[0])]
                if a[i][0]:
                    dirty = True
            for j in range(1, ncols):
                q = a[0][j] // piv
                if q:
                    for r in a:
                        r[j] -= q * r[0]
                if a[0][j]:
                    dirty = True
            if dirty:
                continue
            # piv must divide every remaining entry
            bad = next(((i, j) for i in range(1, len(a)) for j in range(1, ncols) if a[i][j] % piv), None)
            if bad is None:
                break
            a[0] = [x + y for x, y in zip(a[0], a[bad[0]])]
        divisors.append(abs(a[0][0]))
        a = [r[1:] for r in a[1:]]
        if not a or not a[0]:
            break
    return divisors


# ---------------------------------------------------------------------------
# lattices


class LatticeBasis:
    """A sublattice of ZZ^dim kept as a row-style HNF basis, built incrementally."""

    def __init__(self, dim: int, rows: Iterable[Sequence[int]] = ()):
        self.dim = dim
        self._rows: dict[int, list[int]] = {}  # pivot column -> row
        self._divisors: list[int] | None = None
        for r in rows:
            self.add(r)

    def _set_hnf(self, rows: list[list[int]]):
        self._rows = {}
        for r in rows:
            c = next(j for j, x in enumerate(r) if x)
            self._rows[c] = list(r)
        self._divisors = None

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], dim: int | None = None) -> "LatticeBasis":
        rows = [list(r) for r in rows]
        if dim is None:
            dim = len(rows[0]) if rows else 0
        basis = cls(dim)
        nz, _, _ = _hnf_rows(rows, dim)
        basis._set_hnf(nz)
        return basis

    @classmethod
    def full(cls, dim: int) -> "LatticeBasis":
        basis = cls(dim)
        basis._rows = {i: [int(i == j) for j in range(dim)] for i in range(dim)}
        return basis

    # -- queries ----------------------------------------------------------
    @property
    def rows(self) -> list[list[int]]:
        return [self._rows[c][:] for c in sorted(self._rows)]

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def as_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.rows) if self._rows else IntMatrix(0, self.dim, ())

    @property
    def elementary_divisors(self) -> list[int]:
        if self._divisors is None:
            self._divisors = snf(self.rows) if self._rows else []
        return list(self._divisors)

    @property
    def is_full(self) -> bool:
        """True iff this is all of ZZ^dim."""
        return self.rank == self.dim and all(self._rows[c][c] == 1 for c in self._rows)

    def _check(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in a lattice of dimension {self.dim}")

    def reduce(self, v: Sequence[int]) -> list[int]:
        """Reduce v against the basis; the result is zero iff v is in the lattice."""
        self._check(v)
        v = list(v)
        for c in sorted(self._rows):
            if v[c]:
                r = self._rows[c]
                q = v[c] // r[c]
                if q:
                    v = [x - q * y for x, y in zip(v, r)]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        self._check(v)
        v = list(v)
        for c in range(self.dim):
            x = v[c]
            if not x:
                continue
            r = self._rows.get(c)
            if r is None or x % r[c]:
                return False
            q = x // r[c]
            v = [a - q * b for a, b in zip(v, r)]
        return True

    __contains__ = contains

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, LatticeBasis):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __repr__(self):
        return f"LatticeBasis(dim={self.dim}, rank={self.rank}, rows={self.rows})"

    # -- updates ----------------------------------------------------------
    def add(self, v: Sequence[int]) -> bool:
        """Insert v; return True iff the lattice grew."""
        self._check(v)
        if self.contains(v):
            return False
        v = list(v)
        for c in range(self.dim):
            x = v[c]
            if not x:
                continue
            r = self._rows.get(c)
            if r is None:
                if x < 0:
                    v = [-a for a in v]
                self._rows[c] = v
                break
            a = r[c]
            if x % a == 0:
                q = x // a
                v = [p - q * s for p, s in zip(v, r)]
                continue
            g, s, t = xgcd(a, x)
            ag, xg = a // g, x // g
            self._rows[c] = [s * p + t * q for p, q in zip(r, v)]
            v = [ag * q - xg * p for p, q in zip(r, v)]
        self._reduce_above()
        self._divisors = None
        return True

    def _reduce_above(self):
        cols = sorted(self._rows)
        for k, c in enumerate(cols):
            piv_row = self._rows[c]
            piv = piv_row[c]
            for c2 in cols[:k]:
                r = self._rows[c2]
                q = r[c] // piv
                if q:
                    self._rows[c2] = [x - q * y for x, y in zip(r, piv_row)]

    def copy(self) -> "LatticeBasis":
        out = LatticeBasis(self.dim)
        out._rows = {c: r[:] for c, r in self._rows.items()}
        out._divisors = self._divisors
        return out

    def index_in(self, other: "LatticeBasis") -> int | None:
        """[other : self] when self is a full-rank sublattice of ``other``; None when infinite."""
        if not other.contains_lattice(self):
            raise ValueError("not a sublattice")
        if self.rank != other.rank:
            return None
        return math.prod(self.elementary_divisors) // math.prod(other.elementary_divisors)


def lattice_membership(B: LatticeBasis, v: Sequence[int]) -> bool:
    return B.contains(v)


# ---------------------------------------------------------------------------
# spans over fields


class ModpSpan:
    """Row echelon basis over GF(p), grown one vector at a time."""

    def __init__(self, dim: int | None, p: int):
        self.dim = dim
        self.p = p
        self._rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in v]
        for c, r in self._rows.items():
            x = v[c]
            if x:
                v = [(a - x * b) % p for a, b in zip(v, r)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        if self.dim is None:
            self.dim = len(v)
        elif len(v) != self.dim:
            raise DimensionMismatch("dimension mismatch")
        v = self.reduce(v)
        c = next((j for j, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = pow(v[c], -1, self.p)
        self._rows[c] = [x * inv % self.p for x in v]
        return True


class RationalSpan:
    """Q-span of sparse integer vectors (dicts key -> int), leading-key echelon form.

    Keys must be mutually comparable; the pivot of a row is its largest key.
    Rows are kept primitive so no fractions appear.
    """

    def __init__(self):
        self._rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, v: dict) -> dict:
        v = {k: c for k, c in v.items() if c}
        done: dict = {}
        while v:
            k = max(v)
            row = self._rows.get(k)
            if row is None:
                done[k] = v.pop(k)
                # the remaining keys are still reduced
                continue
            a, b = row[k], v[k]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            if fa != 1:
                v = {kk: c * fa for kk, c in v.items()}
                done = {kk: c * fa for kk, c in done.items()}
            for kk, c in row.items():
                nv = v.get(kk, 0) - fb * c
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
        return done

    def add(self, v: dict) -> bool:
        r = self._reduce(v)
        if not r:
            return False
        g = 0
        for c in r.values():
            g = math.gcd(g, c)
        k = max(r)
        if r[k] < 0:
            g = -g
        self._rows[k] = {kk: c // g for kk, c in r.items()}
        return True

    def contains(self, v: dict) -> bool:
        return not self._reduce(v)
