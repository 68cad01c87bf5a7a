"""Circulant matrices and units of ZZ C_n, the idempotents Y1 they produce,
and the canonical form of representations satisfying the four relations
x^(n+1) = x, y x^n = y, y^2 = y, sum x^(n-i) y x^i = x^n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import IntMatrix, LatticeBasis, ResourceCapExceeded, det, rational_inverse
from .presentations import check_relations, relator_r2, standard_relators
from .words import evaluate_ncpoly

__all__ = [
    "circ",
    "circ_vector",
    "convolve",
    "higman_rank",
    "UnitPair",
    "find_circulant_units",
    "Y1Report",
    "NotInverse",
    "build_and_verify_Y1",
    "CanonicalForm",
    "RelationViolation",
    "MissingLeftIdentity",
    "NonIntegralTrace",
    "CanonicalizationFailed",
    "canonical_model",
    "canonicalize_representation",
    "random_unimodular",
    "NonnegRootResult",
    "nonneg_root_check",
    "DEFAULT_BOX_CAP",
]

DEFAULT_BOX_CAP = 2_000_000


class NotInverse(ValueError):
    pass


class RelationViolation(ValueError):
    pass


class MissingLeftIdentity(RelationViolation):
    """x^n y = y fails although the four listed relations hold."""


class NonIntegralTrace(ValueError):
    pass


class CanonicalizationFailed(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# circulants


def circ(c) -> IntMatrix:
    """sum_{i=1}^{n} c_{n-i+1} X^i: first row c, entry (a, b) = c[(b - a) mod n]."""
    c = [int(v) for v in c]
    n = len(c)
    if n == 0:
        raise ValueError("empty vector")
    return IntMatrix.from_rows([[c[(b - a) % n] for b in range(n)] for a in range(n)])


def circ_vector(M: IntMatrix) -> list[int]:
    """First row of a circulant; raises if M is not circulant."""
    c = list(M.row(0))
    if circ(c) != M:
        raise ValueError("matrix is not circulant")
    return c


def convolve(c, d) -> list[int]:
    """Cyclic convolution matching circ(c) @ circ(d) = circ(convolve(c, d))."""
    n = len(c)
    return [sum(c[i] * d[(k - i) % n] for i in range(n)) for k in range(n)]


def _count_divisors(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def higman_rank(n: int) -> int:
    """Free rank of the unit group of ZZ C_n: (n + t2 - 2l + 1) / 2."""
    if n < 1:
        raise ValueError("n must be positive")
    t2 = 1 if n % 2 == 0 else 0
    l = _count_divisors(n)  # cyclic subgroups of C_n
    return (n + t2 - 2 * l + 1) // 2


@dataclass(frozen=True)
class UnitPair:
    c: tuple[int, ...]
    d: tuple[int, ...]
    trivial: bool

    def to_dict(self) -> dict:
        return {"c": list(self.c), "d": [str(v) for v in self.d], "trivial": self.trivial}


def _is_trivial(c) -> bool:
    nz = [v for v in c if v]
    return len(nz) == 1 and abs(nz[0]) == 1


def find_circulant_units(n: int, bound: int, cap: int = DEFAULT_BOX_CAP, chunk: int = 20000) -> list[UnitPair]:
    """All c in [-bound, bound]^n with det circ(c) = +-1, paired with the inverse circulant's first row."""
    if n < 2 or bound < 1:
        raise ValueError("need n >= 2 and bound >= 1")
    size = (2 * bound + 1) ** n
    if size > cap:
        raise ResourceCapExceeded(f"box of {size} vectors exceeds the cap {cap}")
    vals = range(-bound, bound + 1)
    idx = np.array([[(b - a) % n for b in range(n)] for a in range(n)])
    out = []
    it = itertools.product(vals, repeat=n)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        arr = np.array(block, dtype=np.int64)
        mats = arr[:, idx].astype(float)
        dets = np.linalg.det(mats)
        for row in np.nonzero(np.abs(np.abs(dets) - 1.0) < 0.5)[0]:
            c = tuple(int(v) for v in arr[row])
            C = circ(c)
            if abs(det(C)) != 1:  # float screen, exact confirmation
                continue
            inv = rational_inverse(C)
            d = tuple(int(Fraction(v)) for v in inv[0])
            out.append(UnitPair(c, d, _is_trivial(c)))
    return out


# ---------------------------------------------------------------------------
# idempotents from unit pairs


@dataclass
class Y1Report:
    Y1: IntMatrix
    outer_rows: list[int]
    outer_cols: list[int]
    checks: dict[str, bool]
    positive_entries: int
    negative_entries: int
    is_unit_idempotent: bool
    conjugator: str | None
    conjugator_matrix: IntMatrix | None

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and self.conjugator is not None

    def to_dict(self) -> dict:
        return {
            "Y1": [[str(v) for v in r] for r in self.Y1.to_rows()],
            "rows_factor": self.outer_rows,
            "cols_factor": self.outer_cols,
            "checks": self.checks,
            "positive_entries": self.positive_entries,
            "negative_entries": self.negative_entries,
            "is_E_ii": self.is_unit_idempotent,
            "conjugator": self.conjugator,
            "conjugator_matrix": None
            if self.conjugator_matrix is None
            else [[str(v) for v in r] for r in self.conjugator_matrix.to_rows()],
            "ok": self.ok,
        }


def build_and_verify_Y1(c, d) -> Y1Report:
    """Y1 = (c_i e_j), e the first column of circ(d), for mutually inverse circ(c), circ(d).

    With e the first column of circ(d) we have circ(c) circ(e)^T = I, which is
    the index condition sum_k c_{i+k} e_{j+k} = delta_ij making
    r_{2,n}(X, Y1) vanish.
    """
    c = [int(v) for v in c]
    d = [int(v) for v in d]
    n = len(c)
    if len(d) != n:
        raise ValueError("length mismatch")
    C, D = circ(c), circ(d)
    if C @ D != IntMatrix.identity(n):
        raise NotInverse("circ(c) circ(d) is not the identity")
    e = [D[i, 0] for i in range(n)]
    Y1 = IntMatrix.from_rows([[c[i] * e[j] for j in range(n)] for i in range(n)])
    X = IntMatrix.shift(n)
    checks = {
        "idempotent": Y1 @ Y1 == Y1,
        "r2 vanishes": evaluate_ncpoly(relator_r2(n), X, Y1).is_zero(),
        "trace 1": Y1.trace() == 1,
        "Y1 X^k Y1 = 0": all((Y1 @ (X**k) @ Y1).is_zero() for k in range(1, n)),
        "index sums": all(
            sum(Y1[(i + k) % n, (j + k) % n] for k in range(n)) == (1 if i == j else 0) for i in range(n) for j in range(n)
        ),
        "dnepr relations": check_relations(X, Y1, standard_relators(n, "dnepr")).passed,
    }
    pos = sum(1 for v in Y1.entries if v > 0)
    neg = sum(1 for v in Y1.entries if v < 0)
    unit_idem = pos == 1 and neg == 0
    checks["sign pattern"] = unit_idem or (pos > 0 and neg > 0)
    Y = IntMatrix.unit(n, 1, 1)
    name, U = None, None
    candidates = [
        ("circ(c)^T", C.transpose()),
        ("circ(c)", C),
        ("circ(d)", D),
        ("circ(d)^T", D.transpose()),
    ]
    # U Y U^-1 = Y1 with U circulant and unimodular; shifts X^s U also work
    for label, base in candidates:
        for s in range(n):
            cand = (X**s) @ base
            if cand @ Y == Y1 @ cand:
                name = label if s == 0 else f"X^{s} {label}"
                U = cand
                break
        if name:
            break
    if U is not None:
        checks["conjugator circulant"] = U @ X == X @ U
        checks["conjugator unimodular"] = abs(det(U)) == 1
    return Y1Report(Y1, c, e, checks, pos, neg, unit_idem, name, U)


# ---------------------------------------------------------------------------
# canonical form of representations


@dataclass
class CanonicalForm:
    n: int
    m: int
    k: int
    r: int
    B: IntMatrix
    integral: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "r": self.r,
            "B": [[str(v) for v in row] for row in self.B.to_rows()],
            "unimodular": self.integral,
        }


def canonical_model(n: int, k: int, r: int) -> tuple[IntMatrix, IntMatrix]:
    """diag(I_k (x) X, 0_r) and diag(I_k (x) Y, 0_r)."""
    X = IntMatrix.shift(n)
    Y = IntMatrix.unit(n, 1, 1)
    xs = [X] * k + ([IntMatrix.zeros(r)] if r else [])
    ys = [Y] * k + ([IntMatrix.zeros(r)] if r else [])
    return IntMatrix.block_diag(xs), IntMatrix.block_diag(ys)


def _column_lattice_basis(M: IntMatrix) -> list[list[int]]:
    lat = LatticeBasis(M.rows)
    for j in range(M.cols):
        lat.add([M[i, j] for i in range(M.rows)])
    return lat.rows


def canonicalize_representation(X1: IntMatrix, Y1: IntMatrix, n: int) -> CanonicalForm:
    """Find B with B^-1 X1 B = diag(I_k (x) X, 0) and B^-1 Y1 B = diag(I_k (x) Y, 0)."""
    m = X1.rows
    if X1.shape != (m, m) or Y1.shape != (m, m):
        raise ValueError("X1, Y1 must be square of the same size")
    if X1.is_zero() or Y1.is_zero():
        raise ValueError("X1 and Y1 must be nonzero")
    Xn = X1**n
    S = IntMatrix.zeros(m)
    for i in range(n):
        S = S + (X1 ** (n - i)) @ Y1 @ (X1**i)
    failed = [
        name
        for name, ok in (
            ("x^(n+1) = x", X1 ** (n + 1) == X1),
            ("y x^n = y", Y1 @ Xn == Y1),
            ("y^2 = y", Y1 @ Y1 == Y1),
            ("sum x^(n-i) y x^i = x^n", S == Xn),
        )
        if not ok
    ]
    if failed:
        raise RelationViolation("relations fail: " + ", ".join(failed))
    if Xn @ Y1 != Y1:
        raise MissingLeftIdentity("x^n y != y: the image of y is not inside the image of x^n, so no block form exists")
    k = Y1.trace()
    if k <= 0:
        raise NonIntegralTrace(f"trace of Y1 is {k}, not a positive integer")
    r = m - k * n
    if r < 0:
        raise CanonicalizationFailed(f"m = {m} < k n = {k * n}")
    U_basis = _column_lattice_basis(Y1)
    if len(U_basis) != k:
        raise CanonicalizationFailed(f"image of Y1 has rank {len(U_basis)}, trace {k}")
    Z_basis = _column_lattice_basis(IntMatrix.identity(m) - Xn)
    cols = []
    for s in U_basis:
        v = IntMatrix(m, 1, tuple(s))
        for _ in range(n):
            cols.append(v.entries)
            v = X1 @ v
    cols.extend(tuple(z) for z in Z_basis)
    if len(cols) != m:
        raise CanonicalizationFailed(f"basis has {len(cols)} vectors, need {m}")
    B = IntMatrix.from_rows([[cols[j][i] for j in range(m)] for i in range(m)])
    dB = det(B)
    if dB == 0:
        raise CanonicalizationFailed("constructed basis is singular")
    Binv = rational_inverse(B)
    Xc, Yc = canonical_model(n, k, r)

    def conj(M: IntMatrix) -> list[list[Fraction]]:
        BM = [[sum(Binv[i][t] * M[t, j] for t in range(m)) for j in range(m)] for i in range(m)]
        return [[sum(BM[i][t] * B[t, j] for t in range(m)) for j in range(m)] for i in range(m)]

    if conj(X1) != [list(r_) for r_ in Xc.to_rows()] or conj(Y1) != [list(r_) for r_ in Yc.to_rows()]:
        raise CanonicalizationFailed("conjugated matrices differ from the block form")
    return CanonicalForm(n, m, k, r, B, abs(dB) == 1)


def random_unimodular(m: int, rng: np.random.Generator, steps: int = 12, spread: int = 2) -> IntMatrix:
    """Product of random elementary operations and sign flips."""
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for _ in range(steps):
        i, j = rng.choice(m, size=2, replace=False)
        q = int(rng.integers(-spread, spread + 1))
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        if rng.random() < 0.2:
            rows[i] = [-a for a in rows[i]]
    perm = rng.permutation(m)
    return IntMatrix.from_rows([rows[p] for p in perm])


# ---------------------------------------------------------------------------
# nonnegative roots of the identity


@dataclass
class NonnegRootResult:
    precondition: bool
    permutation: bool
    detail: str

    def to_dict(self) -> dict:
        return {"precondition": self.precondition, "permutation": self.permutation, "detail": self.detail}


def nonneg_root_check(X1: IntMatrix, n: int) -> NonnegRootResult:
    """Nonnegative X1 with X1^n = I must have exactly one positive entry, equal to 1, per row."""
    if not X1.is_square:
        return NonnegRootResult(False, False, "not square")
    if any(v < 0 for v in X1.entries):
        return NonnegRootResult(False, False, "negative entry")
    if n < 1 or X1**n != IntMatrix.identity(X1.rows):
        return NonnegRootResult(False, False, f"X1^{n} is not the identity")
    for i in range(X1.rows):
        row = [v for v in X1.row(i) if v]
        if row != [1]:
            return NonnegRootResult(True, False, f"row {i + 1} is {list(X1.row(i))}")
    return NonnegRootResult(True, True, "permutation matrix")
