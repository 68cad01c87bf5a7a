"""Deciding whether a pair of matrices generates a matrix ring.

The word values of length <= s span a growing sequence of lattices (or
subspaces over a field).  A word whose value already lies in the span of
the kept words of the same or shorter length can be dropped together with
all its extensions, because extending by a letter is linear.  The search
therefore walks the word tree level by level and only extends kept words.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import factorint

from .linalg import (
    GF,
    ZZ,
    DimensionMismatch,
    IntMatrix,
    LatticeBasis,
    ModpSpan,
    RationalSpan,
    det,
    is_prime,
)
from .words import flatten

__all__ = [
    "MatrixRing",
    "ProductRing",
    "GenReport",
    "NotGenerating",
    "Beauty3BasisViolation",
    "NotUnimodular",
    "RANK_DEFICIENT",
    "is_generating",
    "failing_primes",
    "msl",
    "example_pair",
    "subring_index",
    "msl_survey",
    "MslSurvey",
    "word_span",
    "block_pair",
    "beauty3_basis",
    "random_beauty3_B",
    "integer_inverse",
]


class NotGenerating(ValueError):
    pass


class Beauty3BasisViolation(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


RANK_DEFICIENT = "rank-deficient"


@dataclass(frozen=True)
class MatrixRing:
    """M_n over ZZ (p=None), GF(p), or QQ (p=0)."""

    n: int
    p: int | None = None

    def __post_init__(self):
        if self.p not in (None, 0) and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def field(self) -> str:
        return "ZZ" if self.p is None else ("QQ" if self.p == 0 else f"GF({self.p})")


@dataclass(frozen=True)
class ProductRing:
    """Direct product of M_{n_j}(ZZ), realized as block-diagonal matrices."""

    sizes: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.sizes)


@dataclass
class GenReport:
    generates: bool
    ring: str
    bound: int
    level_reached: int
    rank: int
    target_rank: int
    elementary_divisors: list[int] | None
    certificate_words: list[str]
    failing_primes: list[int] | str | None = None
    index: int | None = None
    note: str = ""

    @property
    def verdict(self) -> str:
        return "generates" if self.generates else "fails"

    def to_dict(self) -> dict:
        def big(v):
            return str(v) if isinstance(v, int) and abs(v) >= 2**63 else v

        return {
            "verdict": self.verdict,
            "ring": self.ring,
            "bound": self.bound,
            "level_reached": self.level_reached,
            "rank": self.rank,
            "target_rank": self.target_rank,
            "elementary_divisors": None if self.elementary_divisors is None else [big(d) for d in self.elementary_divisors],
            "failing_primes": self.failing_primes,
            "certificate_words": self.certificate_words,
            "index": big(self.index),
            "note": self.note,
        }


# ---------------------------------------------------------------------------
# coordinates


def _block_coords(sizes: Sequence[int]):
    offsets = np.cumsum([0, *sizes])

    def coords(M: IntMatrix) -> tuple:
        out = []
        for k, s in enumerate(sizes):
            o = offsets[k]
            for i in range(s):
                out.extend(M.row(o + i)[o : o + s])
        return tuple(out)

    return coords


def _check_block_diagonal(M: IntMatrix, sizes: Sequence[int]):
    offsets = np.cumsum([0, *sizes])
    owner = [k for k, s in enumerate(sizes) for _ in range(s)]
    for i in range(M.rows):
        for j in range(M.cols):
            if owner[i] != owner[j] and M[i, j]:
                raise DimensionMismatch(f"entry ({i},{j}) lies off the diagonal blocks {tuple(sizes)}")
    return offsets


def block_pair(pairs: Sequence[tuple[IntMatrix, IntMatrix]]) -> tuple[IntMatrix, IntMatrix]:
    """Assemble block-diagonal (A, B) from per-block pairs."""
    return IntMatrix.block_diag([a for a, _ in pairs]), IntMatrix.block_diag([b for _, b in pairs])


# ---------------------------------------------------------------------------
# the span search


@dataclass
class SpanResult:
    span: object
    kept: list[str]
    level_reached: int
    full_at: int | None
    ranks: list[int] = field(default_factory=list)


def word_span(
    A: IntMatrix,
    B: IntMatrix,
    *,
    bound: int,
    field: str = "ZZ",
    coords=flatten,
    dim: int | None = None,
    unital: bool = False,
    stop_when_full: bool = True,
) -> SpanResult:
    """Span of word values of length <= bound over ZZ, QQ or GF(p).

    ``field`` is 'ZZ', 'QQ' or an int prime.  ``ranks[l]`` is the rank after
    level l (level 0 holds the identity in unital mode, otherwise nothing).
    """
    dim = dim if dim is not None else A.rows * A.cols
    if field == "ZZ":
        span = LatticeBasis(dim)
        full = lambda: span.is_full  # noqa: E731
        add = span.add
    elif field == "QQ":
        span = RationalSpan()
        full = lambda: span.rank == dim  # noqa: E731
        add = lambda v: span.add({i: x for i, x in enumerate(v) if x})  # noqa: E731
    else:
        p = int(field)
        span = ModpSpan(dim, p)
        full = lambda: span.rank == dim  # noqa: E731
        add = span.add
        if A.ring == ZZ:
            A, B = A.reduce_mod(p), B.reduce_mod(p)

    kept: list[str] = []
    frontier: list[tuple[str, IntMatrix]] = []
    if unital:
        I = IntMatrix.identity(A.rows, A.ring)
        if add(coords(I)):
            kept.append("")
        frontier = [("", I)]
    ranks = [span.rank]
    full_at = 0 if (span.rank and full()) else None
    level = 0
    letters = (("x", A), ("y", B))
    while level < bound and full_at is None:
        level += 1
        nxt = []
        parents = frontier if level > 1 or unital else [("", None)]
        for w, val in parents:
            for ch, M in letters:
                v = M if val is None else val @ M
                if add(coords(v)):
                    kept.append(w + ch)
                    nxt.append((w + ch, v))
        ranks.append(span.rank)
        frontier = nxt
        if full():
            full_at = level
            if stop_when_full:
                break
        if not nxt:
            break
    return SpanResult(span, kept, level, full_at, ranks)


def _target_info(A: IntMatrix, B: IntMatrix, target):
    """(field, coords, dim, target lattice or None, label)."""
    if A.shape != B.shape or not A.is_square:
        raise DimensionMismatch("A and B must be square of equal size")
    if isinstance(target, MatrixRing):
        if target.n != A.rows:
            raise DimensionMismatch(f"target M_{target.n} does not match {A.rows}x{A.rows} inputs")
        fld = "ZZ" if target.p is None else ("QQ" if target.p == 0 else target.p)
        return fld, flatten, target.n**2, None, f"M_{target.n}({target.field})"
    if isinstance(target, ProductRing):
        if target.n != A.rows:
            raise DimensionMismatch(f"blocks {target.sizes} do not match {A.rows}x{A.rows} inputs")
        _check_block_diagonal(A, target.sizes)
        _check_block_diagonal(B, target.sizes)
        label = " + ".join(f"M_{s}(ZZ)" for s in target.sizes)
        return "ZZ", _block_coords(target.sizes), sum(s * s for s in target.sizes), None, label
    if isinstance(target, LatticeBasis):
        if target.dim != A.rows * A.cols:
            raise DimensionMismatch("target lattice dimension must be n^2")
        return "ZZ", flatten, target.dim, target, f"lattice of rank {target.rank}"
    raise TypeError(f"unsupported target {target!r}")


def is_generating(A: IntMatrix, B: IntMatrix, target=None, *, unital: bool = False) -> GenReport:
    """Decide whether the (non-unital by default) ring generated by A, B is the target.

    The word-length bound is d^2 - 1 where d^2 is the ambient rank; the
    search stops early once the span is everything or stops growing.
    """
    if target is None:
        target = MatrixRing(A.rows, A.ring.p if A.ring.kind == "GF" else None)
    fld, coords, dim, tlat, label = _target_info(A, B, target)
    if A.ring.kind == "GF" and fld != A.ring.p:
        raise DimensionMismatch(f"inputs over {A.ring} but target over {fld}")
    bound = max(dim - 1, 1)
    target_rank = tlat.rank if tlat is not None else dim
    res = word_span(A, B, bound=bound, field=fld, coords=coords, dim=dim, unital=unital, stop_when_full=True)
    span = res.span
    if fld == "ZZ":
        ed = span.elementary_divisors
        if tlat is None:
            gen = span.is_full
            index = math.prod(ed) if span.rank == dim else None
            fp = (sorted(factorint(ed[-1])) if ed else []) if span.rank == dim else RANK_DEFICIENT
            note = ""
        else:
            inside = tlat.contains_lattice(span)
            gen = inside and span.rank == tlat.rank and span == tlat
            index = span.index_in(tlat) if inside and span.rank == tlat.rank else None
            fp = None
            note = "" if inside else "word lattice is not contained in the target lattice"
        return GenReport(gen, label, bound, res.level_reached, span.rank, target_rank, ed, res.kept, fp, index, note)
    gen = span.rank == dim
    return GenReport(gen, label, bound, res.level_reached, span.rank, target_rank, None, res.kept, None, None)


def failing_primes(A: IntMatrix, B: IntMatrix, n: int | None = None):
    """Primes p with (A mod p, B mod p) not generating M_n(GF(p)), or RANK_DEFICIENT."""
    n = A.rows if n is None else n
    rep = is_generating(A, B, MatrixRing(n))
    return rep.failing_primes if isinstance(rep.failing_primes, str) else set(rep.failing_primes)


def msl(A: IntMatrix, B: IntMatrix, ring: str | int = "ZZ") -> int:
    """Minimum spanning length over 'ZZ', 'QQ' or a prime p."""
    n = A.rows
    if ring == "ZZ":
        target = MatrixRing(n)
    elif ring == "QQ":
        target = MatrixRing(n, 0)
    else:
        target = MatrixRing(n, int(ring))
    rep = is_generating(A, B, target)
    if not rep.generates:
        raise NotGenerating(f"pair does not generate {rep.ring}")
    return rep.level_reached


# ---------------------------------------------------------------------------
# example families


def example_pair(kind: str, n: int, *args) -> tuple[IntMatrix, IntMatrix]:
    """Known generating pairs.

    kind = 'beauty1', args (s, t): (X, E_st).
    kind = 'beauty3', args (B,) or (B, A): A strictly upper triangular with
    ones on the superdiagonal (the all-superdiagonal shift when omitted);
    B must make e_1, B^2 e_1, ..., B^n e_1 a basis of ZZ^n.
    kind = 'conjugate', args (U,): (U^-1 X U, U^-1 Y U) for unimodular U.
    """
    X = IntMatrix.shift(n)
    if kind == "beauty1":
        s, t = args
        return X, IntMatrix.unit(n, s, t)
    if kind == "beauty3":
        Bm = args[0] if isinstance(args[0], IntMatrix) else IntMatrix.from_rows(args[0])
        if len(args) > 1:
            A = args[1] if isinstance(args[1], IntMatrix) else IntMatrix.from_rows(args[1])
            for i in range(n):
                for j in range(n):
                    if j == i + 1 and A[i, j] != 1:
                        raise Beauty3BasisViolation("superdiagonal of A must be all ones")
                    if j <= i and A[i, j] != 0:
                        raise Beauty3BasisViolation("A must be strictly upper triangular")
        else:
            A = IntMatrix.from_rows([[int(j == i + 1) for j in range(n)] for i in range(n)])
        if abs(det(beauty3_basis(Bm))) != 1:
            raise Beauty3BasisViolation("e_1, B^2 e_1, ..., B^n e_1 is not a basis of ZZ^n")
        return A, Bm
    if kind == "conjugate":
        U = args[0] if isinstance(args[0], IntMatrix) else IntMatrix.from_rows(args[0])
        if abs(det(U)) != 1:
            raise NotUnimodular("conjugator must have determinant +-1")
        Uinv = integer_inverse(U)
        return Uinv @ X @ U, Uinv @ IntMatrix.unit(n, 1, 1) @ U
    raise ValueError(f"unknown example kind {kind!r}")


def beauty3_basis(Bm: IntMatrix) -> IntMatrix:
    """Columns e_1, B^2 e_1, ..., B^n e_1."""
    n = Bm.rows
    e1 = IntMatrix.from_rows([[int(i == 0)] for i in range(n)])
    cols = [e1]
    v = Bm @ e1
    for _ in range(2, n + 1):
        v = Bm @ v
        cols.append(v)
    return IntMatrix.from_rows([[c[i, 0] for c in cols] for i in range(n)])


def integer_inverse(U: IntMatrix) -> IntMatrix:
    from .linalg import rational_inverse

    inv = rational_inverse(U)
    if any(x.denominator != 1 for r in inv for x in r):
        raise NotUnimodular("matrix has no integral inverse")
    return IntMatrix.from_rows([[int(x) for x in r] for r in inv])


def random_beauty3_B(n: int, rng: np.random.Generator, entry_bound: int = 2, max_tries: int = 100000) -> IntMatrix:
    for _ in range(max_tries):
        Bm = IntMatrix.from_rows(rng.integers(-entry_bound, entry_bound + 1, size=(n, n)).tolist())
        if abs(det(beauty3_basis(Bm))) == 1:
            return Bm
    raise RuntimeError("no valid B found")


def subring_index(pairs: Sequence[tuple[IntMatrix, IntMatrix]], target: ProductRing | None = None) -> int | None:
    """Index of the generated subring in the product of matrix rings; None if infinite."""
    sizes = tuple(a.rows for a, _ in pairs)
    if target is not None and tuple(target.sizes) != sizes:
        raise DimensionMismatch(f"block sizes {sizes} do not match target {target.sizes}")
    A, B = block_pair(pairs)
    rep = is_generating(A, B, ProductRing(sizes))
    return rep.index


# ---------------------------------------------------------------------------
# surveys

SURVEY_BLOCK = 256


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Generator for one fixed-size sample block; results do not depend on sharding."""
    return np.random.default_rng([seed, block])


@dataclass
class MslSurvey:
    n: int
    p: int
    samples: int
    seed: int
    generating: int
    histogram: dict[int, int]

    @property
    def max_msl(self) -> int | None:
        return max(self.histogram) if self.histogram else None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "samples": self.samples,
            "seed": self.seed,
            "generating": self.generating,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_msl": self.max_msl,
        }


def _survey_block(n: int, p: int, seed: int, block: int, count: int) -> Counter:
    rng = block_rng(seed, block)
    mats = rng.integers(0, p, size=(count, 2, n, n))
    hist: Counter = Counter()
    ring = GF(p)
    for a, b in mats:
        A = IntMatrix.from_rows(a.tolist(), ring)
        B = IntMatrix.from_rows(b.tolist(), ring)
        res = word_span(A, B, bound=n * n - 1, field=p)
        if res.full_at is not None:
            hist[res.full_at] += 1
    return hist


def msl_survey(n: int, p: int, samples: int, seed: int, shards: int = 1) -> MslSurvey:
    """Histogram of msl over GF(p) for uniformly random generating pairs.

    Samples are drawn in fixed blocks of SURVEY_BLOCK, each seeded by
    (seed, block index); ``shards`` only changes how blocks are grouped.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    hist: Counter = Counter()
    nblocks = -(-samples // SURVEY_BLOCK)
    for shard in range(shards):
        for b in range(shard, nblocks, shards):
            count = min(SURVEY_BLOCK, samples - b * SURVEY_BLOCK)
            hist.update(_survey_block(n, p, seed, b, count))
    return MslSurvey(n, p, samples, seed, sum(hist.values()), dict(hist))
