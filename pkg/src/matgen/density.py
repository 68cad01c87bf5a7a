"""Density experiments: generating fractions over F_q, box densities of
generating pairs in M_2(ZZ), and the pairwise-coprimality Euler product.

Sampling is done in fixed blocks of SURVEY_BLOCK draws, each with its own
generator seeded by (seed, block index), so estimates do not depend on how
the blocks are distributed over worker processes.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from sympy import primerange

from .g2 import g2_fast_check
from .gentest import SURVEY_BLOCK, block_rng, word_span
from .linalg import GF, IntMatrix, ResourceCapExceeded, is_prime

__all__ = [
    "DensityResult",
    "fq_fraction",
    "fq_exact_count",
    "g2z_box_fraction",
    "coprimality_factor",
    "coprimality_product",
    "CoprimeReport",
    "fq_sweep",
    "to_csv",
    "DEFAULT_EXHAUSTIVE_CAP",
]

DEFAULT_EXHAUSTIVE_CAP = 200_000
Z95 = 1.959963984540054


@dataclass
class DensityResult:
    experiment: str
    params: dict
    estimate: float
    exact: bool
    half_width: float
    successes: int
    trials: int
    exact_value: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def std_error(self) -> float:
        return self.half_width / Z95

    def to_dict(self) -> dict:
        return asdict(self)


def _mc_result(name: str, params: dict, hits: int, total: int) -> DensityResult:
    p = hits / total
    hw = Z95 * math.sqrt(p * (1 - p) / total)
    return DensityResult(name, params, p, False, hw, hits, total)


def _blocks(samples: int):
    """(block index, draws in block) covering ``samples`` draws."""
    full, rest = divmod(samples, SURVEY_BLOCK)
    out = [(b, SURVEY_BLOCK) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out


def _run_blocks(worker, args_list, shards: int) -> list:
    if shards <= 1 or len(args_list) < 2:
        return [worker(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=shards) as pool:
        return list(pool.map(worker, *zip(*args_list)))


# ---------------------------------------------------------------------------
# F_q


def _generates_mod_p(a, b, n: int, q: int) -> bool:
    ring = GF(q)
    A = IntMatrix.from_rows(a, ring)
    B = IntMatrix.from_rows(b, ring)
    return word_span(A, B, bound=n * n - 1, field=q).full_at is not None


def fq_exact_count(n: int, q: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[int, int]:
    """(generating pairs, all pairs) over F_q by enumeration."""
    total = q ** (2 * n * n)
    if total > cap:
        raise ResourceCapExceeded(f"exhaustive enumeration of {total} pairs exceeds the cap {cap}")
    hits = 0
    for flat in itertools.product(range(q), repeat=2 * n * n):
        a = [flat[i * n : (i + 1) * n] for i in range(n)]
        b = [flat[n * n + i * n : n * n + (i + 1) * n] for i in range(n)]
        hits += _generates_mod_p(a, b, n, q)
    return hits, total


def _fq_block(n: int, q: int, seed: int, block: int, count: int) -> int:
    rng = block_rng(seed, block)
    mats = rng.integers(0, q, size=(count, 2, n, n))
    return sum(_generates_mod_p(a.tolist(), b.tolist(), n, q) for a, b in mats)


def fq_fraction(
    n: int,
    q: int,
    mode: str = "mc",
    samples: int = 10000,
    seed: int = 0,
    shards: int = 1,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> DensityResult:
    """Fraction of pairs in M_n(F_q)^2 generating M_n(F_q); q prime."""
    if n < 1:
        raise ValueError("n must be positive")
    if not is_prime(q):
        raise ValueError("q must be prime")
    params = {"n": n, "q": q}
    if mode == "exhaustive":
        hits, total = fq_exact_count(n, q, cap)
        frac = Fraction(hits, total)
        return DensityResult("fq", params, float(frac), True, 0.0, hits, total, str(frac))
    if mode != "mc":
        raise ValueError("mode must be 'exhaustive' or 'mc'")
    if samples < 1:
        raise ValueError("samples must be positive")
    params.update(samples=samples, seed=seed)
    hits = sum(_run_blocks(_fq_block, [(n, q, seed, b, c) for b, c in _blocks(samples)], shards))
    return _mc_result("fq", params, hits, samples)


def fq_sweep(ns, qs, samples: int, seed: int, exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> list[DensityResult]:
    """Grid of F_q fractions; exhaustive where the cap allows, Monte-Carlo otherwise."""
    out = []
    for n in ns:
        for q in qs:
            if q ** (2 * n * n) <= exhaustive_cap:
                out.append(fq_fraction(n, q, "exhaustive", cap=exhaustive_cap))
            else:
                out.append(fq_fraction(n, q, "mc", samples=samples, seed=seed))
    return out


# ---------------------------------------------------------------------------
# M_2(ZZ) boxes


def _det2(m) -> np.ndarray:
    return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]


def _g2z_block(k: int, seed: int, block: int, count: int) -> int:
    rng = block_rng(seed, block)
    mats = rng.integers(-k, k + 1, size=(count, 2, 2, 2), dtype=np.int64)
    A, B = mats[:, 0], mats[:, 1]
    g = np.gcd(np.gcd(_det2(A), _det2(B)), _det2(A + B))
    hits = 0
    for i in np.nonzero(g == 1)[0]:
        hits += g2_fast_check(A[i].tolist(), B[i].tolist()).generates
    return hits


def g2z_box_fraction(k: int, samples: int, seed: int, shards: int = 1) -> DensityResult:
    """Fraction of generating pairs among pairs with entries uniform in [-k, k]."""
    if k < 1 or samples < 1:
        raise ValueError("need k >= 1 and samples >= 1")
    hits = sum(_run_blocks(_g2z_block, [(k, seed, b, c) for b, c in _blocks(samples)], shards))
    return _mc_result("g2z", {"k": k, "samples": samples, "seed": seed}, hits, samples)


# ---------------------------------------------------------------------------
# pairwise coprimality of 8 integers


def coprimality_factor(p: int) -> Fraction:
    """Probability that at most one of 8 integers is divisible by p: (p-1)^7 (p+7) / p^8."""
    return Fraction((p - 1) ** 7 * (p + 7), p**8)


@dataclass
class CoprimeReport:
    P: int
    product: Fraction
    mc: DensityResult | None

    @property
    def decimal(self) -> float:
        return float(self.product)

    @property
    def z_score(self) -> float | None:
        if self.mc is None or self.mc.std_error == 0:
            return None
        return (self.mc.estimate - self.decimal) / self.mc.std_error

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "product": f"{self.product.numerator}/{self.product.denominator}" if self.P <= 50 else None,
            "decimal": self.decimal,
            "mc": None if self.mc is None else self.mc.to_dict(),
            "z_score": self.z_score,
        }


def _pairwise_coprime(x: np.ndarray) -> np.ndarray:
    ok = np.ones(len(x), dtype=bool)
    for i in range(x.shape[1]):
        for j in range(i + 1, x.shape[1]):
            ok &= np.gcd(x[:, i], x[:, j]) == 1
    return ok


def _coprime_block(k: int, seed: int, block: int, count: int) -> int:
    rng = block_rng(seed, block)
    x = rng.integers(-k, k + 1, size=(count, 8), dtype=np.int64)
    return int(_pairwise_coprime(x).sum())


def coprimality_product(P: int, mc: tuple[int, int, int] | None = None, shards: int = 1) -> CoprimeReport:
    """prod_{p <= P} (p-1)^7 (p+7) / p^8, optionally with a box Monte-Carlo (k, samples, seed)."""
    if P < 2:
        raise ValueError("P must be at least 2")
    prod = Fraction(1)
    for p in primerange(2, P + 1):
        prod *= coprimality_factor(int(p))
    res = None
    if mc is not None:
        k, samples, seed = mc
        if k < 1 or samples < 1:
            raise ValueError("need k >= 1 and samples >= 1")
        hits = sum(_run_blocks(_coprime_block, [(k, seed, b, c) for b, c in _blocks(samples)], shards))
        res = _mc_result("coprime", {"k": k, "samples": samples, "seed": seed}, hits, samples)
    return CoprimeReport(P, prod, res)


# ---------------------------------------------------------------------------
# reports


CSV_FIELDS = ["experiment", "params", "estimate", "half_width", "exact", "successes", "trials", "exact_value"]


def to_csv(results: list[DensityResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in results:
        params = ";".join(f"{k}={v}" for k, v in r.params.items())
        w.writerow([r.experiment, params, repr(r.estimate), repr(r.half_width), r.exact, r.successes, r.trials, r.exact_value or ""])
    return buf.getvalue()
