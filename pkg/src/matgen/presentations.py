"""Ring presentations on two generators: relator catalogs, relation checks,
bounded-degree ideal computations in ZZ{x, y}, infinite-rank witnesses and
the Magnus-type extension used to separate relator ideals.

Bounded-degree ideal
--------------------
``BoundedIdeal`` builds the ZZ-lattice spanned by all products u*r*v of
total degree <= L.  Products are added degree by degree: the lattice at
degree d is the one at d-1, plus every relator of degree d, plus x*g, g*x,
y*g, g*y for the products g that enlarged the lattice at degree d-1.  The
lattice is kept as a sparse integer echelon form whose pivot is the largest
word under (length, lexicographic) order; each echelon row remembers how it
was produced so that membership certificates can be expanded back into
products u*r*v and re-verified.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field

from .linalg import ZT, ZTT, IntMatrix, ResourceCapExceeded, LatticeBasis, LaurentPoly, RationalSpan, snf, xgcd
from .words import NcPoly, evaluate_ncpoly, format_word, word_values

__all__ = [
    "PresentationSpec",
    "ResourceCapExceeded",
    "relator_r1",
    "relator_r2",
    "relator_s",
    "standard_relators",
    "combine_specs",
    "check_relations",
    "RelationCheck",
    "BoundedIdeal",
    "QuotientRank",
    "bounded_quotient_rank",
    "MembershipCertificate",
    "ideal_membership_bounded",
    "said45_chain",
    "elim4_chain",
    "WitnessReport",
    "witness_rank_growth",
    "HCheck",
    "check_H_conditions",
    "MagnusReport",
    "magnus_directness",
    "NoIdentityReport",
    "noidentity_check",
    "saidwants_normal_words",
    "saidwants_model_check",
    "DEFAULT_MAX_DEGREE",
]

DEFAULT_MAX_DEGREE = 14


# ---------------------------------------------------------------------------
# relators


def relator_r1(n: int) -> NcPoly:
    """x^n - 1."""
    return NcPoly({"x" * n: 1, "": -1})


def relator_r2(n: int) -> NcPoly:
    """sum_{i=0}^{n-1} x^(n-i) y x^i - 1."""
    terms = {"x" * (n - i) + "y" + "x" * i: 1 for i in range(n)}
    terms[""] = -1
    return NcPoly(terms)


def relator_s(j: int) -> NcPoly:
    """y^2 - y for j = 0, otherwise y x^j y."""
    if j == 0:
        return NcPoly({"yy": 1, "y": -1})
    return NcPoly({"y" + "x" * j + "y": 1})


@dataclass
class PresentationSpec:
    n: int
    variant: str
    relators: list[NcPoly]
    names: list[str]
    unital: bool = True
    params: dict = field(default_factory=dict)

    @property
    def max_degree(self) -> int:
        return max((r.degree for r in self.relators), default=0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "unital": self.unital,
            "params": {k: (sorted(v) if isinstance(v, (set, frozenset)) else v) for k, v in self.params.items()},
            "relators": {name: str(r) for name, r in zip(self.names, self.relators)},
        }


def _standard_family(n: int, s_indices) -> tuple[list[NcPoly], list[str]]:
    rels = [relator_r1(n), relator_r2(n)]
    names = [f"r1_{n}", f"r2_{n}"]
    for j in s_indices:
        rels.append(relator_s(j))
        names.append(f"s{j}")
    return rels, names


def standard_relators(n: int, variant: str, **params) -> PresentationSpec:
    """Relator lists by name.

    Variants: grigdream, dnepr, said45 (n in {4, 5}), troika (n = 3), dvoika
    (n = 2), noidentity, modular (param m, optional transpose=True),
    saidwants_full, saidwants_H (param H), elim1, elim2, elim7 (param h),
    elim8 (param h), r1r2 (only r_{1,n}, r_{2,n}), free (no relators).
    """
    if n < 2 and variant != "free":
        raise ValueError("n must be at least 2")
    unital = True
    if variant == "grigdream":
        rels, names = _standard_family(n, range(1, n))
    elif variant == "dnepr":
        rels, names = _standard_family(n, range(0, n // 2 + 1))
    elif variant == "said45":
        if n not in (4, 5):
            raise ValueError("said45 is defined for n = 4, 5 only")
        rels, names = _standard_family(n, (0, 1))
    elif variant == "troika":
        if n != 3:
            raise ValueError("troika is defined for n = 3 only")
        rels, names = _standard_family(3, (1,))
    elif variant == "dvoika":
        if n != 2:
            raise ValueError("dvoika is defined for n = 2 only")
        rels = [relator_r1(2), NcPoly.parse("y + x*y*x - 1"), relator_s(1)]
        names = ["r1_2", "y+xyx-1", "s1"]
    elif variant == "noidentity":
        unital = False
        r2 = {"x" * (n - i) + "y" + "x" * i: 1 for i in range(n)}
        r2["x" * n] = -1
        rels = [
            NcPoly({"x" * (n + 1): 1, "x": -1}, False),
            NcPoly({"y" + "x" * n: 1, "y": -1}, False),
            NcPoly(r2, False),
        ] + [NcPoly({"y" + "x" * j + "y": 1}, False) for j in range(1, n)]
        names = ["x^(n+1)-x", "yx^n-y", "r2'"] + [f"s{j}" for j in range(1, n)]
    elif variant == "modular":
        m = int(params.get("m", 0))
        base, names = _standard_family(n, range(1, n))
        shift = NcPoly({"x": m, "y": 1})
        rels = [r.substitute(NcPoly.word("x"), shift) for r in base]
        names = [f"phi_{m}({nm})" for nm in names]
        if params.get("transpose"):
            rels = [r.swap_letters() for r in rels]
            names = [f"{nm}^t" for nm in names]
    elif variant == "saidwants_full":
        rels = [relator_r1(n)] + [relator_s(j) for j in range(n)]
        names = [f"r1_{n}"] + [f"s{j}" for j in range(n)]
    elif variant == "saidwants_H":
        H = set(params["H"])
        if not H or not H < set(range(1, n)):
            raise ValueError("H must be a non-empty proper subset of {1..n-1}")
        rels, names = _standard_family(n, sorted(set(range(1, n)) - H))
    elif variant == "elim1":
        rels = [relator_r2(n)] + [relator_s(j) for j in range(1, n)]
        names = [f"r2_{n}"] + [f"s{j}" for j in range(1, n)]
    elif variant == "elim2":
        rels = [relator_r1(n)] + [relator_s(j) for j in range(1, n)]
        names = [f"r1_{n}"] + [f"s{j}" for j in range(1, n)]
    elif variant in ("elim7", "elim8"):
        h = int(params["h"])
        drop = {h, n - h} if variant == "elim7" else {h, 2 * h}
        if variant == "elim7" and not 1 <= h <= n - 1:
            raise ValueError("need 1 <= h <= n-1")
        if variant == "elim8" and not (1 <= h and 2 * h <= n - 1):
            raise ValueError("need 1 <= h < 2h <= n-1")
        rels, names = _standard_family(n, [j for j in range(1, n) if j not in drop])
    elif variant == "r1r2":
        rels, names = _standard_family(n, ())
    elif variant == "free":
        rels, names = [], []
        unital = bool(params.get("unital", False))
    else:
        raise ValueError(f"unsupported variant {variant!r}")
    return PresentationSpec(n, variant, rels, names, unital, dict(params))


def combine_specs(*specs: PresentationSpec) -> PresentationSpec:
    """Presentation of the sum of the relator ideals."""
    rels, names = [], []
    for k, s in enumerate(specs):
        rels.extend(s.relators)
        names.extend(f"[{k}]{nm}" for nm in s.names)
    return PresentationSpec(specs[0].n, "+".join(s.variant for s in specs), rels, names, all(s.unital for s in specs))


# ---------------------------------------------------------------------------
# relation checks


@dataclass
class RelationCheck:
    passed: bool
    violations: dict[str, IntMatrix]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": {k: [[str(e) for e in r] for r in v.to_rows()] for k, v in self.violations.items()},
        }


def check_relations(A: IntMatrix, B: IntMatrix, spec: PresentationSpec) -> RelationCheck:
    bad = {}
    for name, r in zip(spec.names, spec.relators):
        val = evaluate_ncpoly(r, A, B)
        if not val.is_zero():
            bad[name] = val
    return RelationCheck(not bad, bad)


# ---------------------------------------------------------------------------
# word codes: 1 followed by the letters as bits (x = 0, y = 1)


def word_code(w: str) -> int:
    return int("1" + w.replace("x", "0").replace("y", "1"), 2)


def code_word(c: int) -> str:
    return bin(c)[3:].replace("0", "x").replace("1", "y")


def code_len(c: int) -> int:
    return c.bit_length() - 1


def _poly_codes(f: NcPoly) -> dict[int, int]:
    return {word_code(w): c for w, c in f.terms.items()}


def _product_vector(u: str, rel: list[tuple[str, int]], v: str) -> dict[int, int]:
    return {word_code(u + w + v): c for w, c in rel}


# ---------------------------------------------------------------------------
# sparse echelon with provenance


class _Echelon:
    """Integer echelon form on sparse rows; pivot = largest code, pivot entries positive.

    Every row object k has a definition ``defs[k]``: a list of
    (is_generator, index, coefficient) triples expressing it as an integer
    combination of generators and earlier row objects.
    """

    def __init__(self):
        self.pivots: dict[int, int] = {}
        self.rows: dict[int, dict[int, int]] = {}
        self.defs: list[list[tuple[bool, int, int]]] = []

    def _new(self, vec: dict[int, int], definition) -> int:
        k = len(self.defs)
        self.defs.append(definition)
        if vec is not None:
            self.rows[k] = vec
        return k

    @staticmethod
    def _axpy(target: dict, q: int, row: dict):
        """target -= q * row."""
        for c, v in row.items():
            nv = target.get(c, 0) - q * v
            if nv:
                target[c] = nv
            else:
                target.pop(c, None)

    def insert(self, vec: dict[int, int], gen: int) -> bool:
        cur = dict(vec)
        base: list[tuple[bool, int, int]] = [(True, gen, 1)]
        subs: dict[int, int] = defaultdict(int)
        grew = False
        while cur:
            c = max(cur)
            coef = cur[c]
            p = self.pivots.get(c)
            if p is None:
                sign = 1 if coef > 0 else -1
                if sign < 0:
                    cur = {k: -v for k, v in cur.items()}
                definition = [(g, i, sign * a) for g, i, a in base] + [(False, r, -sign * q) for r, q in subs.items() if q]
                self.pivots[c] = self._new(cur, definition)
                return True
            prow = self.rows[p]
            a = prow[c]
            if coef % a == 0:
                q = coef // a
                self._axpy(cur, q, prow)
                subs[p] += q
                continue
            # gcd step: replace the pivot by a row with a smaller leading entry
            grew = True
            kdef = list(base) + [(False, r, -q) for r, q in subs.items() if q]
            kid = self._new(None, kdef)
            g, s, t = xgcd(a, coef)
            newp = {}
            for key in set(prow) | set(cur):
                val = s * prow.get(key, 0) + t * cur.get(key, 0)
                if val:
                    newp[key] = val
            rest = {}
            ag, cg = a // g, coef // g
            for key in set(prow) | set(cur):
                val = ag * cur.get(key, 0) - cg * prow.get(key, 0)
                if val:
                    rest[key] = val
            pid = self._new(newp, [(False, p, s), (False, kid, t)])
            del self.rows[p]
            self.pivots[c] = pid
            cur = rest
            base = [(False, kid, ag), (False, p, -cg)]
            subs = defaultdict(int)
        return grew

    def reduce(self, vec: dict[int, int]) -> tuple[dict[int, int], dict[int, int]]:
        """Greedy reduction; returns (remainder, {row: multiplier}) with vec = remainder + sum."""
        cur = dict(vec)
        used: dict[int, int] = defaultdict(int)
        done: dict[int, int] = {}
        while cur:
            c = max(cur)
            coef = cur[c]
            p = self.pivots.get(c)
            if p is None or coef % self.rows[p][c]:
                done[c] = cur.pop(c)
                continue
            q = coef // self.rows[p][c]
            self._axpy(cur, q, self.rows[p])
            used[p] += q
        return done, dict(used)

    def expand(self, row_coeffs: dict[int, int]) -> dict[int, int]:
        """Rewrite a combination of row objects as a combination of generators."""
        coeff: dict[int, int] = defaultdict(int)
        heap = []
        for r, c in row_coeffs.items():
            if c:
                if r not in coeff:
                    heapq.heappush(heap, -r)
                coeff[r] += c
        gens: dict[int, int] = defaultdict(int)
        while heap:
            r = -heapq.heappop(heap)
            c = coeff.pop(r, 0)
            if not c:
                continue
            for is_gen, idx, a in self.defs[r]:
                if is_gen:
                    gens[idx] += c * a
                else:
                    if idx not in coeff:
                        heapq.heappush(heap, -idx)
                    coeff[idx] += c * a
        return {g: c for g, c in gens.items() if c}


# ---------------------------------------------------------------------------
# bounded ideal and quotient ranks


@dataclass
class QuotientRank:
    L: int
    m: int
    free_rank: int
    torsion: list[int]
    words: int
    ideal_rank: int

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "m": self.m,
            "free_rank": self.free_rank,
            "torsion": [str(t) for t in self.torsion],
            "words": self.words,
            "ideal_rank": self.ideal_rank,
        }


@dataclass
class MembershipCertificate:
    target: NcPoly
    terms: list[tuple[str, int, str, int]]  # (u, relator index, v, coefficient)
    L: int
    relator_names: list[str] = field(default_factory=list)

    def expand(self, relators: list[NcPoly]) -> NcPoly:
        out: dict[str, int] = defaultdict(int)
        for u, i, v, c in self.terms:
            for w, a in relators[i].terms.items():
                out[u + w + v] += c * a
        return NcPoly(out, True)

    def verify(self, relators: list[NcPoly]) -> bool:
        return self.expand(relators) == self.target

    def to_dict(self) -> dict:
        return {
            "target": str(self.target),
            "L": self.L,
            "terms": [
                [format_word(u), self.relator_names[i] if self.relator_names else i, format_word(v), str(c)]
                for u, i, v, c in self.terms
            ],
        }


class BoundedIdeal:
    """The lattice spanned by u*r*v, |u| + deg r + |v| <= L, inside words of length <= L."""

    def __init__(self, spec: PresentationSpec, L: int, cap: int = DEFAULT_MAX_DEGREE):
        if L < spec.max_degree:
            raise ValueError(f"L = {L} is below the largest relator degree {spec.max_degree}")
        if L > cap:
            raise ResourceCapExceeded(f"degree bound {L} exceeds the cap {cap} (2^{L + 1} words)")
        self.spec = spec
        self.L = L
        self.unital = spec.unital
        self._rels = [list(r.terms.items()) for r in spec.relators]
        self.products: list[tuple[str, int, str]] = []
        self.ech = _Echelon()
        self._build()

    def _build(self):
        seen: set[tuple[str, int, str]] = set()
        new_prev: list[tuple[str, int, str]] = []
        by_degree = defaultdict(list)
        for i, r in enumerate(self.spec.relators):
            if r:
                by_degree[r.degree].append(i)
        for d in range(1, self.L + 1):
            cands = [("", i, "") for i in by_degree.get(d, [])]
            for u, i, v in new_prev:
                for a in "xy":
                    cands.append((a + u, i, v))
                    cands.append((u, i, v + a))
            new = []
            for prod in cands:
                if prod in seen:
                    continue
                seen.add(prod)
                u, i, v = prod
                gid = len(self.products)
                self.products.append(prod)
                if self.ech.insert(_product_vector(u, self._rels[i], v), gid):
                    new.append(prod)
            new_prev = new

    @property
    def rank(self) -> int:
        return len(self.ech.pivots)

    def word_count(self, m: int) -> int:
        return 2 ** (m + 1) - 2 + (1 if self.unital else 0)

    def quotient_rank(self, m: int | None = None) -> QuotientRank:
        """Free rank and torsion of the image of words of length <= m in W_L / ideal."""
        m = self.L - self.spec.max_degree if m is None else m
        if not 0 <= m <= self.L:
            raise ValueError("need 0 <= m <= L")
        limit = 1 << (m + 1)  # codes of words of length <= m are < limit
        ech = self.ech
        unit_cols = set()
        others = []
        in_range = 0
        for c, r in ech.pivots.items():
            if c >= limit:
                continue
            in_range += 1
            row = ech.rows[r]
            if row[c] == 1:
                unit_cols.add(c)
            else:
                others.append(row)
        reduced = [self._reduce_units(row, unit_cols) for row in others]
        reduced = [r for r in reduced if r]
        cols = sorted({c for r in reduced for c in r}, reverse=True)
        divisors = snf([[r.get(c, 0) for c in cols] for r in reduced]) if reduced else []
        total = self.word_count(m)
        free = total - len(unit_cols) - len(divisors)
        return QuotientRank(self.L, m, free, [d for d in divisors if d > 1], total, in_range)

    def _reduce_units(self, row: dict[int, int], unit_cols: set[int]) -> dict[int, int]:
        cur = dict(row)
        heap = [-c for c in cur if c in unit_cols]
        heapq.heapify(heap)
        while heap:
            c = -heapq.heappop(heap)
            q = cur.get(c)
            if not q:
                continue
            prow = self.ech.rows[self.ech.pivots[c]]
            for k, v in prow.items():
                nv = cur.get(k, 0) - q * v
                if nv:
                    if k not in cur and k in unit_cols:
                        heapq.heappush(heap, -k)
                    cur[k] = nv
                else:
                    cur.pop(k, None)
        return cur

    def membership(self, target: NcPoly) -> MembershipCertificate | None:
        if target.degree > self.L:
            raise ValueError("target degree exceeds L")
        rem, used = self.ech.reduce(_poly_codes(target))
        if rem:
            return None
        gens = self.ech.expand(used)
        terms = [(*self.products[g][:1], self.products[g][1], self.products[g][2], c) for g, c in sorted(gens.items())]
        cert = MembershipCertificate(target, terms, self.L, list(self.spec.names))
        if not cert.verify(self.spec.relators):
            raise AssertionError("certificate failed re-expansion")  # internal consistency guard
        return cert


def bounded_quotient_rank(spec: PresentationSpec, L: int, m: int | None = None, cap: int = DEFAULT_MAX_DEGREE) -> QuotientRank:
    """Rank and torsion of the span of words of length <= m modulo the degree-L ideal.

    ``m`` defaults to L minus the largest relator degree, the range in which
    every relator multiple needed to rewrite a word still fits under L.
    """
    return BoundedIdeal(spec, L, cap).quotient_rank(m)


def ideal_membership_bounded(target: NcPoly, spec: PresentationSpec, L: int, cap: int = DEFAULT_MAX_DEGREE):
    """Certificate that target lies in the degree-L part of the ideal, or None (inconclusive)."""
    return BoundedIdeal(spec, L, cap).membership(target)


# ---------------------------------------------------------------------------
# derivation chains


def said45_chain(n: int) -> dict[str, NcPoly]:
    """Intermediate identities of the shortening argument for n = 4 and n = 5."""
    s = {j: relator_s(j) for j in range(0, n)}
    x = NcPoly.word("x")
    xx = lambda k: NcPoly.word("x" * k)  # noqa: E731
    if n == 4:
        return {
            "y*r2": s[3] * x + s[2] * xx(2),
            "s3+s2*x": s[3] + s[2] * x,
            "s2": s[2],
            "s3": s[3],
        }
    if n != 5:
        raise ValueError("chains exist for n = 4, 5")
    s2 = s[2]
    return {
        "s4+s3*x+s2*x^2": s[4] + s[3] * x + s2 * xx(2),
        "s4+x*s3+x^2*s2": s[4] + x * s[3] + xx(2) * s2,
        "s4+s2^2": s[4] + s2 * s2,
        "s3-x^4*s2^2+x*s2": s[3] - xx(4) * s2 * s2 + x * s2,
        "s3+s2^4": s[3] + s2**4,
        "s2^4+x^4*s2^2-x*s2": s2**4 + xx(4) * s2 * s2 - x * s2,
        "2*s2^5": 2 * s2**5,
        "s2": s2,
        "s3": s[3],
        "s4": s[4],
    }


def elim4_chain(n: int, k: int) -> dict[str, NcPoly]:
    """Identities showing y x^k y follows from the remaining relators (x^-k written x^(n-k))."""
    y = NcPoly.word("y")
    xk, xmk = NcPoly.word("x" * k), NcPoly.word("x" * (n - k))
    yy = NcPoly.word("yy")
    return {
        "y-y^2-y*x^k*y*x^-k": y - yy - y * xk * y * xmk,
        "y-y^2-x^-k*y*x^k*y": y - yy - xmk * y * xk * y,
        "y^2*x^k*y": yy * xk * y,
        "y*x^k*y^2": y * xk * yy,
        "s_k": y * xk * y,
    }


# ---------------------------------------------------------------------------
# infinite-rank witnesses


def _lp_matrix(n: int, entries: dict[tuple[int, int], LaurentPoly], ring) -> IntMatrix:
    rows = [[entries.get((i, j), LaurentPoly()) for j in range(n)] for i in range(n)]
    return IntMatrix(n, n, tuple(x for r in rows for x in r), ring)


def _lp_shift(n: int, ring) -> IntMatrix:
    one = LaurentPoly({0: 1})
    return _lp_matrix(n, {((i + 1) % n, i): one for i in range(n)}, ring)


def _lp_coords(M: IntMatrix) -> dict:
    out = {}
    for pos, e in enumerate(M.entries):
        for ex, c in e.terms.items():
            out[(ex, pos)] = c
    return out


def laurent_rank_growth(A: IntMatrix, B: IntMatrix, cutoffs: list[int]) -> list[int]:
    """Rank over QQ of the span of word values of length <= s, for each cutoff s."""
    span = RationalSpan()
    frontier = [("", None)]
    ranks = {}
    letters = (("x", A), ("y", B))
    top = max(cutoffs)
    for level in range(1, top + 1):
        nxt = []
        for w, val in frontier:
            for ch, M in letters:
                v = M if val is None else val @ M
                if span.add(_lp_coords(v)):
                    nxt.append((w + ch, v))
        frontier = nxt
        ranks[level] = span.rank
    return [ranks[c] for c in cutoffs]


@dataclass
class WitnessReport:
    kind: str
    n: int
    h: int | None
    cutoffs: list[int]
    ranks: list[int]
    retained_vanish: dict[str, bool]
    omitted_nonzero: dict[str, bool]
    audit: dict[str, bool]

    @property
    def strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.ranks, self.ranks[1:]))

    @property
    def ok(self) -> bool:
        return (
            self.strictly_increasing
            and all(self.retained_vanish.values())
            and all(self.omitted_nonzero.values())
            and all(self.audit.values())
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "h": self.h,
            "cutoffs": self.cutoffs,
            "ranks": self.ranks,
            "strictly_increasing": self.strictly_increasing,
            "retained_vanish": self.retained_vanish,
            "omitted_nonzero": self.omitted_nonzero,
            "audit": self.audit,
            "ok": self.ok,
        }


def _conj_sum(X: IntMatrix, M: IntMatrix, n: int) -> IntMatrix:
    """sum_{i=0}^{n-1} X^{-i} M X^{i}, with X^{-i} = X^{n-i}."""
    out = IntMatrix.zeros(n, n, X.ring)
    for i in range(n):
        out = out + (X ** ((n - i) % n)) @ M @ (X**i)
    return out


def witness_rank_growth(kind: str, n: int, h: int | None = None, cutoffs=(4, 8, 12)) -> WitnessReport:
    """Witness matrices over ZZ[t] / ZZ[t, 1/t] for presentations with relators removed."""
    cutoffs = list(cutoffs)
    t = LaurentPoly.t
    one = LaurentPoly({0: 1})
    audit: dict[str, bool] = {}
    if kind == "elim1":
        ring = ZTT
        X = _lp_shift(n, ring)
        A = X.scale(t(1))
        B = _lp_matrix(n, {(0, 0): t(-n)}, ring)
        spec = standard_relators(n, "elim1")
        omitted = {"r1": relator_r1(n)}
        audit["A^n = t^n I"] = A**n == IntMatrix.identity(n, ring).scale(t(n))
    elif kind == "elim2":
        ring = ZT
        A = _lp_shift(n, ring)
        B = _lp_matrix(n, {(0, 0): t(1)}, ring)
        spec = standard_relators(n, "elim2")
        omitted = {"r2": relator_r2(n)}
        audit["sum A^-i B A^i = t I"] = _conj_sum(A, B, n) == IntMatrix.identity(n, ring).scale(t(1))
    elif kind == "elim7":
        if h is None or not 1 <= h <= n - 1:
            raise ValueError("elim7 needs 1 <= h <= n-1")
        ring = ZT
        A = _lp_shift(n, ring)
        B = _lp_matrix(n, {(0, 0): t(1), (h % n, h % n): one - t(1)}, ring)
        spec = standard_relators(n, "elim7", h=h)
        omitted = {f"s{h}": relator_s(h), f"s{n - h}": relator_s(n - h)}
        for i in range(1, n):
            prod = B @ (A**i) @ B @ (A ** (n - i))
            expect_zero = i not in (h % n, (n - h) % n)
            audit[f"Y1 X^{i} Y1 X^-{i} {'= 0' if expect_zero else '!= 0'}"] = prod.is_zero() == expect_zero
        core = B @ (A**h) @ B @ (A ** (n - h))
        # when 2h = n the product picks up both E_11 and E_{1+h,1+h}
        mult = 2 if (2 * h) % n == 0 else 1
        tt1 = (t(2) - t(1)) * mult
        label = "t(t-1) I" if mult == 1 else "2t(t-1) I"
        audit[f"{label} = -sum X^-i (Y1 X^h Y1 X^-h) X^i"] = (-_conj_sum(A, core, n)) == IntMatrix.identity(n, ring).scale(tt1)
    elif kind == "elim8":
        if h is None or not (1 <= h and 2 * h <= n - 1):
            raise ValueError("elim8 needs 1 <= h < 2h <= n-1")
        ring = ZT
        A = _lp_shift(n, ring)
        B = _lp_matrix(n, {(0, 0): one, (0, h % n): t(1), ((-h) % n, 0): -t(1)}, ring)
        spec = standard_relators(n, "elim8", h=h)
        omitted = {f"s{h}": relator_s(h), f"s{2 * h}": relator_s(2 * h)}
        core = B @ (A ** (2 * h)) @ B @ (A ** (n - 2 * h))
        t2 = t(2)
        E = -_conj_sum(A, core, n)
        audit["Y1 X^2h Y1 X^-2h = -t^2 E_(1,1+2h)"] = core == _lp_matrix(n, {(0, (2 * h) % n): -t2}, ring)
        audit["-sum X^-i (Y1 X^2h Y1 X^-2h) X^i = t^2 X^-2h"] = E == (A ** ((n - 2 * h) % n)).scale(t2)
        audit["t^2 X^(1-h) = (t^2 X^-2h) X^(1+h) lies in the ring"] = E @ (A ** (1 + h)) == (A ** ((1 - h) % n)).scale(t2)
    else:
        raise ValueError(f"unknown witness {kind!r}")
    retained = {nm: evaluate_ncpoly(r, A, B).is_zero() for nm, r in zip(spec.names, spec.relators)}
    omitted_nz = {nm: not evaluate_ncpoly(r, A, B).is_zero() for nm, r in omitted.items()}
    ranks = laurent_rank_growth(A, B, cutoffs)
    return WitnessReport(kind, n, h, cutoffs, ranks, retained, omitted_nz, audit)


# ---------------------------------------------------------------------------
# H conditions


@dataclass
class HCheck:
    n: int
    H: list[int]
    valid: bool
    violated: str | None
    witness: tuple | None
    convention: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "H": self.H,
            "valid": self.valid,
            "violated": self.violated,
            "witness": list(self.witness) if self.witness else None,
            "zero_sum_convention": self.convention,
        }


def check_H_conditions(n: int, H, zero_sums: str = "exclude") -> HCheck:
    """Check (a) sums of elements of -H u H avoid H and (b) the h,k,l condition, modulo n.

    zero_sums='exclude' skips sums congruent to 0 in (a); 'violation' treats
    them as violations (0 is never in the complement of H inside {1..n-1}).
    """
    H = sorted(set(int(h) for h in H))
    N = set(range(1, n))
    if not H or not set(H) < N:
        raise ValueError("H must be a non-empty proper subset of {1, ..., n-1}")
    if zero_sums not in ("exclude", "violation"):
        raise ValueError("zero_sums must be 'exclude' or 'violation'")
    Hs = set(H)
    signed = sorted({h % n for h in H} | {(-h) % n for h in H})
    for a in signed:
        for b in signed:
            s = (a + b) % n
            if s == 0:
                if zero_sums == "violation":
                    return HCheck(n, H, False, "a", (a, b, s), zero_sums)
                continue
            if s in Hs:
                return HCheck(n, H, False, "a", (a, b, s), zero_sums)
    for h in H:
        for k in H:
            for l in H:
                if (-h + k + l) % n in Hs and h != k and h != l:
                    return HCheck(n, H, False, "b", (h, k, l, (-h + k + l) % n), zero_sums)
    return HCheck(n, H, True, None, None, zero_sums)


def saidwants_normal_words(n: int) -> list[str]:
    """Words x^a1 y^b1 x^a2 y^b2 x^a3 with a_i in 0..n-1 and b_i in 0..2 (a spanning set modulo S(H))."""
    out = set()
    for a1 in range(n):
        for b1 in range(3):
            for a2 in range(n):
                for b2 in range(3):
                    for a3 in range(n):
                        out.add("x" * a1 + "y" * b1 + "x" * a2 + "y" * b2 + "x" * a3)
    return sorted(out, key=lambda w: (len(w), w))


def saidwants_model_check(n: int) -> dict[str, bool]:
    """In M_n(ZZ) + circulants with x -> (X, X), y -> (Y, 0), r = -r2 is a central idempotent."""
    X = IntMatrix.shift(n)
    Y = IntMatrix.unit(n, 1, 1)
    A = IntMatrix.block_diag([X, X])
    B = IntMatrix.block_diag([Y, IntMatrix.zeros(n)])
    spec = standard_relators(n, "saidwants_full")
    r = -evaluate_ncpoly(relator_r2(n), A, B)
    return {
        "relators vanish": check_relations(A, B, spec).passed,
        "r idempotent": r @ r == r,
        "r commutes with x": r @ A == A @ r,
        "r commutes with y": r @ B == B @ r,
        "r nonzero": not r.is_zero(),
    }


# ---------------------------------------------------------------------------
# Magnus-type extension


@dataclass(frozen=True)
class _Mag:
    """[[A, 0], [xi*U + eta*V, z]] with n x n blocks A, U, V and integer z."""

    A: IntMatrix
    U: IntMatrix
    V: IntMatrix
    z: int

    def __matmul__(self, o: "_Mag") -> "_Mag":
        return _Mag(self.A @ o.A, self.U @ o.A + o.U.scale(self.z), self.V @ o.A + o.V.scale(self.z), self.z * o.z)

    def __add__(self, o: "_Mag") -> "_Mag":
        return _Mag(self.A + o.A, self.U + o.U, self.V + o.V, self.z + o.z)

    def __sub__(self, o: "_Mag") -> "_Mag":
        return _Mag(self.A - o.A, self.U - o.U, self.V - o.V, self.z - o.z)

    def coords(self) -> tuple:
        return self.A.entries + self.U.entries + self.V.entries + (self.z,)

    def is_zero(self) -> bool:
        return not any(self.coords())


def _mag_closure(seed: _Mag, gens: list[_Mag], dim: int, cap: int = 100000) -> LatticeBasis:
    lat = LatticeBasis(dim)
    work = []
    if lat.add(seed.coords()):
        work.append(seed)
    steps = 0
    while work:
        e = work.pop()
        for g in gens:
            for prod in (g @ e, e @ g):
                steps += 1
                if steps > cap:
                    raise ResourceCapExceeded("ideal closure did not terminate within the cap")
                if lat.add(prod.coords()):
                    work.append(prod)
    return lat


@dataclass
class MagnusReport:
    n: int
    ranks: dict[str, int]
    r1_meets_s0_trivially: bool
    s_sum_equals_s0: bool
    s_sum_direct: bool
    closed: bool

    @property
    def ok(self) -> bool:
        return self.r1_meets_s0_trivially and self.s_sum_equals_s0 and self.s_sum_direct and self.closed

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ranks": self.ranks,
            "r1_meets_s0_trivially": self.r1_meets_s0_trivially,
            "s_sum_equals_s0": self.s_sum_equals_s0,
            "s_sum_direct": self.s_sum_direct,
            "closed": self.closed,
            "ok": self.ok,
        }


def _lattice_sum(lats: list[LatticeBasis]) -> LatticeBasis:
    out = LatticeBasis(lats[0].dim)
    for lat in lats:
        for r in lat.rows:
            out.add(r)
    return out


def magnus_directness(n: int) -> MagnusReport:
    """Ideals of r_{1,n}(X) and s_0, ..., s_{n-1} in the extension ring, as lattices of rank <= 3n^2 + 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    Z = IntMatrix.zeros(n)
    I = IntMatrix.identity(n)
    X = IntMatrix.shift(n)
    Y = IntMatrix.unit(n, 1, 1)
    one = _Mag(I, Z, Z, 1)
    Xm = _Mag(X, I, Z, 1)
    Ym = _Mag(Y, Z, I, 0)
    dim = 3 * n * n + 1
    gens = [Xm, Ym]

    def power(M: _Mag, k: int) -> _Mag:
        out = one
        for _ in range(k):
            out = out @ M
        return out

    r1 = power(Xm, n) - one
    s = {0: Ym @ Ym - Ym}
    for j in range(1, n):
        s[j] = Ym @ power(Xm, j) @ Ym
    R1 = _mag_closure(r1, gens, dim)
    S = {j: _mag_closure(s[j], gens, dim) for j in range(n)}

    ranks = {"R1": R1.rank, **{f"S{j}": S[j].rank for j in range(n)}}
    both = _lattice_sum([R1, S[0]])
    ranks["R1+S0"] = both.rank
    meet_trivial = both.rank == R1.rank + S[0].rank
    parts = [S[j] for j in range(1, n)]
    ssum = _lattice_sum(parts)
    ranks["S1+...+S(n-1)"] = ssum.rank
    direct = ssum.rank == sum(p.rank for p in parts)
    equal = ssum == S[0]

    closed = True
    for lat in [R1, *S.values()]:
        for row in lat.rows:
            e = _Mag(
                IntMatrix(n, n, tuple(row[: n * n])),
                IntMatrix(n, n, tuple(row[n * n : 2 * n * n])),
                IntMatrix(n, n, tuple(row[2 * n * n : 3 * n * n])),
                row[-1],
            )
            for g in gens:
                if not (lat.contains((g @ e).coords()) and lat.contains((e @ g).coords())):
                    closed = False
    return MagnusReport(n, ranks, meet_trivial, equal, direct, closed)


# ---------------------------------------------------------------------------
# the presentation without identity


@dataclass
class NoIdentityReport:
    """Checks for the presentation without identity.

    ``quotient`` is the bounded rank for the listed relators; ``completed``
    adds x^n y - y, which is needed for x^n to act as an identity on both
    sides.  ``pair_model`` evaluates the relators in the ring of pairs (P, q),
    P in M_n(ZZ), q a row vector, (P, q)(P', q') = (PP', qP'), at
    x -> (X^T, 0), y -> (E_11, e_1): every listed relator vanishes there
    while x^n y - y does not, so the listed relators do not generate the
    whole kernel.
    """

    n: int
    relators_vanish: bool
    spanning_words_generate: bool
    quotient: QuotientRank | None
    completed: QuotientRank | None
    pair_model: dict[str, bool]

    @property
    def ok(self) -> bool:
        return (
            self.relators_vanish
            and self.spanning_words_generate
            and self.completed is not None
            and self.completed.free_rank == self.n**2
            and not self.completed.torsion
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "relators_vanish": self.relators_vanish,
            "spanning_words_generate": self.spanning_words_generate,
            "quotient": None if self.quotient is None else self.quotient.to_dict(),
            "completed_quotient": None if self.completed is None else self.completed.to_dict(),
            "pair_model": self.pair_model,
            "ok": self.ok,
        }


def _pair_model(n: int) -> tuple[IntMatrix, IntMatrix]:
    """(P, q) embedded as the (n+1) x (n+1) matrix [[P, 0], [q, 0]]."""
    Xt = IntMatrix.shift(n).transpose()
    rows_a = [list(r) + [0] for r in Xt.to_rows()] + [[0] * (n + 1)]
    rows_b = [[1 if (i, j) == (0, 0) else 0 for j in range(n + 1)] for i in range(n)]
    rows_b.append([1] + [0] * n)
    return IntMatrix.from_rows(rows_a), IntMatrix.from_rows(rows_b)


def noidentity_check(n: int, L: int | None = None, cap: int = DEFAULT_MAX_DEGREE) -> NoIdentityReport:
    """Relators without identity at (X^T, E_11), bounded quotient ranks and the pair model."""
    Xt = IntMatrix.shift(n).transpose()
    Y = IntMatrix.unit(n, 1, 1)
    spec = standard_relators(n, "noidentity")
    vanish = check_relations(Xt, Y, spec).passed
    # the n^2 words x^i y x^j already give a basis of M_n(ZZ)
    words = ["x" * i + "y" + "x" * j for i in range(1, n + 1) for j in range(1, n + 1)]
    vals = word_values(words, Xt, Y)
    lat = LatticeBasis(n * n)
    for w in words:
        lat.add(vals[w].entries)
    left_identity = NcPoly({"x" * n + "y": 1, "y": -1}, False)
    completed = PresentationSpec(n, "noidentity+", spec.relators + [left_identity], spec.names + ["x^n y - y"], False)
    L = L if L is not None else spec.max_degree + 2 * n
    q = qc = None
    if L <= cap:
        q = bounded_quotient_rank(spec, L, cap=cap)
        qc = bounded_quotient_rank(completed, L, cap=cap)
    A, B = _pair_model(n)
    model = {nm: evaluate_ncpoly(r, A, B).is_zero() for nm, r in zip(spec.names, spec.relators)}
    model["x^n y - y != 0"] = not evaluate_ncpoly(left_identity, A, B).is_zero()
    return NoIdentityReport(n, vanish, lat.is_full, q, qc, model)


def parse_relator_file(text: str, unital: bool = True) -> list[NcPoly]:
    """One relator per non-empty line; '#' starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(NcPoly.parse(line, unital))
    return out



def modular_blocks(n: int, labels) -> list[tuple[IntMatrix, IntMatrix]]:
    """Images of (x, y) in M_n(ZZ) for the quotients by I_n, I_n^t, I_n(m), I_n(m)^t.

    Labels: 'I', 'It', ('I', m) or 'I<m>' for the m-shift, ('It', m) or 'I<m>t'
    for its transpose.  The quotient by I_n(m) sends y to Y - mX.
    """
    X = IntMatrix.shift(n)
    Y = IntMatrix.unit(n, 1, 1)
    out = []
    for lab in labels:
        if isinstance(lab, tuple):
            kind, m = lab
        elif lab in ("I", "It"):
            kind, m = lab, 0
        else:
            body = lab[1:]
            kind = "It" if body.endswith("t") else "I"
            m = int(body.rstrip("t"))
        A, B = X, Y - X.scale(m)
        out.append((B, A) if kind == "It" else (A, B))
    return out

__all__ += ["parse_relator_file", "word_code", "code_word", "modular_blocks"]
