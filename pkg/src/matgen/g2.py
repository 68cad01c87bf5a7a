"""Pairs generating M_2(ZZ): a determinant test, reduction to a normal form,
and the quadratic-unit description of the normal forms.

A pair (A, B) generates M_2(ZZ) iff gcd(det A, det B, det(A+B)) = 1 and the
integer span of I, A, B, AB is everything.  The normal form of a generating
triple (I, A, B) is A = [[c, 1], [1, 0]], B = [[a, 0], [b, 0]] with
a^2 - abc - b^2 = +-1, whose solutions come from units (d + b sqrt(c^2+4))/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .linalg import IntMatrix, det, xgcd

__all__ = [
    "G2Check",
    "g2_fast_check",
    "CanonicalTriple",
    "NotGeneratingTriple",
    "reduce_triple",
    "QuadUnit",
    "DegenerateDiscriminant",
    "pell_fundamental",
    "continued_fraction_convergents",
    "G2Solution",
    "enumerate_solutions",
    "form_value_abc",
    "assemble_pair",
]

IDENTITY2 = IntMatrix.identity(2)


class NotGeneratingTriple(ValueError):
    pass


class DegenerateDiscriminant(ValueError):
    pass


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix.from_rows(M)


@dataclass(frozen=True)
class G2Check:
    generates: bool
    det_gcd: int
    span_det: int

    def to_dict(self) -> dict:
        return {"generates": self.generates, "det_gcd": self.det_gcd, "span_det": self.span_det}


def span_matrix(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """4x4 matrix with rows flatten(I), flatten(A), flatten(B), flatten(AB)."""
    return IntMatrix.from_rows([IDENTITY2.entries, A.entries, B.entries, (A @ B).entries])


def g2_fast_check(A, B) -> G2Check:
    A, B = _as_matrix(A), _as_matrix(B)
    if A.shape != (2, 2) or B.shape != (2, 2):
        raise ValueError("g2_fast_check needs 2x2 matrices")
    g = math.gcd(det(A), det(B), det(A + B))
    sd = det(span_matrix(A, B))
    return G2Check(g == 1 and abs(sd) == 1, g, sd)


# ---------------------------------------------------------------------------
# reduction of a generating triple


@dataclass(frozen=True)
class CanonicalTriple:
    """A = [[c, 1], [e, 0]], B = [[a, 0], [b, 0]]; canonical when e == 1.

    The triple (I, A, B) generates M_2(ZZ) iff e*a^2 - a*b*c - b^2 = +-1.
    """

    c: int
    a: int
    b: int
    e: int = 1
    steps: tuple[str, ...] = field(default=(), compare=False)

    @property
    def canonical(self) -> bool:
        return self.e == 1

    @property
    def form_value(self) -> int:
        return self.e * self.a**2 - self.a * self.b * self.c - self.b**2

    def matrices(self) -> tuple[IntMatrix, IntMatrix]:
        return (
            IntMatrix.from_rows([[self.c, 1], [self.e, 0]]),
            IntMatrix.from_rows([[self.a, 0], [self.b, 0]]),
        )

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "a": self.a,
            "b": self.b,
            "e": self.e,
            "canonical": self.canonical,
            "form_value": self.form_value,
            "steps": list(self.steps),
        }


def reduce_triple(A, B) -> CanonicalTriple:
    """Replace (A, B) by integer combinations of I, A, B reaching the normal form.

    Each move keeps the integer span of I, A, B.  The (2,1) entry of A can
    only be shifted by multiples of b, so e == 1 is reached exactly when
    b divides e - 1 (or e == 1 already); otherwise e is reported reduced.
    """
    A, B = _as_matrix(A), _as_matrix(B)
    if abs(det(span_matrix(A, B))) != 1:
        raise NotGeneratingTriple("I, A, B do not generate M_2(ZZ)")
    steps = []
    x12, y12 = A[0, 1], B[0, 1]
    g, s, t = xgcd(x12, y12)
    if g != 1:
        raise NotGeneratingTriple(f"gcd of the (1,2) entries is {g}")
    A, B = A.scale(s) + B.scale(t), B.scale(x12) - A.scale(y12)
    steps.append(f"A <- {s}*A + {t}*B; B <- {x12}*B - {y12}*A")
    x22, y22 = A[1, 1], B[1, 1]
    A = A - IDENTITY2.scale(x22)
    B = B - IDENTITY2.scale(y22)
    steps.append(f"A <- A - {x22}*I; B <- B - {y22}*I")
    a, b = B[0, 0], B[1, 0]
    if math.gcd(a, b) != 1:
        raise NotGeneratingTriple(f"gcd(a, b) = {math.gcd(a, b)}")
    e = A[1, 0]
    if e != 1:
        if b != 0 and (1 - e) % b == 0:
            gamma = (1 - e) // b
        elif b != 0:
            # bring e into the balanced residue range modulo b
            r = e % abs(b)
            if 2 * r > abs(b):
                r -= abs(b)
            gamma = (r - e) // b
        else:
            gamma = 0
        if gamma:
            A = A + B.scale(gamma)
            steps.append(f"A <- A + {gamma}*B")
    out = CanonicalTriple(A[0, 0], a, b, A[1, 0], tuple(steps))
    if abs(out.form_value) != 1:
        raise NotGeneratingTriple("reduction ended outside the generating locus")  # should not happen
    return out


def form_value_abc(a: int, b: int, c: int) -> int:
    return a * a - a * b * c - b * b


def assemble_pair(c: int, a: int, b: int) -> tuple[IntMatrix, IntMatrix]:
    return IntMatrix.from_rows([[c, 1], [1, 0]]), IntMatrix.from_rows([[a, 0], [b, 0]])


# ---------------------------------------------------------------------------
# quadratic units


@dataclass(frozen=True)
class QuadUnit:
    """(d + b sqrt(D)) / 2 with d^2 - D b^2 = +-4."""

    d: int
    b: int
    D: int

    def __post_init__(self):
        if self.d * self.d - self.D * self.b * self.b not in (4, -4):
            raise ValueError(f"({self.d}, {self.b}) does not solve d^2 - {self.D} b^2 = +-4")

    @property
    def norm(self) -> int:
        return (self.d * self.d - self.D * self.b * self.b) // 4

    def __mul__(self, other: "QuadUnit") -> "QuadUnit":
        if self.D != other.D:
            raise ValueError("units of different fields")
        d = (self.d * other.d + self.D * self.b * other.b) // 2
        b = (self.d * other.b + other.d * self.b) // 2
        return QuadUnit(d, b, self.D)

    def __pow__(self, k: int) -> "QuadUnit":
        out = QuadUnit(2, 0, self.D)
        for _ in range(k):
            out = out * self
        return out

    def to_dict(self) -> dict:
        return {"d": str(self.d), "b": str(self.b), "D": self.D, "norm": self.norm}


def _floor_quadratic(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt(D)) / Q) for non-square D and Q != 0."""
    s = math.isqrt(D)
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def continued_fraction_convergents(P: int, Q: int, D: int):
    """Convergents (p, q) of (P + sqrt(D)) / Q, D non-square, Q | D - P^2."""
    if (D - P * P) % Q:
        # scale so the divisibility invariant holds
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    p0, p1 = 0, 1
    q0, q1 = 1, 0
    while True:
        a = _floor_quadratic(P, D, Q)
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        yield p1, q1
        P = a * Q - P
        Q = (D - P * P) // Q


def pell_fundamental(c: int, max_terms: int = 100000) -> QuadUnit:
    """Least solution (d, b), b > 0, of d^2 - (c^2 + 4) b^2 = +-4, by continued fractions."""
    D = c * c + 4
    if math.isqrt(D) ** 2 == D:
        raise DegenerateDiscriminant(f"c^2 + 4 = {D} is a perfect square")
    if D % 4 == 1:
        conv = continued_fraction_convergents(1, 2, D)
        to_db = lambda p, q: (2 * p - q, q)  # noqa: E731
    else:
        conv = continued_fraction_convergents(0, 1, D // 4)
        to_db = lambda p, q: (2 * p, q)  # noqa: E731
    for _, (p, q) in zip(range(max_terms), conv):
        d, b = to_db(p, q)
        if d * d - D * b * b in (4, -4):
            return QuadUnit(abs(d), b, D)
    raise RuntimeError("continued fraction did not reach a unit")  # pragma: no cover


@dataclass(frozen=True)
class G2Solution:
    a: int
    b: int
    c: int
    unit: QuadUnit | None = None

    @property
    def value(self) -> int:
        return form_value_abc(self.a, self.b, self.c)

    def pair(self) -> tuple[IntMatrix, IntMatrix]:
        return assemble_pair(self.c, self.a, self.b)

    def to_dict(self) -> dict:
        out = {"a": str(self.a), "b": str(self.b), "c": self.c, "value": self.value}
        if self.unit is not None:
            out["d"] = str(self.unit.d)
        return out


def _order_key(s: G2Solution):
    return (abs(s.b), s.a < 0, abs(s.a), -s.b)


def enumerate_solutions(c: int, count: int, signs: bool = False) -> list[G2Solution]:
    """The first ``count`` solutions of a^2 - abc - b^2 = +-1 ordered by |b|, then
    nonnegative a before negative a, then |a|.

    For c != 0 these come from the powers eps^j (j >= 1) of the fundamental
    unit: each (d, b) gives a = (bc +- d)/2.  Only b > 0 representatives are
    listed unless ``signs`` adds the (-a, -b) twins.  For c == 0 the complete
    finite solution set is returned.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if c == 0:
        sols = [G2Solution(a, b, 0) for a, b in ((1, 0), (-1, 0), (0, 1), (0, -1))]
        if not signs:
            sols = [s for s in sols if s.b > 0 or (s.b == 0 and s.a > 0)]
        return sorted(sols, key=_order_key)[:count]
    eps = pell_fundamental(c)
    sols: dict[tuple[int, int], G2Solution] = {}
    u = eps
    while True:
        for a in ((u.b * c + u.d) // 2, (u.b * c - u.d) // 2):
            sols.setdefault((a, u.b), G2Solution(a, u.b, c, u))
            if signs:
                sols.setdefault((-a, -u.b), G2Solution(-a, -u.b, c, u))
        ordered = sorted(sols.values(), key=_order_key)
        nxt = u * eps
        if len(ordered) >= count and nxt.b > abs(ordered[count - 1].b):
            return ordered[:count]
        u = nxt
