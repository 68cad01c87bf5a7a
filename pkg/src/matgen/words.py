"""Words over {x, y}, noncommutative integer polynomials, and word-value matrices.

A word is a plain Python string over the letters ``x`` and ``y``; the empty
string stands for the identity and is only admitted in unital polynomials.
Python's string order is exactly the order used here (x < y, a proper prefix
comes first).
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Mapping

from .linalg import DimensionMismatch, IntMatrix

__all__ = [
    "Word",
    "NcPoly",
    "enumerate_words",
    "flatten",
    "evaluate_word",
    "evaluate_ncpoly",
    "word_values",
    "build_T",
    "format_word",
    "parse_word",
]

Word = str
ALPHABET = "xy"


def _check_word(w: str) -> str:
    if any(ch not in ALPHABET for ch in w):
        raise ValueError(f"word {w!r} uses letters outside {{x, y}}")
    return w


def enumerate_words(m: int, unital: bool = False) -> list[Word]:
    """All words of length 1..m (plus the empty word when unital), sorted."""
    if m < 0:
        raise ValueError("m must be non-negative")
    words = [""] if unital else []
    for length in range(1, m + 1):
        words.extend("".join(p) for p in product(ALPHABET, repeat=length))
    return sorted(words)


def format_word(w: Word) -> str:
    """Compact exponent notation: 'xxxyx' -> 'x^3*y*x'; the empty word prints as '1'."""
    if not w:
        return "1"
    parts = []
    for m in re.finditer(r"x+|y+", w):
        run = m.group()
        parts.append(run[0] if len(run) == 1 else f"{run[0]}^{len(run)}")
    return "*".join(parts)


_FACTOR = re.compile(r"\s*([xy])\s*(?:\^\s*(\d+))?\s*")


def parse_word(text: str) -> Word:
    """Parse 'x^3 y x y^2' or 'x^3*y*x*y^2' (or '1' for the empty word)."""
    text = text.strip()
    if text == "1":
        return ""
    out = []
    pos = 0
    text = text.replace("*", " ")
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _FACTOR.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        out.append(m.group(1) * int(m.group(2) or 1))
        pos = m.end()
    return "".join(out)


class NcPoly:
    """Integer combination of words in the free (semi)group algebra on x, y."""

    __slots__ = ("terms", "unital")

    def __init__(self, terms: Mapping[Word, int] | None = None, unital: bool = True):
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            _check_word(w)
            if c:
                clean[w] = clean.get(w, 0) + int(c)
        self.terms = {w: c for w, c in clean.items() if c}
        if "" in self.terms and not unital:
            raise ValueError("the empty word needs a unital polynomial")
        self.unital = unital

    # -- constructors -----------------------------------------------------
    @classmethod
    def word(cls, w: Word, coef: int = 1, unital: bool = True) -> "NcPoly":
        return cls({w: coef}, unital)

    @classmethod
    def one(cls) -> "NcPoly":
        return cls({"": 1}, True)

    @classmethod
    def parse(cls, text: str, unital: bool = True) -> "NcPoly":
        """Parse sums such as 'x^4 + x^3*y*x - 1' or '2 x y - 3 y^2'."""
        src = text.replace(" ", "")
        if not src:
            return cls({}, unital)
        if src[0] not in "+-":
            src = "+" + src
        if re.sub(r"[+-][^+-]+", "", src):
            raise ValueError(f"cannot parse polynomial {text!r}")
        terms: dict[Word, int] = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", src):
            m = re.match(r"^(\d+)\*?(.*)$", body)
            if m:
                coef, rest = int(m.group(1)), m.group(2)
            else:
                coef, rest = 1, body
            w = parse_word(rest) if rest else ""
            coef = -coef if sign == "-" else coef
            terms[w] = terms.get(w, 0) + coef
        if "" in {w for w, c in terms.items() if c} and not unital:
            raise ValueError("constant term in a non-unital polynomial")
        return cls(terms, unital)

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = NcPoly({"": other} if other else {}, True)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"NcPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for w in sorted(self.terms, key=lambda w: (-len(w), w)):
            c = self.terms[w]
            body = format_word(w)
            if w == "":
                txt = str(abs(c))
            elif abs(c) == 1:
                txt = body
            else:
                txt = f"{abs(c)}*{body}"
            pieces.append(("- " if c < 0 else "+ ") + txt)
        s = " ".join(pieces)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            return other
        if isinstance(other, int):
            if other and not self.unital:
                raise ValueError("integer constant in a non-unital polynomial")
            return NcPoly({"": other} if other else {}, self.unital)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NcPoly(out, self.unital or other.unital)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly({w: -c for w, c in self.terms.items()}, self.unital)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return NcPoly({w: c * other for w, c in self.terms.items()}, self.unital)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NcPoly(out, self.unital and other.unital)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int) -> "NcPoly":
        if e < 1:
            if e == 0 and self.unital:
                return NcPoly.one()
            raise ValueError("non-positive power")
        out = self
        for _ in range(e - 1):
            out = out * self
        return out

    def lmul(self, u: Word) -> "NcPoly":
        return NcPoly({u + w: c for w, c in self.terms.items()}, self.unital)

    def rmul(self, v: Word) -> "NcPoly":
        return NcPoly({w + v: c for w, c in self.terms.items()}, self.unital)

    def substitute(self, x_image: "NcPoly", y_image: "NcPoly") -> "NcPoly":
        """Ring endomorphism x -> x_image, y -> y_image (the identity is fixed)."""
        images = {"x": x_image, "y": y_image}
        out = NcPoly({}, self.unital)
        for w, c in self.terms.items():
            term = NcPoly({"": c}, True)
            for ch in w:
                term = term * images[ch]
            out = out + term
        out.unital = self.unital
        return out

    def swap_letters(self) -> "NcPoly":
        tr = str.maketrans("xy", "yx")
        return NcPoly({w.translate(tr): c for w, c in self.terms.items()}, self.unital)

    def to_json(self) -> str:
        return str(self)


# ---------------------------------------------------------------------------
# matrices


def flatten(M: IntMatrix) -> tuple:
    """Row-major vector of a square matrix."""
    if not M.is_square:
        raise DimensionMismatch("flatten needs a square matrix")
    return M.entries


def _check_pair(A: IntMatrix, B: IntMatrix):
    if not (A.is_square and B.is_square) or A.shape != B.shape:
        raise DimensionMismatch(f"incompatible pair shapes {A.shape} and {B.shape}")
    if A.ring != B.ring:
        raise DimensionMismatch(f"ring mismatch: {A.ring} vs {B.ring}")


def evaluate_word(w: Word, A: IntMatrix, B: IntMatrix) -> IntMatrix:
    _check_pair(A, B)
    if not w:
        return IntMatrix.identity(A.rows, A.ring)
    letters = {"x": A, "y": B}
    out = letters[w[0]]
    for ch in w[1:]:
        out = out @ letters[ch]
    return out


def word_values(words: Iterable[Word], A: IntMatrix, B: IntMatrix) -> dict[Word, IntMatrix]:
    """Values of many words, sharing prefix products through a memo."""
    _check_pair(A, B)
    memo: dict[Word, IntMatrix] = {"": IntMatrix.identity(A.rows, A.ring), "x": A, "y": B}
    letters = {"x": A, "y": B}

    def value(w: Word) -> IntMatrix:
        v = memo.get(w)
        if v is None:
            v = value(w[:-1]) @ letters[w[-1]]
            memo[w] = v
        return v

    return {w: value(w) for w in words}


def evaluate_ncpoly(f: NcPoly, A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Substitute x -> A, y -> B and the empty word -> identity."""
    vals = word_values(f.terms, A, B)
    out = IntMatrix.zeros(A.rows, A.cols, A.ring)
    for w, c in f.terms.items():
        out = out + vals[w].scale(c)
    return out


def build_T(m: int, A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Rows are the flattened values of every non-empty word of length <= m, in word order."""
    words = enumerate_words(m)
    vals = word_values(words, A, B)
    n2 = A.rows * A.cols
    entries = tuple(x for w in words for x in flatten(vals[w]))
    return IntMatrix(len(words), n2, entries, A.ring)
