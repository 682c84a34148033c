"""Exact linear algebra over words: the shuffle Hopf algebra on a free module.

Words are finite sequences of letters; a letter is either a plain symbol
(``a``, ``x0``) or an indexed symbol ``k:d`` carrying a natural shift ``k``
(used by the generic endomorphism that raises the index).  Linear
combinations of words with rational coefficients (:class:`Tensor`) carry the
shuffle product, its half-shuffle (Zinbiel) refinement, concatenation, and
the deconcatenation coproduct.

Conventions:

* the empty word ``e`` is the unit for shuffle and concatenation;
* ``e < w = 0`` and ``w < e = w`` for nonempty ``w``, while ``e < e`` is
  rejected (the half-shuffle of two empty words is undefined);
* coefficients are exact rationals (`int` or `fractions.Fraction`); floats
  are rejected.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rat = Union[int, Fraction]


def check_coefficient(c: object) -> Rat:
    """Accept exact rationals only; floats would silently break exactness."""
    if isinstance(c, (int, Fraction)):
        return c
    raise TypeError(f"coefficient must be an exact rational, got {type(c).__name__}: {c!r}")


@dataclass(frozen=True, slots=True)
class Letter:
    """A basis symbol, optionally carrying a natural shift index.

    Plain letters (``shift is None``) render as their name; shifted letters
    render as ``"k:name"``.  Letters are totally ordered by (name, shift),
    with plain letters sorting before any shifted letter of the same name.
    """

    name: str
    shift: int | None = None

    def _key(self) -> tuple[str, int]:
        return (self.name, -1 if self.shift is None else self.shift)

    def __lt__(self, other: "Letter") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Letter") -> bool:
        return self._key() <= other._key()

    def __str__(self) -> str:
        if self.shift is None:
            return self.name
        return f"{self.shift}:{self.name}"

    def __repr__(self) -> str:
        return f"Letter({str(self)!r})"


@dataclass(frozen=True, slots=True)
class Word:
    """An immutable word; supports len/iteration/slicing and concatenation."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        """Concatenation."""
        return Word(self.letters + other.letters)

    def _key(self):
        # length-lexicographic: the canonical term order
        return (len(self.letters), tuple(x._key() for x in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Word") -> bool:
        return self._key() <= other._key()

    def __str__(self) -> str:
        return word_to_str(self)

    def __repr__(self) -> str:
        return f"Word({word_to_str(self)!r})"


EMPTY_WORD = Word()


def word(letters: Iterable[Letter | str]) -> Word:
    """Build a word, promoting bare strings to plain letters."""
    return Word(tuple(x if isinstance(x, Letter) else Letter(x) for x in letters))


class Tensor:
    """A finitely supported rational linear combination of words.

    Stored zero-free with structural equality; all arithmetic is exact.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Rat] | Iterable[tuple[Word, Rat]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Rat] = {}
        for w, c in items:
            check_coefficient(c)
            c2 = acc.get(w, 0) + c
            if c2:
                acc[w] = c2
            elif w in acc:
                del acc[w]
        self.terms = acc

    @classmethod
    def zero(cls) -> "Tensor":
        return cls()

    @classmethod
    def of(cls, w: Word, coeff: Rat = 1) -> "Tensor":
        t = cls()
        if coeff:
            t.terms[w] = check_coefficient(coeff)
        return t

    @classmethod
    def unit(cls) -> "Tensor":
        """The empty word with coefficient 1 (unit of shuffle/concatenation)."""
        return cls.of(EMPTY_WORD)

    def coefficient(self, w: Word) -> Rat:
        return self.terms.get(w, 0)

    def items(self) -> Iterator[tuple[Word, Rat]]:
        return iter(self.terms.items())

    def sorted_items(self) -> list[tuple[Word, Rat]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0]._key())

    def support(self) -> list[Word]:
        return [w for w, _ in self.sorted_items()]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset((w, Fraction(c)) for w, c in self.terms.items()))

    def __add__(self, other: "Tensor") -> "Tensor":
        out = dict(self.terms)
        _add_into(out, other.terms, 1)
        return _from_clean(out)

    def __sub__(self, other: "Tensor") -> "Tensor":
        out = dict(self.terms)
        _add_into(out, other.terms, -1)
        return _from_clean(out)

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def scale(self, c: Rat) -> "Tensor":
        check_coefficient(c)
        if not c:
            return Tensor()
        return _from_clean({w: c * v for w, v in self.terms.items()})

    def __rmul__(self, c: Rat) -> "Tensor":
        return self.scale(c)

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def graded_part(self, n: int) -> "Tensor":
        return _from_clean({w: c for w, c in self.terms.items() if len(w) == n})

    def __str__(self) -> str:
        return tensor_to_str(self)

    def __repr__(self) -> str:
        return f"<Tensor {tensor_to_str(self)}>"


def _from_clean(terms: dict[Word, Rat]) -> Tensor:
    """Wrap an already zero-free dict without re-normalizing (internal)."""
    t = Tensor()
    t.terms = terms
    return t


def _add_into(acc: dict[Word, Rat], terms: Mapping[Word, Rat], scale: Rat) -> None:
    for w, c in terms.items():
        c2 = acc.get(w, 0) + scale * c
        if c2:
            acc[w] = c2
        elif w in acc:
            del acc[w]


def normalize(terms: Mapping[Word, Rat] | Iterable[tuple[Word, Rat]]) -> Tensor:
    """Merge duplicate words and drop zero coefficients."""
    return Tensor(terms)


def _as_tensor(x: Word | Tensor) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor.of(x)


# ---------------------------------------------------------------------------
# shuffle / half-shuffle / concatenation / deconcatenation
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _shuffle_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """All interleavings of u and v, merged with multiplicities.

    Enumerated by choosing the positions of u's letters among len(u)+len(v)
    slots, so the term count (with multiplicity) is C(k+l, k).
    """
    k, l = len(u), len(v)
    if k == 0:
        return ((v, 1),)
    if l == 0:
        return ((u, 1),)
    acc: dict[Word, int] = {}
    slots = k + l
    for positions in itertools.combinations(range(slots), k):
        out: list[Letter | None] = [None] * slots
        for p, x in zip(positions, u.letters):
            out[p] = x
        it = iter(v.letters)
        for p in range(slots):
            if out[p] is None:
                out[p] = next(it)
        w = Word(tuple(out))  # type: ignore[arg-type]
        acc[w] = acc.get(w, 0) + 1
    return tuple(acc.items())


def shuffle(a: Word | Tensor, b: Word | Tensor) -> Tensor:
    """Shuffle product, extended bilinearly."""
    ta, tb = _as_tensor(a), _as_tensor(b)
    acc: dict[Word, Rat] = {}
    for w1, c1 in ta.items():
        for w2, c2 in tb.items():
            c = c1 * c2
            for w, m in _shuffle_words(w1, w2):
                c3 = acc.get(w, 0) + c * m
                if c3:
                    acc[w] = c3
                elif w in acc:
                    del acc[w]
    return _from_clean(acc)


def half_shuffle(a: Word | Tensor, b: Word | Tensor) -> Tensor:
    """Half-shuffle (Zinbiel) product ``a < b``.

    On words: ``xu < v = x(u sh v)``; the interleavings that keep the first
    letter of ``a`` in front.  ``e < w = 0`` and ``w < e = w`` for nonempty
    ``w``; ``e < e`` raises ValueError (it is left undefined).
    """
    ta, tb = _as_tensor(a), _as_tensor(b)
    if EMPTY_WORD in ta.terms and EMPTY_WORD in tb.terms:
        raise ValueError("half_shuffle(e, e) is undefined")
    acc: dict[Word, Rat] = {}
    for w1, c1 in ta.items():
        if len(w1) == 0:
            continue  # e < w = 0
        head, tail = w1[0], w1[1:]
        for w2, c2 in tb.items():
            c = c1 * c2
            for w, m in _shuffle_words(tail, w2):
                key = Word((head,) + w.letters)
                c3 = acc.get(key, 0) + c * m
                if c3:
                    acc[key] = c3
                elif key in acc:
                    del acc[key]
    return _from_clean(acc)


def concat(a: Word | Tensor, b: Word | Tensor) -> Tensor:
    """Concatenation product, extended bilinearly."""
    ta, tb = _as_tensor(a), _as_tensor(b)
    acc: dict[Word, Rat] = {}
    for w1, c1 in ta.items():
        for w2, c2 in tb.items():
            _bump(acc, w1 + w2, c1 * c2)
    return _from_clean(acc)


def _bump(acc: dict[Word, Rat], w: Word, c: Rat) -> None:
    c2 = acc.get(w, 0) + c
    if c2:
        acc[w] = c2
    elif w in acc:
        del acc[w]


def deconcatenate(w: Word) -> list[tuple[Word, Word]]:
    """All cuts ``w = w1 w2`` (length+1 pairs), from (w, e) down to (e, w)."""
    return [(w[:i], w[i:]) for i in range(len(w), -1, -1)]


def deconcatenate_iter(w: Word, parts: int) -> Iterator[tuple[Word, ...]]:
    """All ordered splittings of ``w`` into ``parts`` (possibly empty) factors."""
    n = len(w)
    for cuts in itertools.combinations_with_replacement(range(n + 1), parts - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(w[bounds[i]:bounds[i + 1]] for i in range(parts))


# ---------------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------------

def lyndon_words(alphabet: Iterable[Letter | str], max_len: int) -> list[Word]:
    """All Lyndon words of length <= max_len over an ordered alphabet.

    Uses Duval's generation; a Lyndon word is strictly smaller than each of
    its proper suffixes.  Output is sorted length-lexicographically with the
    given alphabet order.
    """
    letters = [x if isinstance(x, Letter) else Letter(x) for x in alphabet]
    if not letters:
        raise ValueError("alphabet must be nonempty")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    n = len(letters)
    found: list[tuple[int, ...]] = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m <= max_len:
            found.append(tuple(w))
        while len(w) < max_len:
            w.append(w[-m])
        while w and w[-1] == n - 1:
            w.pop()
    found.sort(key=lambda t: (len(t), t))
    return [Word(tuple(letters[i] for i in t)) for t in found]


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_BILETTER_RE = re.compile(r"^(\d+):(\w+)$")
_NAME_RE = re.compile(r"^\w+$")


def parse_letter(token: str) -> Letter:
    m = _BILETTER_RE.match(token)
    if m:
        return Letter(m.group(2), int(m.group(1)))
    if _NAME_RE.match(token):
        return Letter(token)
    raise ValueError(f"bad letter token: {token!r}")


def parse_word(src: str) -> Word:
    """Parse the word grammar.

    ``"e"`` is the empty word; letters are separated by dots when they carry
    multi-character names or shift indices (``"x0.x1"``, ``"0:a.1:a"``).  An
    undotted run of single ASCII letters is read letterwise, so ``"abc"`` is
    the three-letter word a b c.
    """
    src = src.strip()
    if src == "e":
        return EMPTY_WORD
    if not src:
        raise ValueError("empty word source; use 'e' for the empty word")
    if "." in src or ":" in src:
        return Word(tuple(parse_letter(tok) for tok in src.split(".")))
    if all(ch.isalpha() for ch in src):
        return Word(tuple(Letter(ch) for ch in src))
    return Word((parse_letter(src),))


def word_to_str(w: Word) -> str:
    if len(w) == 0:
        return "e"
    if all(x.shift is None and len(x.name) == 1 and x.name.isalpha() for x in w):
        return "".join(x.name for x in w)
    return ".".join(str(x) for x in w)


def parse_rational(src: str) -> Rat:
    src = src.strip()
    if "/" in src:
        num, den = src.split("/")
        return Fraction(int(num), int(den))
    return int(src)


def rational_to_str(c: Rat) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _split_terms(src: str) -> list[tuple[int, str]]:
    """Split a sum "t1 + t2 - t3" into (sign, term) pairs."""
    out: list[tuple[int, str]] = []
    sign, buf = 1, []
    started = False
    for ch in src:
        if ch in "+-" and (not buf or buf[-1] not in "*/"):
            term = "".join(buf).strip()
            if term:
                out.append((sign, term))
            elif started and not term:
                raise ValueError(f"dangling sign in {src!r}")
            sign = 1 if ch == "+" else -1
            buf = []
            started = True
        else:
            buf.append(ch)
    term = "".join(buf).strip()
    if not term:
        raise ValueError(f"missing final term in {src!r}")
    out.append((sign, term))
    return out


def parse_tensor(src: str) -> Tensor:
    """Parse the linear-combination grammar: ``"3/2*x0.x1 + x1 - 2*e"``.

    A bare rational stands for that multiple of the empty word.
    """
    src = src.strip()
    if src == "0":
        return Tensor()
    pairs: list[tuple[Word, Rat]] = []
    for sign, term in _split_terms(src):
        if "*" in term:
            coeff_src, word_src = term.split("*", 1)
            pairs.append((parse_word(word_src), sign * parse_rational(coeff_src)))
        elif re.fullmatch(r"\d+(/\d+)?", term):
            pairs.append((EMPTY_WORD, sign * parse_rational(term)))
        else:
            pairs.append((parse_word(term), sign))
    return Tensor(pairs)


def tensor_to_str(t: Tensor) -> str:
    if not t:
        return "0"
    chunks: list[str] = []
    for w, c in t.sorted_items():
        c = Fraction(c)
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        body = word_to_str(w) if mag == 1 else f"{rational_to_str(mag)}*{word_to_str(w)}"
        chunks.append(f"{sign} {body}")
    out = " ".join(chunks)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
