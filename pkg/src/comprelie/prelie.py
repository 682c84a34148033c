"""The Com-Pre-Lie structure induced on words by a letter endomorphism.

The product is defined recursively on word lengths: the empty word acts as
zero on the left, and ``xw . w' = x(w . w') + f(x)(w sh w')``.  A closed
form expands the same product as a sum over shuffle position-subsets with a
fixed-point-prefix count; both are exposed and cross-checked.  The module
also provides the antisymmetrized bracket, letterwise induced morphisms,
Hilbert-style dimension series, and rank computations for generated spans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .endo import Endo, apply_endo_letter, iterate_endo_letter
from .exactla import SpanBasis
from .words import Letter, Rat, Tensor, Word, shuffle, _shuffle_words, _from_clean

LetterMap = Callable[[Letter], Mapping[Letter, Rat]]


@dataclass
class ComPreLieContext:
    """A letter endomorphism together with memo caches for its products."""

    f: Endo
    _cache: dict[tuple[Word, Word], tuple[tuple[Word, Rat], ...]] = field(
        default_factory=dict, repr=False
    )
    extras: dict = field(default_factory=dict, repr=False)  # caches of other layers

    @property
    def alphabet(self) -> tuple[Letter, ...]:
        return self.f.alphabet


def _prepend_image(
    image: Mapping[Letter, Rat], tail_terms: Iterable[tuple[Word, Rat]], acc: dict[Word, Rat]
) -> None:
    """acc += (sum_y image[y] * y) concatenated before each tail term."""
    for y, cy in image.items():
        for w, c in tail_terms:
            key = Word((y,) + w.letters)
            c2 = acc.get(key, 0) + cy * c
            if c2:
                acc[key] = c2
            elif key in acc:
                del acc[key]


def _prelie_words(ctx: ComPreLieContext, u: Word, v: Word) -> tuple[tuple[Word, Rat], ...]:
    if len(u) == 0:
        return ()
    key = (u, v)
    hit = ctx._cache.get(key)
    if hit is not None:
        return hit
    x, w = u[0], u[1:]
    acc: dict[Word, Rat] = {}
    # x (w . v)
    _prepend_image({x: 1}, _prelie_words(ctx, w, v), acc)
    # f(x) (w sh v)
    _prepend_image(apply_endo_letter(ctx.f, x), _shuffle_words(w, v), acc)
    out = tuple(acc.items())
    ctx._cache[key] = out
    return out


def prelie(ctx: ComPreLieContext, a: Word | Tensor, b: Word | Tensor) -> Tensor:
    """The pre-Lie product, extended bilinearly."""
    ta = a if isinstance(a, Tensor) else Tensor.of(a)
    tb = b if isinstance(b, Tensor) else Tensor.of(b)
    acc: dict[Word, Rat] = {}
    for u, cu in ta.items():
        for v, cv in tb.items():
            c = cu * cv
            for w, m in _prelie_words(ctx, u, v):
                c2 = acc.get(w, 0) + c * m
                if c2:
                    acc[w] = c2
                elif w in acc:
                    del acc[w]
    return _from_clean(acc)


def apply_at(f: Endo, w: Word, i: int) -> Tensor:
    """Apply ``f`` to the letter at position ``i`` (0-based), linearly."""
    acc: dict[Word, Rat] = {}
    for y, c in apply_endo_letter(f, w[i]).items():
        acc[Word(w.letters[:i] + (y,) + w.letters[i + 1:])] = c
    return Tensor(acc)


def prelie_closed(ctx: ComPreLieContext, u: Word, v: Word) -> Tensor:
    """Closed form of the product of two words.

    Sum over the position subsets realizing the (k,l)-shuffles of ``uv``;
    each shuffle contributes one term per leading position of ``u`` kept in
    place (the fixed-point prefix), with ``f`` applied there.
    """
    k, l = len(u), len(v)
    if k == 0:
        return Tensor.zero()
    letters = u.letters + v.letters
    acc: dict[Word, Rat] = {}
    for positions in itertools.combinations(range(k + l), k):
        out: list[Letter | None] = [None] * (k + l)
        for p, x in zip(positions, u.letters):
            out[p] = x
        it = iter(v.letters)
        for p in range(k + l):
            if out[p] is None:
                out[p] = next(it)
        m = 0
        while m < k and positions[m] == m:
            m += 1
        for i in range(m):
            for y, cy in apply_endo_letter(ctx.f, letters[i]).items():
                key = Word(tuple(out[:i]) + (y,) + tuple(out[i + 1:]))  # type: ignore[arg-type]
                c2 = acc.get(key, 0) + cy
                if c2:
                    acc[key] = c2
                elif key in acc:
                    del acc[key]
    return Tensor(acc)


def lie_bracket(ctx: ComPreLieContext, a: Word | Tensor, b: Word | Tensor) -> Tensor:
    """Antisymmetrization of the pre-Lie product."""
    return prelie(ctx, a, b) - prelie(ctx, b, a)


# ---------------------------------------------------------------------------
# letterwise morphisms
# ---------------------------------------------------------------------------

def _as_letter_map(fmap: Endo | LetterMap) -> LetterMap:
    if isinstance(fmap, Endo):
        return fmap.image_letter
    return fmap


def induced_morphism(
    fmap: Endo | LetterMap,
    t: Word | Tensor,
    source: Endo | None = None,
    target: Endo | None = None,
) -> Tensor:
    """Apply a letter map to every position: x1...xn -> F(x1)...F(xn).

    When ``source`` and ``target`` endomorphisms are supplied, the
    intertwining F(source(x)) = target(F(x)) is verified on each letter
    actually touched; this is what makes the letterwise map respect the
    products, so a violation raises.
    """
    F = _as_letter_map(fmap)
    tt = t if isinstance(t, Tensor) else Tensor.of(t)
    if source is not None and target is not None:
        for w in tt.terms:
            for x in w:
                _check_intertwining(F, source, target, x)
    acc: dict[Word, Rat] = {}
    for w, c in tt.items():
        terms: list[tuple[tuple[Letter, ...], Rat]] = [((), c)]
        for x in w:
            image = F(x)
            terms = [
                (prefix + (y,), cp * cy)
                for prefix, cp in terms
                for y, cy in image.items()
            ]
            if not terms:
                break
        for prefix, cp in terms:
            key = Word(prefix)
            c2 = acc.get(key, 0) + cp
            if c2:
                acc[key] = c2
            elif key in acc:
                del acc[key]
    return Tensor(acc)


def _check_intertwining(F: LetterMap, source: Endo, target: Endo, x: Letter) -> None:
    lhs: dict[Letter, Rat] = {}
    for y, c in apply_endo_letter(source, x).items():
        for z, m in F(y).items():
            lhs[z] = lhs.get(z, 0) + c * m
    rhs: dict[Letter, Rat] = {}
    for y, c in F(x).items():
        for z, m in apply_endo_letter(target, y).items():
            rhs[z] = rhs.get(z, 0) + c * m
    if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
        raise ValueError(f"letter map does not intertwine the endomorphisms at {x}")


def specialization_map(f: Endo, assignment: Mapping[str, Letter | str]) -> LetterMap:
    """The letter map sending the indexed letter ``k:d`` to f^k(assignment[d]).

    Composing with the word extension turns upper-word/decoration pairs into
    concrete elements of the target algebra.
    """
    assign = {
        d: x if isinstance(x, Letter) else Letter(x) for d, x in assignment.items()
    }

    def F(x: Letter) -> Mapping[Letter, Rat]:
        if x.shift is None:
            raise ValueError(f"specialization expects indexed letters, got {x}")
        if x.name not in assign:
            raise ValueError(f"no assignment for decoration {x.name!r}")
        return iterate_endo_letter(f, x.shift, assign[x.name])

    return F


# ---------------------------------------------------------------------------
# dimension series
# ---------------------------------------------------------------------------

@dataclass
class GradedSeries:
    """Dimensions by degree, plus the (degree, word count) refinement."""

    coefficients: list[int]
    truncation: int
    bigraded: dict[tuple[int, int], int]

    def dimension(self, degree: int) -> int:
        if not 0 <= degree <= self.truncation:
            raise ValueError(f"degree {degree} outside truncation {self.truncation}")
        return self.coefficients[degree]


def graded_series(dims_of_v: Sequence[int], n_shift: int, trunc: int) -> GradedSeries:
    """Expand X^N / (1 - F_V(X) Y) to the given truncation.

    ``dims_of_v[d]`` is the dimension of the degree-d letter space; the
    degree-0 slot must be 0 (otherwise word count would not bound degree and
    the coefficients would diverge).  ``n_shift`` is the common degree shift
    N added to every word (the empty word has degree exactly N).  Setting
    Y = 1 gives the plain degree series.
    """
    if dims_of_v and dims_of_v[0] != 0:
        raise ValueError("degree-0 letters are not allowed (dims_of_v[0] must be 0)")
    fv = list(dims_of_v[: trunc + 1]) + [0] * max(0, trunc + 1 - len(dims_of_v))
    bigraded: dict[tuple[int, int], int] = {}
    coeffs = [0] * (trunc + 1)
    power = [0] * (trunc + 1)  # F_V(X)^k, coefficient list
    power[0] = 1
    k = 0
    while True:
        for d in range(trunc + 1):
            if power[d] and d + n_shift <= trunc:
                bigraded[(d + n_shift, k)] = power[d]
                coeffs[d + n_shift] += power[d]
        k += 1
        nxt = [0] * (trunc + 1)
        for d1 in range(trunc + 1):
            if power[d1]:
                for d2 in range(1, trunc + 1 - d1):
                    if fv[d2]:
                        nxt[d1 + d2] += power[d1] * fv[d2]
        power = nxt
        if not any(power):
            break
    return GradedSeries(coeffs, trunc, bigraded)


# ---------------------------------------------------------------------------
# generated spans
# ---------------------------------------------------------------------------

def span_dimension_of_products(
    ctx: ComPreLieContext,
    generators: Sequence[Tensor],
    degree: int,
    ops: Sequence[str] = ("prelie", "shuffle"),
) -> int:
    """Dimension of the degree-``degree`` part of the generated subalgebra.

    Generators are split into their length-homogeneous parts, then closed
    under the requested products (length adds under both), tracking ranks
    with exact row reduction until nothing grows.  Intended for small
    degrees (<= 5); the cost is polynomial in the basis sizes but those grow
    quickly with the alphabet.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    unknown = set(ops) - {"prelie", "shuffle"}
    if unknown:
        raise ValueError(f"unknown ops: {sorted(unknown)}")
    spans: dict[int, SpanBasis] = {d: SpanBasis() for d in range(1, degree + 1)}
    fresh: dict[int, list[Tensor]] = {d: [] for d in range(1, degree + 1)}
    independent: dict[int, list[Tensor]] = {d: [] for d in range(1, degree + 1)}

    def feed(t: Tensor) -> None:
        for d in range(1, degree + 1):
            part = t.graded_part(d)
            if part and spans[d].add(part.terms):
                fresh[d].append(part)

    for g in generators:
        feed(g)
    while any(fresh.values()):
        batch, fresh = fresh, {d: [] for d in range(1, degree + 1)}
        for d, vecs in batch.items():
            independent[d].extend(vecs)
        for d1, vecs1 in independent.items():
            for d2, vecs2 in independent.items():
                if d1 + d2 > degree:
                    continue
                for a in vecs1:
                    for b in vecs2:
                        if a not in batch.get(d1, ()) and b not in batch.get(d2, ()):
                            continue  # at least one factor must be new
                        if "prelie" in ops:
                            feed(prelie(ctx, a, b))
                        if "shuffle" in ops:
                            feed(shuffle(a, b))
    return spans[degree].rank


def image_span_contains(ctx: ComPreLieContext, t: Tensor) -> bool:
    """Membership in the span of words with >= 1 position inside Im(f).

    The degree-n test space is spanned, for each position i, by words with
    an Im(f) basis vector substituted at i and arbitrary letters elsewhere.
    The zero tensor counts as a member; a nonzero degree-0 part never is.
    """
    if not t:
        return True
    if t.coefficient(Word(())):
        return False
    image_vectors: list[Tensor] = []
    seen = SpanBasis()
    for x in ctx.alphabet:
        v = Tensor(
            {Word((y,)): c for y, c in apply_endo_letter(ctx.f, x).items()}
        )
        if v and seen.add(v.terms):
            image_vectors.append(v)
    for n in sorted({len(w) for w in t.terms}):
        part = t.graded_part(n)
        span = SpanBasis()
        for i in range(n):
            for v in image_vectors:
                for rest in itertools.product(ctx.alphabet, repeat=n - 1):
                    vec: dict[Word, Rat] = {}
                    for yw, c in v.items():
                        letters = rest[:i] + (yw[0],) + rest[i:]
                        key = Word(letters)
                        vec[key] = vec.get(key, 0) + c
                    span.add(vec)
        if not span.contains(part.terms):
            return False
    return True


def associativity_witness(
    ctx: ComPreLieContext, max_len: int = 3
) -> tuple[Word, Word, Word] | None:
    """A triple (a, b, c) with (a.b).c != a.(b.c), if one exists.

    Searched over all words of length <= max_len, smallest total length
    first.  Returns None when the product is associative on that range —
    which happens exactly when it is trivial.
    """
    words: list[Word] = [Word(())]
    for n in range(1, max_len + 1):
        words.extend(Word(t) for t in itertools.product(ctx.alphabet, repeat=n))
    triples = sorted(
        itertools.product(words, repeat=3), key=lambda abc: sum(len(w) for w in abc)
    )
    for a, b, c in triples:
        left = prelie(ctx, prelie(ctx, a, b), c)
        right = prelie(ctx, a, prelie(ctx, b, c))
        if left != right:
            return (a, b, c)
    return None
