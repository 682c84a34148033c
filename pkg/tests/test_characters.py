"""Truncated composition groups and the input-output series instance."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from comprelie.characters import (
    FliessElement,
    TruncatedSeries,
    diamond,
    fibonacci_dims,
    fliess_diamond,
    fliess_tilde,
    inverse,
    tilde_compose,
)
from comprelie.endo import Endo, fliess_channel, iterate_endo_letter, transpose_endo
from comprelie.enveloping import dual_coproduct
from comprelie.prelie import ComPreLieContext
from comprelie.words import EMPTY_WORD, Tensor, Word, parse_tensor, parse_word, shuffle

W = parse_word
T = parse_tensor

NIL = Endo.matrix(["a", "b"], [[0, Fraction(1, 2)], [0, 0]])
F11 = fliess_channel(1, 1)


def series(trunc: int, src: str) -> TruncatedSeries:
    return TruncatedSeries(trunc, T(src))


def random_series(trunc: int, alphabet, rng: random.Random, terms: int = 4) -> TruncatedSeries:
    words = [Word(())]
    for n in range(1, trunc + 1):
        words.extend(Word(t) for t in itertools.product(alphabet, repeat=n))
    acc = {}
    for _ in range(terms):
        w = rng.choice(words)
        acc[w] = acc.get(w, 0) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return TruncatedSeries(trunc, acc)


# ---------------------------------------------------------------------------
# composition basics
# ---------------------------------------------------------------------------

def test_empty_word_composes_to_itself():
    ctx = ComPreLieContext(NIL)
    v = series(4, "a + 2*ab")
    assert tilde_compose(ctx, series(4, "e"), v) == series(4, "e")


def test_single_letter_composition():
    ctx = ComPreLieContext(NIL)
    v = series(4, "a + 1/2*bb")
    got = tilde_compose(ctx, series(4, "b"), v)
    # sum over i of f^i(x) prepended to the i-th shuffle power of v
    expected = Tensor.of(W("b")) + Tensor(
        {
            Word((W("a")[0],) + t.letters): Fraction(1, 2) * c
            for t, c in v.tensor.items()
        }
    )
    assert got == TruncatedSeries(4, expected)


def test_nested_formula_for_word_composition():
    ctx = ComPreLieContext(NIL)
    N = 2
    v = series(5, "a + ab - 1/3*b")
    L = 5
    for letters in ("bb", "ba", "bab"):
        u = W(letters)
        expected = Tensor.of(EMPTY_WORD)
        # build inside-out over the reversed letters
        for x in reversed(u.letters):
            acc = Tensor()
            pow_v = Tensor.of(EMPTY_WORD)
            for i in range(N):
                image = iterate_endo_letter(ctx.f, i, x)
                mixed = shuffle(expected, pow_v)
                for y, cy in image.items():
                    for t, c in mixed.items():
                        if len(t) + 1 <= L:
                            acc = acc + Tensor.of(Word((y,) + t.letters), cy * c)
                pow_v = shuffle(pow_v, v.tensor)
            expected = acc
        got = tilde_compose(ctx, TruncatedSeries(L, Tensor.of(u)), v)
        assert got == TruncatedSeries(L, expected), letters


def test_compose_with_zero_is_identity():
    ctx = ComPreLieContext(NIL)
    u = series(4, "ab + 3*b - e")
    assert tilde_compose(ctx, u, TruncatedSeries.zero(4)) == u
    assert diamond(ctx, u, TruncatedSeries.zero(4)) == u


def test_zero_left_operand():
    ctx = ComPreLieContext(NIL)
    v = series(4, "a + ab")
    assert tilde_compose(ctx, TruncatedSeries.zero(4), v) == TruncatedSeries.zero(4)
    assert diamond(ctx, TruncatedSeries.zero(4), v) == v


def test_rejects_non_nilpotent():
    ctx = ComPreLieContext(Endo.diagonal({"a": 1}))
    with pytest.raises(ValueError, match="nilpotent"):
        tilde_compose(ctx, series(3, "a"), series(3, "a"))


def test_rejects_mismatched_truncation():
    ctx = ComPreLieContext(NIL)
    with pytest.raises(ValueError, match="truncation"):
        tilde_compose(ctx, series(3, "a"), series(4, "a"))


def test_diamond_associative_on_random_series():
    ctx = ComPreLieContext(NIL)
    rng = random.Random(7)
    for _ in range(6):
        u = random_series(4, ctx.alphabet, rng)
        v = random_series(4, ctx.alphabet, rng)
        w = random_series(4, ctx.alphabet, rng)
        lhs = diamond(ctx, diamond(ctx, u, v), w)
        rhs = diamond(ctx, u, diamond(ctx, v, w))
        assert lhs == rhs


def test_inverse_roundtrip():
    ctx = ComPreLieContext(NIL)
    rng = random.Random(40)
    zero = TruncatedSeries.zero(4)
    assert inverse(ctx, zero) == zero
    for _ in range(5):
        u = random_series(4, ctx.alphabet, rng)
        v = inverse(ctx, u)
        assert diamond(ctx, u, v) == zero
        assert diamond(ctx, v, u) == zero
        assert inverse(ctx, v) == u


def test_composition_matches_dual_coproduct_evaluation():
    # coefficient of w in u comp v, against evaluating u (x) v on the dual
    # coproduct of w taken with the transposed endomorphism
    ctx = ComPreLieContext(F11)
    dual_ctx = ComPreLieContext(transpose_endo(F11))
    rng = random.Random(11)
    words2 = [Word(())] + [
        Word(t) for n in (1, 2) for t in itertools.product(F11.alphabet, repeat=n)
    ]
    for _ in range(4):
        u = random_series(3, F11.alphabet, rng)
        v = random_series(3, F11.alphabet, rng)
        comp = tilde_compose(ctx, u, v)
        for w in words2:
            expected = 0
            for t, mono, c in dual_coproduct(dual_ctx, w):
                val = u.coefficient(t)
                if not val:
                    continue
                for factor in mono.factors:
                    val *= v.coefficient(factor)
                    if not val:
                        break
                expected += c * val
            assert comp.coefficient(w) == expected, w


# ---------------------------------------------------------------------------
# input-output tuples
# ---------------------------------------------------------------------------

def x_alphabet(n: int):
    return [parse_word(f"x{j}")[0] for j in range(n + 1)]


def test_fliess_empty_word():
    d = (series(3, "x1 + x0.x2"), series(3, "x2"))
    c = FliessElement(1, series(3, "e"))
    assert fliess_tilde(c, d).series == series(3, "e")


def test_fliess_channel_gate():
    # on channel 1 the letter x1 fires the gate, x2 does not
    d = (series(3, "x2"), series(3, "x1"))
    got = fliess_tilde(FliessElement(1, series(3, "x1")), d)
    assert got.series == series(3, "x1 + x0.x2")
    got2 = fliess_tilde(FliessElement(1, series(3, "x2")), d)
    assert got2.series == series(3, "x2")


def test_fliess_matches_generic_composition_on_channel():
    # a channel paired with its own endomorphism: the two engines agree
    n, i = 2, 1
    fi = fliess_channel(n, i)
    ctx = ComPreLieContext(fi)
    rng = random.Random(3)
    alphabet = x_alphabet(n)
    for _ in range(4):
        u = random_series(3, alphabet, rng)
        v = random_series(3, alphabet, rng)
        d = tuple(
            v if j == i else TruncatedSeries.zero(3) for j in range(1, n + 1)
        )
        lhs = fliess_tilde(FliessElement(i, u), d).series
        rhs = tilde_compose(ctx, u, v)
        assert lhs == rhs


def test_cross_channel_composition_is_trivial():
    n = 2
    alphabet = x_alphabet(n)
    rng = random.Random(9)
    for i, j in ((1, 2), (2, 1)):
        for _ in range(3):
            u = random_series(3, alphabet, rng)
            v = random_series(3, alphabet, rng)
            d = tuple(
                v if kk == j else TruncatedSeries.zero(3)
                for kk in range(1, n + 1)
            )
            assert fliess_tilde(FliessElement(i, u), d).series == u


def test_fliess_diamond_direct_product():
    # elements supported on different channels just add
    n = 2
    u = series(3, "x1.x2 + x0")
    v = series(3, "x2 - x0.x1")
    zero = TruncatedSeries.zero(3)
    c = (u, zero)
    d = (zero, v)
    got = fliess_diamond(c, d)
    assert got == (u, v)


def test_fliess_diamond_identity():
    n = 2
    zero = TruncatedSeries.zero(3)
    c = (series(3, "x1 + x0.x2"), series(3, "x2.x2"))
    assert fliess_diamond(c, (zero, zero)) == c
    assert fliess_diamond((zero, zero), c) == c


def test_fliess_diamond_single_channel_agrees_with_diamond():
    ctx = ComPreLieContext(fliess_channel(1, 1))
    rng = random.Random(21)
    alphabet = x_alphabet(1)
    for _ in range(4):
        u = random_series(3, alphabet, rng)
        v = random_series(3, alphabet, rng)
        got = fliess_diamond((u,), (v,))
        assert got == (diamond(ctx, u, v),)


# ---------------------------------------------------------------------------
# dimension audit
# ---------------------------------------------------------------------------

def test_fibonacci_dims_sequences():
    assert fibonacci_dims(1, 8) == [0, 1, 1, 2, 3, 5, 8, 13, 21]
    assert fibonacci_dims(2, 5) == [0, 1, 2, 5, 12, 29]
    for n in (1, 2, 3):
        dims = fibonacci_dims(n, 5)
        assert dims[3] == n * n + 1
        assert dims[4] == n * (n * n + 2)
        assert dims[5] == n**4 + 3 * n * n + 1


def test_fibonacci_dims_count_graded_words():
    # degree of a word = length + number of x0 letters + 1
    for n in (1, 2, 3):
        alphabet = x_alphabet(n)
        x0 = alphabet[0]
        counts = [0] * 9
        for m in range(8):
            for tup in itertools.product(alphabet, repeat=m):
                deg = m + sum(1 for x in tup if x == x0) + 1
                if deg <= 8:
                    counts[deg] += 1
        assert counts == fibonacci_dims(n, 8)


def test_fibonacci_rejects_bad_input():
    with pytest.raises(ValueError):
        fibonacci_dims(0, 3)
