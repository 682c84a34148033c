"""Composition groups of truncated word series.

A character is modeled as a series truncated at word length L.  The
composition follows the recursion ``xu comp v = sum_i f^i(x)((u comp v) sh
v^(sh i))`` — finite because the letter endomorphism must be nilpotent —
and the group law is ``u diamond v = u comp v + v`` with the zero series as
identity.  Because every operation only adds length, truncation is exact
for the coefficients retained.

The input-output (Fliess-operator) groups of control theory are the
special case over the alphabet {x0, ..., xn}: an element carries an output
channel i, its composition gates the ``x0`` correction by whether a
letter's index matches the channel, and the full group is the direct
product over channels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .endo import iterate_endo_letter, nilpotency_index
from .prelie import ComPreLieContext
from .words import EMPTY_WORD, Letter, Rat, Tensor, Word, shuffle


class TruncatedSeries:
    """A rational word series with all words longer than L discarded."""

    __slots__ = ("trunc", "tensor")

    def __init__(self, trunc: int, terms: Tensor | Mapping[Word, Rat] | Iterable[tuple[Word, Rat]] = ()):
        if trunc < 0:
            raise ValueError("truncation length must be >= 0")
        t = terms if isinstance(terms, Tensor) else Tensor(terms)
        self.trunc = trunc
        self.tensor = Tensor(
            {w: c for w, c in t.items() if len(w) <= trunc}
        )

    @classmethod
    def zero(cls, trunc: int) -> "TruncatedSeries":
        return cls(trunc)

    def coefficient(self, w: Word) -> Rat:
        return self.tensor.coefficient(w)

    def items(self):
        return self.tensor.items()

    def __bool__(self) -> bool:
        return bool(self.tensor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.tensor == other.tensor

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(self.trunc, self.tensor + other.tensor)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(self.trunc, self.tensor - other.tensor)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.trunc, self.tensor.scale(-1))

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if self.trunc != other.trunc:
            raise ValueError(
                f"mismatched truncations: {self.trunc} vs {other.trunc}"
            )

    def __str__(self) -> str:
        return str(self.tensor)

    def __repr__(self) -> str:
        return f"<TruncatedSeries L={self.trunc} {self.tensor}>"


def _truncate(t: Tensor, L: int) -> Tensor:
    return Tensor({w: c for w, c in t.items() if len(w) <= L})


def _require_nilpotent(ctx: ComPreLieContext) -> int:
    n = nilpotency_index(ctx.f)
    if n is None:
        raise ValueError(
            "series composition needs a nilpotent letter endomorphism "
            "(the correction sum would not terminate)"
        )
    return n


def tilde_compose(
    ctx: ComPreLieContext, u: TruncatedSeries, v: TruncatedSeries
) -> TruncatedSeries:
    """The reduced composition; linear in the left argument."""
    u._check_compatible(v)
    L = u.trunc
    N = _require_nilpotent(ctx)
    v_pows = [Tensor.of(EMPTY_WORD)]
    for _ in range(1, N):
        v_pows.append(_truncate(shuffle(v_pows[-1], v.tensor), L))
    memo: dict[Word, Tensor] = {}

    def rec(w: Word) -> Tensor:
        if len(w) == 0:
            return Tensor.of(EMPTY_WORD)
        hit = memo.get(w)
        if hit is not None:
            return hit
        x, rest = w[0], w[1:]
        base = rec(rest)
        acc = Tensor()
        for i in range(N):
            image = iterate_endo_letter(ctx.f, i, x)
            if not image:
                break
            mixed = _truncate(shuffle(base, v_pows[i]), L - 1)
            part = Tensor(
                {
                    Word((y,) + t.letters): cy * c
                    for y, cy in image.items()
                    for t, c in mixed.items()
                }
            )
            acc = acc + part
        memo[w] = acc
        return acc

    out = Tensor()
    for w, c in u.items():
        out = out + rec(w).scale(c)
    return TruncatedSeries(L, out)


def diamond(
    ctx: ComPreLieContext, u: TruncatedSeries, v: TruncatedSeries
) -> TruncatedSeries:
    """The group law: reduced composition plus the right operand."""
    return tilde_compose(ctx, u, v) + v


def inverse(ctx: ComPreLieContext, u: TruncatedSeries) -> TruncatedSeries:
    """The diamond-inverse of ``u`` at its truncation.

    Solved as the fixed point v = -(u comp v); each pass fixes one more
    word length, so convergence within trunc+2 passes is guaranteed —
    failure indicates a bug, not bad input.
    """
    _require_nilpotent(ctx)
    L = u.trunc
    v = TruncatedSeries.zero(L)
    for _ in range(L + 2):
        nxt = -tilde_compose(ctx, u, v)
        if nxt == v:
            break
        v = nxt
    if diamond(ctx, u, v).tensor or diamond(ctx, v, u).tensor:
        raise RuntimeError("inverse iteration failed to converge; internal error")
    return v


# ---------------------------------------------------------------------------
# input-output series over {x0, ..., xn}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FliessElement:
    """A single-channel input-output series: the component index together
    with a scalar series over {x0, ..., xn}."""

    channel: int
    series: TruncatedSeries

    def __post_init__(self):
        if self.channel < 1:
            raise ValueError(f"channel must be >= 1, got {self.channel}")


def _letter_index(x: Letter) -> int:
    if x.shift is None and x.name.startswith("x") and x.name[1:].isdigit():
        return int(x.name[1:])
    raise ValueError(f"expected an input-alphabet letter x0..xn, got {x}")


def fliess_tilde(
    c: FliessElement, d: Sequence[TruncatedSeries], trunc: int | None = None
) -> FliessElement:
    """Reduced composition of a single-channel series with an n-tuple.

    Each letter x_j of a word prepends itself; when j matches the channel
    the word also absorbs one shuffle copy of the channel component of
    ``d`` behind a new x0.  Letters x_j with j > len(d) are allowed only in
    the outer series, not as gates (the gate only fires on the channel).
    """
    n = len(d)
    i = c.channel
    if i > n:
        raise ValueError(f"channel {i} outside the {n}-tuple of inner series")
    L = c.series.trunc if trunc is None else trunc
    di = d[i - 1]
    if di.trunc != L:
        raise ValueError(f"mismatched truncations: {di.trunc} vs {L}")
    x0 = Letter("x0")
    memo: dict[Word, Tensor] = {}

    def rec(w: Word) -> Tensor:
        if len(w) == 0:
            return Tensor.of(EMPTY_WORD)
        hit = memo.get(w)
        if hit is not None:
            return hit
        x, rest = w[0], w[1:]
        base = rec(rest)
        acc = Tensor(
            {Word((x,) + t.letters): cf for t, cf in base.items() if len(t) < L}
        )
        if _letter_index(x) == i:
            mixed = _truncate(shuffle(base, di.tensor), L - 1)
            acc = acc + Tensor(
                {Word((x0,) + t.letters): cf for t, cf in mixed.items()}
            )
        memo[w] = acc
        return acc

    out = Tensor()
    for w, cf in c.series.items():
        out = out + rec(w).scale(cf)
    return FliessElement(i, TruncatedSeries(L, out))


def fliess_diamond(
    c: Sequence[TruncatedSeries], d: Sequence[TruncatedSeries]
) -> tuple[TruncatedSeries, ...]:
    """Componentwise group law on n-tuples of series."""
    if len(c) != len(d):
        raise ValueError(f"tuple sizes differ: {len(c)} vs {len(d)}")
    out = []
    for i, ci in enumerate(c, start=1):
        composed = fliess_tilde(FliessElement(i, ci), d)
        out.append(composed.series + d[i - 1])
    return tuple(out)


def fibonacci_dims(n: int, k_max: int) -> list[int]:
    """Coefficients d_0..d_kmax of X / (1 - nX - X^2).

    These are the homogeneous dimensions of the single-channel series
    algebra when the n plain input letters have degree 1 and x0 degree 2,
    with every word shifted by one; n = 1 gives the Fibonacci numbers and
    n = 2 the Pell numbers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    dims = [0, 1]
    while len(dims) <= k_max:
        dims.append(n * dims[-1] + dims[-2])
    return dims[: k_max + 1]
