"""Decorated rooted forests and the diagonal-eigenvalue word elements.

The free commutative algebra on symbol-decorated rooted trees carries the
admissible-cut coproduct, and the pairing that weights each forest by its
symmetry count puts it in duality with the enveloping algebra of the free
pre-Lie algebra on the symbols.  When every symbol carries an eigenvalue,
iterated leaf grafting produces elements t_w indexed by words; their span
is closed under the coproduct, and the induced cobracket dualizes to the
weighted-interleaving pre-Lie product on words.  Rescaling the one-symbol
row recovers the Faa di Bruno bracket [y_k, y_l] = (k-l) y_{k+l}.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from .endo import Endo
from .enveloping import OudomGuin
from .exactla import express_in
from .prelie import ComPreLieContext, prelie
from .trees import PartitionedTree, free_bullet, graft_at, parse_tree, singleton
from .words import Letter, Rat, Tensor, Word, check_coefficient, parse_word


def _bump(acc: dict, key, c: Rat) -> None:
    c2 = acc.get(key, 0) + c
    if c2:
        acc[key] = c2
    elif key in acc:
        del acc[key]


def _as_letters(w) -> tuple[Letter, ...]:
    if isinstance(w, str):
        return parse_word(w).letters
    if isinstance(w, Word):
        return w.letters
    return tuple(w)


def _weight_map(lam: Mapping) -> dict[Letter, Rat]:
    out: dict[Letter, Rat] = {}
    for k, v in lam.items():
        x = Letter(k) if isinstance(k, str) else k
        out[x] = check_coefficient(v)
    return out


def _weight(wmap: Mapping[Letter, Rat], x: Letter) -> Rat:
    try:
        return wmap[x]
    except KeyError:
        raise ValueError(f"no weight supplied for symbol {x}") from None


# ---------------------------------------------------------------------------
# forests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Forest:
    """A multiset of decorated rooted trees; the empty forest is the unit
    of the product."""

    trees: tuple[PartitionedTree, ...] = ()

    def __post_init__(self):
        for t in self.trees:
            if not isinstance(t, PartitionedTree) or not t.is_rooted_tree():
                raise ValueError("forest factors must be rooted trees (all blocks singletons)")
            for dec in t.decorations:
                if not isinstance(dec, Letter) or dec.shift is not None:
                    raise ValueError(f"forest decorations must be plain symbols, got {dec!r}")
        object.__setattr__(self, "trees", tuple(sorted(self.trees)))

    @staticmethod
    def of(*trees: PartitionedTree) -> "Forest":
        return Forest(tuple(trees))

    def times(self, other: "Forest") -> "Forest":
        return Forest(self.trees + other.trees)

    @property
    def n_vertices(self) -> int:
        return sum(t.size for t in self.trees)

    def is_tree(self) -> bool:
        return len(self.trees) == 1

    def _key(self):
        return (self.n_vertices, tuple((t.size, str(t)) for t in self.trees))

    def __lt__(self, other: "Forest") -> bool:
        if not isinstance(other, Forest):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        if not self.trees:
            return "1"
        return " * ".join(str(t) for t in self.trees)


def parse_forest(text: str) -> Forest:
    """``"a[b] * c"`` is the two-tree forest; ``"1"`` is the empty one."""
    text = text.strip()
    if text == "1":
        return Forest()
    return Forest(tuple(parse_tree(tok) for tok in text.split("*")))


class ForestPoly:
    """A finitely supported rational combination of forests."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Forest, Rat] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Forest, Rat] = {}
        for f, c in items:
            _bump(acc, f, check_coefficient(c))
        self.terms = acc

    @classmethod
    def of(cls, f: Forest, coeff: Rat = 1) -> "ForestPoly":
        return cls([(f, coeff)])

    def items(self):
        return self.terms.items()

    def support(self):
        return self.terms.keys()

    def coefficient(self, f: Forest) -> Rat:
        return self.terms.get(f, 0)

    def scale(self, c: Rat) -> "ForestPoly":
        check_coefficient(c)
        return ForestPoly({f: c * v for f, v in self.terms.items()} if c else {})

    def __add__(self, other: "ForestPoly") -> "ForestPoly":
        acc = dict(self.terms)
        for f, c in other.terms.items():
            _bump(acc, f, c)
        return ForestPoly(acc)

    def __sub__(self, other: "ForestPoly") -> "ForestPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "ForestPoly") -> "ForestPoly":
        acc: dict[Forest, Rat] = {}
        for f, c in self.terms.items():
            for g, c2 in other.terms.items():
                _bump(acc, f.times(g), c * c2)
        return ForestPoly(acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ForestPoly):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for f in sorted(self.terms):
            c = Fraction(self.terms[f])
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            body = str(f) if mag == 1 else f"{mag}*{f}"
            chunks.append(f"{sign} {body}")
        out = " ".join(chunks)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]


def _as_poly(x) -> ForestPoly:
    if isinstance(x, ForestPoly):
        return x
    if isinstance(x, PartitionedTree):
        x = Forest.of(x)
    return ForestPoly.of(x)


# ---------------------------------------------------------------------------
# admissible cuts
# ---------------------------------------------------------------------------

def _children_map(t: PartitionedTree) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = {v: [] for v in range(1, t.size + 1)}
    for v in range(1, t.size + 1):
        p = t.parents[v - 1]
        if p is not None:
            kids[p].append(v)
    return kids


def _descendants(kids: Mapping[int, list[int]], v: int) -> list[int]:
    out, stack = [], [v]
    while stack:
        u = stack.pop()
        out.append(u)
        stack.extend(kids[u])
    return out


def _part(t: PartitionedTree, vertices: Iterable[int]) -> PartitionedTree:
    """The induced subtree on a downward-closed vertex set with one top."""
    vs = sorted(vertices)
    index = {v: i + 1 for i, v in enumerate(vs)}
    parents = []
    for v in vs:
        p = t.parents[v - 1]
        parents.append(index.get(p) if p is not None else None)
    return PartitionedTree.build(
        tuple(t.decorations[v - 1] for v in vs),
        tuple(parents),
        tuple((i,) for i in range(1, len(vs) + 1)),
    )


def tree_coproduct(t: PartitionedTree) -> dict[tuple[Forest, Forest], Rat]:
    """Admissible cuts of one tree: antichains of edges, each named by its
    lower vertex.  The root side goes left, the cut-off branches right;
    the empty cut and the total cut give the two unit terms."""
    kids = _children_map(t)
    anc: dict[int, set[int]] = {}
    for v in range(1, t.size + 1):
        up, p = set(), t.parents[v - 1]
        while p is not None:
            up.add(p)
            p = t.parents[p - 1]
        anc[v] = up
    nonroot = [v for v in range(1, t.size + 1) if t.parents[v - 1] is not None]
    out: dict[tuple[Forest, Forest], Rat] = {(Forest(), Forest.of(t)): 1}
    for mask in range(1 << len(nonroot)):
        cut = [v for j, v in enumerate(nonroot) if mask >> j & 1]
        if any(anc[v] & set(cut) for v in cut):
            continue
        below: set[int] = set()
        for v in cut:
            below.update(_descendants(kids, v))
        trunk = _part(t, (v for v in range(1, t.size + 1) if v not in below))
        branches = Forest(tuple(_part(t, _descendants(kids, v)) for v in cut))
        _bump(out, (Forest.of(trunk), branches), 1)
    return out


def ck_coproduct(x) -> dict[tuple[Forest, Forest], Rat]:
    """The admissible-cut coproduct, multiplicative over forest factors;
    returned as a (left forest, right forest) -> coefficient mapping."""
    out: dict[tuple[Forest, Forest], Rat] = {}
    for f, c in _as_poly(x).items():
        acc: dict[tuple[Forest, Forest], Rat] = {(Forest(), Forest()): 1}
        for t in f.trees:
            cop = tree_coproduct(t)
            nxt: dict[tuple[Forest, Forest], Rat] = {}
            for (l1, r1), c1 in acc.items():
                for (l2, r2), c2 in cop.items():
                    _bump(nxt, (l1.times(l2), r1.times(r2)), c1 * c2)
            acc = nxt
        for key, c2 in acc.items():
            _bump(out, key, c * c2)
    return out


# ---------------------------------------------------------------------------
# the symmetry pairing
# ---------------------------------------------------------------------------

def _tree_sym(t: PartitionedTree) -> int:
    kids = _children_map(t)
    root = t.root_block[0]
    branches = Counter(_part(t, _descendants(kids, c)) for c in kids[root])
    s = 1
    for sub, m in branches.items():
        s *= factorial(m) * _tree_sym(sub) ** m
    return s


def symmetry_factor(x: Forest | PartitionedTree) -> int:
    """Order of the decoration-preserving automorphism group."""
    f = x if isinstance(x, Forest) else Forest.of(x)
    s = 1
    for t, m in Counter(f.trees).items():
        s *= factorial(m) * _tree_sym(t) ** m
    return s


def pairing(a, b) -> Rat:
    """Bilinear pairing that is diagonal on forests, weighted by the
    symmetry factor."""
    pa, pb = _as_poly(a), _as_poly(b)
    total: Rat = 0
    for f, c in pa.items():
        c2 = pb.coefficient(f)
        if c2:
            total += c * c2 * symmetry_factor(f)
    return total


# ---------------------------------------------------------------------------
# grafting operators and the t elements
# ---------------------------------------------------------------------------

def n_d(x, d: Letter | str, lam: Mapping) -> ForestPoly:
    """Graft one ``d``-decorated leaf at every vertex, each graft weighted
    by the eigenvalue of the host vertex's symbol.  A derivation."""
    leaf = singleton(Letter(d) if isinstance(d, str) else d)
    wmap = _weight_map(lam)
    acc: dict[Forest, Rat] = {}
    for f, c in _as_poly(x).items():
        for i, t in enumerate(f.trees):
            rest = f.trees[:i] + f.trees[i + 1:]
            for v in range(1, t.size + 1):
                w = _weight(wmap, t.decorations[v - 1])
                if w:
                    _bump(acc, Forest(rest + (graft_at(t, v, leaf),)), c * w)
    return ForestPoly(acc)


def phi_lambda(x, lam: Mapping) -> ForestPoly:
    """Scale each forest by the eigenvalue sum over its vertices."""
    wmap = _weight_map(lam)
    acc: dict[Forest, Rat] = {}
    for f, c in _as_poly(x).items():
        total: Rat = 0
        for t in f.trees:
            for dec in t.decorations:
                total += _weight(wmap, dec)
        if total:
            _bump(acc, f, c * total)
    return ForestPoly(acc)


def tree_projection(x) -> ForestPoly:
    """Keep the single-tree forests; the unit and proper products go to 0."""
    return ForestPoly({f: c for f, c in _as_poly(x).items() if f.is_tree()})


def t_word(w, lam: Mapping) -> ForestPoly:
    """The tree combination of a word: start from the one-vertex tree on
    the first symbol and graft the remaining symbols one by one."""
    letters = _as_letters(w)
    if not letters:
        raise ValueError("t elements need a nonempty word")
    acc = ForestPoly.of(Forest.of(singleton(letters[0])))
    for d in letters[1:]:
        acc = n_d(acc, d, lam)
    return acc


# ---------------------------------------------------------------------------
# the cobracket on t elements and its dual product
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexSubset:
    """Strictly increasing 1-based positions in a word.  ``prefix_reach``
    is the largest i with 1..i all selected (0 when 1 is missing)."""

    positions: tuple[int, ...]

    def __post_init__(self):
        if list(self.positions) != sorted(set(self.positions)) or (
            self.positions and self.positions[0] < 1
        ):
            raise ValueError("positions must be strictly increasing and 1-based")

    @property
    def prefix_reach(self) -> int:
        m = 0
        for i, p in enumerate(self.positions, start=1):
            if p != i:
                break
            m = i
        return m

    def subword(self, letters: tuple[Letter, ...]) -> Word:
        return Word(tuple(letters[p - 1] for p in self.positions))

    def complement(self, n: int) -> "IndexSubset":
        chosen = set(self.positions)
        return IndexSubset(tuple(p for p in range(1, n + 1) if p not in chosen))


def delta_cobracket(w, lam: Mapping, mode: str = "closed") -> dict[tuple[Word, Word], Rat]:
    """Cobracket of ``t_w``, expressed in the t basis as a
    (left word, right word) -> coefficient mapping.

    The closed mode sums over proper position subsets, weighting each by
    the eigenvalues along its initial run.  The projected mode cuts the
    tree expansion of t_w, keeps the tree x tree part and solves for the
    t-basis coordinates; it needs all weights nonzero so the t elements
    stay independent.
    """
    letters = _as_letters(w)
    n = len(letters)
    if n == 0:
        raise ValueError("t elements need a nonempty word")
    wmap = _weight_map(lam)
    if mode == "closed":
        out: dict[tuple[Word, Word], Rat] = {}
        for mask in range(1, (1 << n) - 1):
            sub = IndexSubset(tuple(i + 1 for i in range(n) if mask >> i & 1))
            m = sub.prefix_reach
            if m == 0:
                continue
            weight = sum(_weight(wmap, letters[i]) for i in range(m))
            if weight:
                _bump(out, (sub.subword(letters), sub.complement(n).subword(letters)), weight)
        return out
    if mode != "projected":
        raise ValueError(f"unknown mode {mode!r}")
    for x in letters:
        if not _weight(wmap, x):
            raise ValueError("projected mode needs nonzero weights")
    target: dict[tuple[Forest, Forest], Rat] = {}
    for (left, right), c in ck_coproduct(t_word(letters, wmap)).items():
        if left.is_tree() and right.is_tree():
            target[(left, right)] = c
    pairs: list[tuple[Word, Word]] = []
    seen = set()
    for mask in range(1, (1 << n) - 1):
        sub = IndexSubset(tuple(i + 1 for i in range(n) if mask >> i & 1))
        key = (sub.subword(letters), sub.complement(n).subword(letters))
        if key not in seen:
            seen.add(key)
            pairs.append(key)
    vectors = []
    for u, v in pairs:
        tu, tv = t_word(u, wmap), t_word(v, wmap)
        vectors.append(
            {(f, g): a * b for f, a in tu.items() for g, b in tv.items()}
        )
    coeffs = express_in(vectors, target)
    if coeffs is None:
        raise RuntimeError("cobracket landed outside the t basis; internal error")
    return {pair: c for pair, c in zip(pairs, coeffs) if c}


def dual_prelie_coeff(lam: Mapping, u, v) -> Tensor:
    """The product dual to the cobracket on the t basis: interleave the
    two words every way, weighting each interleaving by the eigenvalues of
    the left word's letters along the initial run it keeps."""
    uu, vv = _as_letters(u), _as_letters(v)
    wmap = _weight_map(lam)
    k, l = len(uu), len(vv)
    acc: dict[Word, Rat] = {}
    for slots in itertools.combinations(range(k + l), k):
        m = 0
        for j, p in enumerate(slots):
            if p != j:
                break
            m = j + 1
        if m == 0:
            continue
        weight = sum(_weight(wmap, uu[j]) for j in range(m))
        if not weight:
            continue
        letters: list[Letter | None] = [None] * (k + l)
        for j, p in enumerate(slots):
            letters[p] = uu[j]
        rest = iter(vv)
        merged = tuple(x if x is not None else next(rest) for x in letters)
        _bump(acc, Word(merged), weight)
    return Tensor(acc)


def y_bracket_check(lam: Rat, k: int, l: int, symbol: str = "x") -> tuple[Tensor, Tensor]:
    """One-symbol bracket after the factorial rescaling y_m = (m+1)!/lam x^m:
    returns (computed, expected) with expected = (k-l) y_{k+l}, raising if
    the two disagree."""
    check_coefficient(lam)
    if not lam:
        raise ValueError("the eigenvalue must be nonzero")
    if k < 1 or l < 1:
        raise ValueError("bracket indices start at 1")
    ctx = ComPreLieContext(Endo.diagonal({symbol: lam}))

    def y(m: int) -> Tensor:
        return Tensor.of(Word((Letter(symbol),) * m), Fraction(factorial(m + 1)) / lam)

    computed = prelie(ctx, y(k), y(l)) - prelie(ctx, y(l), y(k))
    expected = y(k + l).scale(k - l)
    if computed != expected:
        raise RuntimeError("bracket check failed; internal error")
    return computed, expected


# ---------------------------------------------------------------------------
# the enveloping product on forests
# ---------------------------------------------------------------------------

def _tree_base(t1: PartitionedTree, t2: PartitionedTree) -> Mapping[PartitionedTree, Rat]:
    return free_bullet(t1, t2).terms


_TREE_ENGINE = OudomGuin(_tree_base)


def forest_bullet(a, b) -> ForestPoly:
    """Grafting extended to forests through the derivation rules."""
    return _wrap_forests(_TREE_ENGINE.bullet(_raw_forests(a), _raw_forests(b)))


def forest_star(a, b) -> ForestPoly:
    """The associative enveloping product on forests, dual to the
    admissible-cut coproduct under the symmetry pairing."""
    return _wrap_forests(_TREE_ENGINE.star(_raw_forests(a), _raw_forests(b)))


def _raw_forests(x) -> dict[tuple, Rat]:
    return {f.trees: c for f, c in _as_poly(x).items()}


def _wrap_forests(d: Mapping[tuple, Rat]) -> ForestPoly:
    return ForestPoly({Forest(m): c for m, c in d.items()})
