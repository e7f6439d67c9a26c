"""Words, planar bracket trees and formal sums over them.

A word is a tuple of positive ints.  A bracket tree is either a bare int
(a leaf) or a :class:`Node` pairing two subtrees; trees are planar, so
``Node(1, 2)`` and ``Node(2, 1)`` are different keys even though they are
negatives of each other in the free Lie algebra.  Reduction to the
left-nested basis is an explicit step (:func:`lie_normalize`).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Sequence, Tuple, Union

Word = Tuple[int, ...]


class Node(NamedTuple):
    left: "Tree"
    right: "Tree"

    def __repr__(self):
        return tree_to_str(self)


Tree = Union[int, Node]


class FormalSum:
    """Finite linear combination of hashable terms with pruned zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, coeff in items:
                self.add_term(key, coeff)

    @classmethod
    def single(cls, key, coeff=1) -> "FormalSum":
        out = cls()
        if coeff:
            out.terms[key] = coeff
        return out

    def add_term(self, key, coeff) -> None:
        if not coeff:
            return
        total = self.terms.get(key)
        if total is None:
            self.terms[key] = coeff
            return
        total = total + coeff
        if total:
            self.terms[key] = total
        else:
            del self.terms[key]

    def iadd(self, other: "FormalSum", scale=1) -> "FormalSum":
        """In-place ``self += scale * other``."""
        for key, coeff in other.terms.items():
            self.add_term(key, coeff * scale)
        return self

    def copy(self) -> "FormalSum":
        out = FormalSum()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.copy().iadd(other)

    def __sub__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.copy().iadd(other, -1)

    def __neg__(self):
        return FormalSum((k, -c) for k, c in self.terms.items())

    def __mul__(self, scalar):
        if isinstance(scalar, FormalSum):
            return NotImplemented
        return FormalSum((k, c * scalar) for k, c in self.terms.items())

    __rmul__ = __mul__

    def map_keys(self, fn: Callable) -> "FormalSum":
        out = FormalSum()
        for key, coeff in self.terms.items():
            out.add_term(fn(key), coeff)
        return out

    def __getitem__(self, key):
        return self.terms.get(key, 0)

    def __contains__(self, key):
        return key in self.terms

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, FormalSum):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "FormalSum(0)"
        parts = []
        for key, coeff in self.terms.items():
            name = tree_to_str(key) if not isinstance(key, tuple) or isinstance(key, Node) else word_to_str(key)
            parts.append(f"{coeff}*{name}")
        return "FormalSum(" + " + ".join(parts) + ")"


# words --------------------------------------------------------------------

def as_word(w) -> Word:
    """Accept a tuple/list of ints, a single int, or a serialized string."""
    if isinstance(w, str):
        return word_from_str(w)
    if isinstance(w, int):
        return (w,)
    return tuple(int(x) for x in w)


def check_distinct(P: Sequence[int]) -> None:
    if len(set(P)) != len(P):
        raise ValueError(f"word {word_to_str(P)} has repeated letters")


def transpose(P: Word) -> Word:
    return tuple(reversed(P))


def deconcatenations(P: Word) -> List[Tuple[Word, Word]]:
    """All splits ``P = QR`` with both parts non-empty."""
    return [(P[:i], P[i:]) for i in range(1, len(P))]


def ordered_partitions(P: Word, unordered: bool = False) -> List[Tuple[Word, Word]]:
    """Distribute the letters of ``P`` into two non-empty subwords keeping order.

    Pairs are listed by size of the first part, then by position.  With
    ``unordered=True`` each set partition appears once, with the part holding
    the smallest letter first.
    """
    n = len(P)
    if n < 2:
        return []
    idx = range(n)
    anchor = P.index(min(P))
    out = []
    for size in range(1, n):
        for chosen in itertools.combinations(idx, size):
            if unordered and anchor not in chosen:
                continue
            picked = set(chosen)
            Q = tuple(P[i] for i in chosen)
            R = tuple(P[i] for i in idx if i not in picked)
            out.append((Q, R))
    return out


@lru_cache(maxsize=65536)
def _shuffle(P: Word, Q: Word) -> Tuple[Tuple[Word, int], ...]:
    if not P:
        return ((Q, 1),)
    if not Q:
        return ((P, 1),)
    acc: Dict[Word, int] = {}
    for w, c in _shuffle(P[1:], Q):
        key = (P[0],) + w
        acc[key] = acc.get(key, 0) + c
    for w, c in _shuffle(P, Q[1:]):
        key = (Q[0],) + w
        acc[key] = acc.get(key, 0) + c
    return tuple(acc.items())


def shuffle(P: Word, Q: Word) -> FormalSum:
    """Shuffle product of two words, with multiplicities."""
    return FormalSum(_shuffle(tuple(P), tuple(Q)))


def word_inner(X: FormalSum, Y: FormalSum):
    """Bilinear extension of the Kronecker pairing on words."""
    if len(X) > len(Y):
        X, Y = Y, X
    total = 0
    for w, c in X.items():
        d = Y.terms.get(w)
        if d is not None:
            total = total + c * d
    return total


# trees --------------------------------------------------------------------

def left_bracketing(P: Word) -> Tree:
    """Left-nested bracket ``[[..[[p1,p2],p3],..],pk]``."""
    if not P:
        raise ValueError("cannot bracket the empty word")
    t: Tree = P[0]
    for p in P[1:]:
        t = Node(t, p)
    return t


def tree_letters(t: Tree) -> Word:
    """Leaves of ``t`` read left to right."""
    if isinstance(t, Node):
        return tree_letters(t.left) + tree_letters(t.right)
    return (t,)


@lru_cache(maxsize=65536)
def _word_expand(t: Tree) -> Tuple[Tuple[Word, int], ...]:
    if not isinstance(t, Node):
        return (((t,), 1),)
    left = _word_expand(t.left)
    right = _word_expand(t.right)
    acc: Dict[Word, int] = {}
    for a, ca in left:
        for b, cb in right:
            acc[a + b] = acc.get(a + b, 0) + ca * cb
            acc[b + a] = acc.get(b + a, 0) - ca * cb
    return tuple((w, c) for w, c in acc.items() if c)


def word_expand(x) -> FormalSum:
    """Expand a tree (or a formal sum of trees) as commutators of words."""
    if isinstance(x, FormalSum):
        out = FormalSum()
        for t, c in x.items():
            for w, m in _word_expand(t):
                out.add_term(w, c * m)
        return out
    return FormalSum(_word_expand(x))


def _append(X: Dict[Word, object], b: int) -> Dict[Word, object]:
    return {w + (b,): c for w, c in X.items()}


def _bracket_with(X: Dict[Word, object], R: Tree) -> Dict[Word, object]:
    # [l[w], R] in the anchored left-nested basis
    if not isinstance(R, Node):
        return _append(X, R)
    first = _bracket_with(_bracket_with(X, R.left), R.right)
    second = _bracket_with(_bracket_with(X, R.right), R.left)
    out = dict(first)
    for w, c in second.items():
        total = out.get(w, 0) - c
        if total:
            out[w] = total
        else:
            out.pop(w, None)
    return out


def _normalize_tree(t: Tree, anchor: int) -> Dict[Word, object]:
    if not isinstance(t, Node):
        if t != anchor:
            raise ValueError(f"anchor {anchor} missing from tree")
        return {(anchor,): 1}
    if anchor in tree_letters(t.right):
        return {w: -c for w, c in _normalize_tree(Node(t.right, t.left), anchor).items()}
    return _bracket_with(_normalize_tree(t.left, anchor), t.right)


def lie_normalize(x, anchor: int) -> FormalSum:
    """Coefficients ``(aP, x)`` of ``x`` in the basis ``l[aP]``.

    ``x`` is a tree or a formal sum of trees; each tree must contain
    ``anchor`` exactly once and have distinct letters.  The result is keyed
    by the words ``aP`` labelling basis elements.
    """
    source = x if isinstance(x, FormalSum) else FormalSum.single(x)
    out = FormalSum()
    for t, c in source.items():
        letters = tree_letters(t)
        check_distinct(letters)
        if anchor not in letters:
            raise ValueError(f"anchor {anchor} missing from tree {tree_to_str(t)}")
        for w, m in _normalize_tree(t, anchor).items():
            out.add_term(w, c * m)
    return out


def left_bracket_sum(X: FormalSum) -> FormalSum:
    """Map a sum of words ``W`` to the same sum of trees ``l[W]``."""
    return X.map_keys(left_bracketing)


class JacobiConstraint(NamedTuple):
    """``U_{Q l[R]} + U_{R l[Q]} = 0`` written as two sums of left-nested trees."""

    Q: Word
    R: Word
    first: FormalSum
    second: FormalSum

    def trees(self) -> FormalSum:
        return self.first + self.second


def _prefixed(Q: Word, R: Word) -> FormalSum:
    # Q l[R] expanded as words, then each word W relabelled by l[W]
    out = FormalSum()
    for w, c in _word_expand(left_bracketing(R)):
        out.add_term(left_bracketing(Q + w), c)
    return out


def gen_jacobi_constraints(k: int, alphabet: Iterable[int]) -> List[JacobiConstraint]:
    """Every generalized Jacobi constraint of order ``k`` over distinct letters."""
    if k < 2:
        raise ValueError("constraint order must be at least 2")
    letters = sorted(set(alphabet))
    out = []
    seen = set()
    for subset in itertools.combinations(letters, k):
        for perm in itertools.permutations(subset):
            for cut in range(1, k):
                Q, R = perm[:cut], perm[cut:]
                if (R, Q) in seen:
                    continue
                seen.add((Q, R))
                out.append(JacobiConstraint(Q, R, _prefixed(Q, R), _prefixed(R, Q)))
    return out


# serialization ------------------------------------------------------------

def word_to_str(P: Sequence[int]) -> str:
    if all(0 < p <= 9 for p in P):
        return "".join(str(p) for p in P)
    return ",".join(str(p) for p in P)


def word_from_str(s: str) -> Word:
    s = s.strip()
    if s in ("", "-", "0", "e", "empty"):
        return ()
    if "," in s:
        out = tuple(int(x) for x in s.split(","))
    else:
        out = tuple(int(c) for c in s)
    if any(p < 1 for p in out):
        raise ValueError(f"letters must be positive: {s!r}")
    return out


def tree_to_str(t: Tree) -> str:
    if isinstance(t, Node):
        return f"[{tree_to_str(t.left)},{tree_to_str(t.right)}]"
    return str(t)


def tree_from_str(s: str) -> Tree:
    s = s.replace(" ", "")
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if s[pos] == "[":
            pos += 1
            left = parse()
            if s[pos] != ",":
                raise ValueError(f"expected ',' at {pos} in {s!r}")
            pos += 1
            right = parse()
            if s[pos] != "]":
                raise ValueError(f"expected ']' at {pos} in {s!r}")
            pos += 1
            return Node(left, right)
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"bad tree {s!r}")
        return int(s[start:pos])

    try:
        t = parse()
    except IndexError:
        raise ValueError(f"truncated tree {s!r}") from None
    if pos != len(s):
        raise ValueError(f"trailing input in tree {s!r}")
    return t


def formal_sum_to_json(x: FormalSum, coeff_fmt: Callable = str) -> list:
    out = []
    for key, coeff in x.items():
        term = tree_to_str(key) if isinstance(key, (Node, int)) else word_to_str(key)
        out.append({"term": term, "coeff": coeff_fmt(coeff)})
    return out
