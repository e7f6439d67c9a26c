"""Colour Lie algebras, tilded brackets and nested colour factors.

Adjoint indices are 1-based in the public API (``f(1, 2, 3)`` is
``f_{12}^3``) and 0-based inside colour vectors, which are plain tuples of
length ``dim``.  All brackets use the rescaled constants ``-2i f``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .report import Report
from .scalars import EXACT, FLOAT, Field, format_scalar, parse_scalar
from .words import Node, Tree, check_distinct, gen_jacobi_constraints, tree_letters, word_to_str

ColourVector = Tuple[object, ...]


@dataclass(frozen=True)
class StructureConstants:
    """``f[a][b][c] = f_{ab}^c`` with 0-based storage."""

    dim: int
    f: Tuple[Tuple[Tuple[object, ...], ...], ...]
    name: str = "custom"
    field: Field = EXACT
    _sparse: Dict = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        conv = self.field.convert
        f = tuple(tuple(tuple(conv(x) for x in row) for row in plane) for plane in self.f)
        d = self.dim
        if len(f) != d or any(len(r) != d or any(len(c) != d for c in r) for r in f):
            raise ValueError(f"structure constants must be {d}x{d}x{d}")
        object.__setattr__(self, "f", f)
        # tilded constants grouped by (b, c): list of (a, -2i f_bc^a)
        tilde = -2 * self.field.i
        sparse = {}
        for b in range(d):
            for c in range(d):
                entries = [(a, tilde * f[b][c][a]) for a in range(d) if f[b][c][a]]
                if entries:
                    sparse[(b, c)] = entries
        self._sparse.update(sparse)

    def __call__(self, a: int, b: int, c: int):
        """``f_{ab}^c`` with 1-based indices."""
        return self.f[a - 1][b - 1][c - 1]

    def tilde_entries(self):
        return self._sparse.items()

    def to_float(self) -> "StructureConstants":
        if not self.field.exact:
            return self
        f = tuple(tuple(tuple(complex(x) for x in row) for row in plane) for plane in self.f)
        return StructureConstants(self.dim, f, self.name, FLOAT)

    def zero_vector(self) -> ColourVector:
        return (self.field.zero,) * self.dim

    def basis(self, a: int) -> ColourVector:
        if not 1 <= a <= self.dim:
            raise ValueError(f"colour index {a} outside 1..{self.dim}")
        z, o = self.field.zero, self.field.one
        return tuple(o if i == a - 1 else z for i in range(self.dim))


def _levi_civita(a: int, b: int, c: int) -> int:
    if len({a, b, c}) < 3:
        return 0
    perm = (a, b, c)
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def builtin_su2(field: Field = EXACT) -> StructureConstants:
    f = [[[_levi_civita(a, b, c) for c in range(3)] for b in range(3)] for a in range(3)]
    sc = StructureConstants(3, f, "su2", EXACT)
    return sc if field.exact else sc.to_float()


def builtin_su3() -> StructureConstants:
    """Gell-Mann structure constants; irrational, so float mode only."""
    r3 = 3 ** 0.5 / 2
    values = {
        (1, 2, 3): 1.0,
        (1, 4, 7): 0.5, (1, 6, 5): 0.5, (2, 4, 6): 0.5, (2, 5, 7): 0.5,
        (3, 4, 5): 0.5, (3, 7, 6): 0.5,
        (4, 5, 8): r3, (6, 7, 8): r3,
    }
    f = [[[0j] * 8 for _ in range(8)] for _ in range(8)]
    for (a, b, c), v in values.items():
        for (x, y, z), sign in _signed_perms(a, b, c):
            f[x - 1][y - 1][z - 1] = complex(sign * v)
    return StructureConstants(8, f, "su3", FLOAT)


def _signed_perms(a, b, c):
    base = (a, b, c)
    for perm in itertools.permutations(range(3)):
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
        yield tuple(base[i] for i in perm), (-1) ** inversions


def abelian(dim: int = 1, field: Field = EXACT) -> StructureConstants:
    f = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    sc = StructureConstants(dim, f, f"u1^{dim}", EXACT)
    return sc if field.exact else sc.to_float()


# random algebra -------------------------------------------------------------

def _mat_inverse(M: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col]), None)
        if pivot is None:
            return None
        A[col], A[pivot] = A[pivot], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                factor = A[r][col]
                A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def random_algebra(seed: int = 0, bound: int = 3) -> StructureConstants:
    """su(2) + aff(1) (dim 5) in a random rational basis.

    The direct sum is non-semisimple, so its structure constants are not
    totally antisymmetric, which exercises index placement in contractions.
    """
    d = 5
    base = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for a, b, c in itertools.product(range(3), repeat=3):
        base[a][b][c] = Fraction(_levi_civita(a, b, c))
    base[3][4][4] = Fraction(1)
    base[4][3][4] = Fraction(-1)
    rng = random.Random(seed)
    while True:
        M = [[Fraction(rng.randint(-bound, bound), rng.randint(1, 2)) for _ in range(d)] for _ in range(d)]
        Minv = _mat_inverse(M)
        if Minv is not None:
            break
    # [E_i, E_j] = M_ik M_jl f_kl^m e_m and e_m = Minv_mr E_r
    f = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i, j in itertools.product(range(d), repeat=2):
        coeff_e = [Fraction(0)] * d
        for k, l in itertools.product(range(d), repeat=2):
            w = M[i][k] * M[j][l]
            if not w:
                continue
            for m in range(d):
                if base[k][l][m]:
                    coeff_e[m] += w * base[k][l][m]
        for r in range(d):
            f[i][j][r] = sum((coeff_e[m] * Minv[m][r] for m in range(d)), Fraction(0))
    return StructureConstants(d, f, f"su2+aff1(seed={seed})", EXACT)


# checks and contractions ----------------------------------------------------

def validate_jacobi(sc: StructureConstants) -> Report:
    """Antisymmetry and Jacobi, reporting the first violating index tuple of each."""
    rep = Report("jacobi-colour-algebra")
    d, f, fld = sc.dim, sc.f, sc.field
    for a, b, c in itertools.product(range(d), repeat=3):
        if not fld.is_zero(f[a][b][c] + f[b][a][c]):
            rep.fail(f"antisymmetry violated at (a,b,c)=({a + 1},{b + 1},{c + 1})")
            rep.details["antisymmetry_violation"] = (a + 1, b + 1, c + 1)
            break
    for a, b, c, e in itertools.product(range(d), repeat=4):
        total = fld.zero
        for m in range(d):
            total = total + f[a][b][m] * f[m][c][e] + f[b][c][m] * f[m][a][e] + f[c][a][m] * f[m][b][e]
        if not rep.check(fld.is_zero(total), f"Jacobi violated at (a,b,c,d)=({a + 1},{b + 1},{c + 1},{e + 1})"):
            rep.details["jacobi_violation"] = (a + 1, b + 1, c + 1, e + 1)
            break
    return rep


def colour_bracket(sc: StructureConstants, x: ColourVector, y: ColourVector) -> ColourVector:
    """``z^a = ftilde_{bc}^a x^b y^c``."""
    out = list(sc.zero_vector())
    for (b, c), entries in sc.tilde_entries():
        xb = x[b]
        if not xb:
            continue
        yc = y[c]
        if not yc:
            continue
        w = xb * yc
        for a, ft in entries:
            out[a] = out[a] + ft * w
    return tuple(out)


Assignment = Union[Mapping[int, int], Callable[[int], int]]


def _lookup(assignment: Assignment, p: int) -> int:
    try:
        return assignment(p) if callable(assignment) else assignment[p]
    except (KeyError, IndexError):
        raise KeyError(f"letter {p} has no colour assignment") from None


def colour_factor(sc: StructureConstants, assignment: Assignment, t: Tree) -> ColourVector:
    """Nested tilded contraction of a bracket tree; leaves give basis vectors."""
    check_distinct(tree_letters(t))
    return _colour_factor(sc, assignment, t)


def _colour_factor(sc, assignment, t):
    if isinstance(t, Node):
        return colour_bracket(sc, _colour_factor(sc, assignment, t.left), _colour_factor(sc, assignment, t.right))
    return sc.basis(_lookup(assignment, t))


def colour_factor_chain(sc: StructureConstants, assignment: Assignment, P: Sequence[int]) -> ColourVector:
    """Left-nested factor of ``P`` by an explicit index loop (no recursion, no sparse table)."""
    d = sc.dim
    tilde = -2 * sc.field.i
    current = list(sc.basis(_lookup(assignment, P[0])))
    for p in P[1:]:
        c = _lookup(assignment, p) - 1
        nxt = [sc.field.zero] * d
        for a in range(d):
            total = sc.field.zero
            for b in range(d):
                total = total + tilde * sc.f[b][c][a] * current[b]
            nxt[a] = total
        current = nxt
    return tuple(current)


def check_gen_jacobi_colour(sc: StructureConstants, assignment: Assignment, k: int, letters) -> Report:
    """Every order-``k`` generalized Jacobi constraint on nested colour factors."""
    rep = Report(f"jacobi-colour k={k}")
    cache: dict = {}

    def factor(t):
        hit = cache.get(t)
        if hit is None:
            if isinstance(t, Node):
                hit = colour_bracket(sc, factor(t.left), factor(t.right))
            else:
                hit = sc.basis(_lookup(assignment, t))
            cache[t] = hit
        return hit

    fld = sc.field
    for con in gen_jacobi_constraints(k, letters):
        total = [fld.zero] * sc.dim
        for t, c in con.trees().items():
            for a, x in enumerate(factor(t)):
                if x:
                    total[a] = total[a] + c * x
        rep.check(
            all(fld.is_zero(x) for x in total),
            f"colour factors violate U_(Q l[R]) + U_(R l[Q]) = 0 for Q={word_to_str(con.Q)}, R={word_to_str(con.R)}",
        )
    return rep


# JSON -----------------------------------------------------------------------

def sc_to_json(sc: StructureConstants) -> dict:
    return {
        "dim": sc.dim,
        "name": sc.name,
        "f": [[[format_scalar(x) for x in row] for row in plane] for plane in sc.f],
    }


def sc_from_json(data: dict, field: Field = EXACT) -> StructureConstants:
    d = int(data["dim"])
    if field.exact:
        f = [[[parse_scalar(x) for x in row] for row in plane] for plane in data["f"]]
    else:
        f = [[[complex(x) if isinstance(x, (int, float)) else complex(parse_scalar(x)) for x in row] for row in plane] for plane in data["f"]]
    return StructureConstants(d, f, data.get("name", "custom"), field)
