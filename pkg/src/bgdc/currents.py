"""Berends-Giele currents for the five theories.

Theories and value shapes:

* ``cs``     colour-stripped vector currents, a 3-vector per word
* ``cd``     colour-dressed currents, ``value[a][i]`` (adjoint index 0-based)
* ``dc``     double-copy tensor currents, ``value[ibar][i]``
* ``zc``     zeroth-copy bi-adjoint currents, ``value[a][abar]``
* ``double`` double currents ``u_{P|Q}``, a scalar per word pair

``direct`` mode runs the recursions over sub-words; ``factorized`` mode
evaluates a Berends-Giele tree map and replaces every tree by the product of
its numerators or colour factors.  The two paths share only the leaf data.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from . import numerators as _num
from .colour import StructureConstants, builtin_su2, colour_bracket
from .kinematics import KinConfig, dot
from .scalars import Field
from .words import (
    FormalSum,
    Node,
    Tree,
    Word,
    as_word,
    check_distinct,
    deconcatenations,
    ordered_partitions,
    shuffle,
    word_expand,
    word_inner,
    word_to_str,
)

THEORIES = ("cs", "cd", "dc", "zc")
ORDERED_THEORIES = ("cd", "dc", "zc")
MODES = ("direct", "factorized")

# per-vertex constant multiplying the coupling in factorized mode
RHO = {"cs": (1, 1), "cd": (1, 1), "dc": (1, 2), "zc": (1, 2), "double": (1, 1)}


class MissingEntry(KeyError):
    """A current needed by the residual check is absent from the table."""


class ModeMismatch(AssertionError):
    """Direct and factorized evaluations disagree."""


# value helpers --------------------------------------------------------------

def flatten(value) -> List:
    if isinstance(value, tuple):
        out = []
        for x in value:
            out.extend(flatten(x))
        return out
    return [value]


def magnitude(value) -> float:
    """Largest absolute entry, used as the scale for float-mode zero tests."""
    return max((abs(x) for x in flatten(value)), default=0.0)


def value_is_zero(value, field: Field, scale: float = 1.0) -> bool:
    flat = flatten(value)
    if field.exact:
        return not any(flat)
    return all(field.is_zero(x, scale) for x in flat)


def values_equal(a, b, field: Field) -> bool:
    fa, fb = flatten(a), flatten(b)
    if len(fa) != len(fb):
        return False
    if field.exact:
        return fa == fb
    scale = max([abs(x) for x in fa + fb] + [1e-300])
    return all(abs(x - y) <= field.atol + field.rtol * scale for x, y in zip(fa, fb))


def _zero_like(value, field: Field):
    if isinstance(value, tuple):
        return tuple(_zero_like(x, field) for x in value)
    return field.zero


def _axpy(acc: list, c, v) -> None:
    for i, x in enumerate(v):
        if x:
            acc[i] = acc[i] + c * x


def _matrix(rows: List[list]) -> tuple:
    return tuple(tuple(r) for r in rows)


# Berends-Giele tree maps ----------------------------------------------------

class BGMaps:
    """Memoized tree maps ``b_cs`` (deconcatenations) and ``b_cd`` (set partitions)."""

    def __init__(self, cfg: KinConfig):
        self.cfg = cfg
        self._cache: Dict[Tuple[str, Word], FormalSum] = {}

    def __call__(self, P: Sequence[int], variant: str) -> FormalSum:
        P = tuple(P)
        key = (variant, P)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if len(P) == 1:
            out = FormalSum.single(P[0], self.cfg.field.one)
        else:
            if variant == "cs":
                splits = deconcatenations(P)
            elif variant == "cd":
                splits = ordered_partitions(P, unordered=True)
            else:
                raise ValueError(f"unknown tree map {variant!r}")
            inv = self.cfg.inv_s(P)
            out = FormalSum()
            for Q, R in splits:
                left = self(Q, variant)
                right = self(R, variant)
                for tl, cl in left.items():
                    for tr, cr in right.items():
                        out.add_term(Node(tl, tr), cl * cr * inv)
        self._cache[key] = out
        return out


def bg_map(P, variant: str, cfg: KinConfig) -> FormalSum:
    """Tree map of ``P``: ``cs`` over deconcatenations, ``cd`` over set partitions."""
    P = as_word(P)
    check_distinct(P)
    return BGMaps(cfg)(P, variant)


# tables -----------------------------------------------------------------------

class CurrentTable:
    """Lazily filled map from words (or word pairs) to current values."""

    def __init__(
        self,
        cfg: KinConfig,
        theory: str,
        mode: str = "direct",
        sc: Optional[StructureConstants] = None,
        sc_bar: Optional[StructureConstants] = None,
    ):
        if theory not in THEORIES + ("double",):
            raise ValueError(f"unknown theory {theory!r}")
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.cfg = cfg
        self.theory = theory
        self.mode = mode
        self.field = cfg.field
        self.sc = _match_field(sc, cfg) if theory in ("cd", "zc") else sc
        self.sc_bar = _match_field(sc_bar or sc, cfg) if theory == "zc" else sc_bar
        self.entries: Dict = {}
        self._maps = BGMaps(cfg)
        self._tree_cache: Dict = {}
        self._tree_cache_bar: Dict = {}
        self._expanded: Dict[Word, FormalSum] = {}

    # public ---------------------------------------------------------------
    def __getitem__(self, key):
        return self.get(key)

    def get(self, P, Q=None):
        if self.theory == "double":
            if Q is None:
                P, Q = P
            key = (as_word(P), as_word(Q))
        else:
            key = as_word(P)
        hit = self.entries.get(key)
        if hit is not None:
            return hit
        self._check_shape(key)
        value = self._compute(key)
        self.entries[key] = value
        return value

    def populate(self, P, Q=None):
        """Fill every sub-word entry the recursion at ``P`` reads."""
        if self.theory == "double":
            if Q is None:
                P, Q = P
            P, Q = as_word(P), as_word(Q)
            if (P, Q) in self.entries:
                return
            for R, S in _sub_pairs(P):
                for T, U in _sub_pairs(Q):
                    for a in (R, S):
                        for b in (T, U):
                            self.populate(a, b)
            self.get(P, Q)
            return
        P = as_word(P)
        if P in self.entries:
            return
        for Q_, R_ in self._splits(P):
            self.populate(Q_)
            self.populate(R_)
        self.get(P)

    # internals ------------------------------------------------------------
    def _check_shape(self, key):
        words = key if self.theory == "double" else (key,)
        for w in words:
            if not w:
                raise ValueError("currents are labelled by non-empty words")
            check_distinct(w)
            if self.theory in ORDERED_THEORIES and any(a >= b for a, b in zip(w, w[1:])):
                raise ValueError(f"theory {self.theory} needs an increasing word, got {word_to_str(w)}")
            for p in w:
                self.cfg.particle(p)

    def _splits(self, P: Word):
        if self.theory == "cs":
            return deconcatenations(P)
        return ordered_partitions(P)

    def _compute(self, key):
        if self.theory == "double":
            P, Q = key
            if sorted(P) != sorted(Q):
                return self.field.zero
            if len(P) == 1:
                return self.field.one
            return self._double_direct(P, Q) if self.mode == "direct" else self._double_factorized(P, Q)
        P = key
        if len(P) == 1:
            return self._seed(P[0])
        if self.mode == "direct":
            return getattr(self, f"_{self.theory}_direct")(P)
        return self._factorized(P)

    def _seed(self, p: int):
        part = self.cfg.particle(p)
        if self.theory == "cs":
            return part.eps
        if self.theory == "cd":
            col = self.sc.basis(part.colour)
            return tuple(tuple(c * x for x in part.eps) for c in col)
        if self.theory == "dc":
            return tuple(tuple(b * x for x in part.eps) for b in part.eps_bar)
        col = self.sc.basis(part.colour)
        colb = self.sc_bar.basis(part.colour_bar)
        return tuple(tuple(c * cb for cb in colb) for c in col)

    # direct recursions ----------------------------------------------------
    def _cs_direct(self, P: Word):
        cfg = self.cfg
        acc = [self.field.zero] * 3
        for Q, R in deconcatenations(P):
            uQ, uR = self.get(Q), self.get(R)
            kQ, kR = cfg.momentum(Q), cfg.momentum(R)
            _axpy(acc, dot(uQ, kR), uR)
            _axpy(acc, -dot(uR, kQ), uQ)
        c = cfg.lam * cfg.inv_s(P)
        return tuple(c * x for x in acc)

    def _cd_direct(self, P: Word):
        cfg = self.cfg
        d = self.sc.dim
        acc = [[self.field.zero] * 3 for _ in range(d)]
        half = self.field.frac(1, 2)
        for Q, R in ordered_partitions(P):
            uQ, uR = self.get(Q), self.get(R)
            kQ, kR = cfg.momentum(Q), cfg.momentum(R)
            for (b, c), entries in self.sc.tilde_entries():
                x, y = uQ[b], uR[c]
                xk, yk = dot(x, kR), dot(y, kQ)
                if not xk and not yk:
                    continue
                for a, ft in entries:
                    w = half * ft
                    _axpy(acc[a], w * xk, y)
                    _axpy(acc[a], -w * yk, x)
        coeff = cfg.lam * cfg.inv_s(P)
        return tuple(tuple(coeff * v for v in row) for row in acc)

    def _dc_direct(self, P: Word):
        cfg = self.cfg
        half = self.field.frac(1, 2)
        acc = [[self.field.zero] * 3 for _ in range(3)]
        for Q, R in ordered_partitions(P):
            MQ, MR = self.get(Q), self.get(R)
            kQ, kR = cfg.momentum(Q), cfg.momentum(R)
            # (kR^T MQ kR) MR - (MR kQ) (x) (kR^T MQ)
            MQkR = [dot(row, kR) for row in MQ]
            scal = dot(kR, MQkR)
            MRkQ = [dot(row, kQ) for row in MR]
            kRMQ = [sum((kR[jb] * MQ[jb][i] for jb in range(3)), self.field.zero) for i in range(3)]
            for ib in range(3):
                for i in range(3):
                    acc[ib][i] = acc[ib][i] + half * (scal * MR[ib][i] - MRkQ[ib] * kRMQ[i])
        coeff = cfg.kappa * cfg.inv_s(P)
        return _matrix([[coeff * x for x in row] for row in acc])

    def _zc_direct(self, P: Word):
        cfg = self.cfg
        d, db = self.sc.dim, self.sc_bar.dim
        quarter = self.field.frac(1, 4)
        acc = [[self.field.zero] * db for _ in range(d)]
        bar_entries = list(self.sc_bar.tilde_entries())
        for Q, R in ordered_partitions(P):
            uQ, uR = self.get(Q), self.get(R)
            for (b, c), entries in self.sc.tilde_entries():
                for (bb, cb), entries_bar in bar_entries:
                    w = uQ[b][bb] * uR[c][cb]
                    if not w:
                        continue
                    w = quarter * w
                    for a, ft in entries:
                        for ab, ftb in entries_bar:
                            acc[a][ab] = acc[a][ab] + ft * ftb * w
        coeff = cfg.gamma * cfg.inv_s(P)
        return _matrix([[coeff * x for x in row] for row in acc])

    def _double_direct(self, P: Word, Q: Word):
        acc = self.field.zero
        for R, S in deconcatenations(P):
            for T, U in deconcatenations(Q):
                acc = acc + self.get(R, T) * self.get(S, U) - self.get(S, T) * self.get(R, U)
        return self.cfg.gamma * self.cfg.inv_s(P) * acc

    # factorized -----------------------------------------------------------
    def vertex_constant(self):
        """Coupling times the per-vertex constant for this theory."""
        cfg = self.cfg
        num, den = RHO[self.theory]
        coupling = {"cs": cfg.lam, "cd": cfg.lam, "dc": cfg.kappa, "zc": cfg.gamma, "double": cfg.gamma}[self.theory]
        return coupling * self.field.frac(num, den)

    def _kin(self, t: Tree, barred: bool):
        cache = self._tree_cache_bar if barred else self._tree_cache
        hit = cache.get(t)
        if hit is None:
            if isinstance(t, Node):
                hit = _num.kin_bracket(self._kin(t.left, barred), self._kin(t.right, barred))
            else:
                hit = _num.leaf(self.cfg, t, barred)
            cache[t] = hit
        return hit

    def _col(self, t: Tree, barred: bool):
        cache = self._tree_cache_bar if barred else self._tree_cache
        hit = cache.get(("c", t))
        if hit is None:
            sc = self.sc_bar if barred else self.sc
            if isinstance(t, Node):
                hit = colour_bracket(sc, self._col(t.left, barred), self._col(t.right, barred))
            else:
                part = self.cfg.particle(t)
                hit = sc.basis(part.colour_bar if barred else part.colour)
            cache[("c", t)] = hit
        return hit

    def unnormalized(self, P: Word):
        """Replacement applied to the tree map, without coupling factors."""
        f = self.field
        if self.theory == "cs":
            acc = [f.zero] * 3
            for t, c in self._maps(P, "cs").items():
                _axpy(acc, c, self._kin(t, False).cov)
            return tuple(acc)
        trees = self._maps(P, "cd")
        if self.theory == "cd":
            acc = [[f.zero] * 3 for _ in range(self.sc.dim)]
            for t, c in trees.items():
                eps = self._kin(t, False).cov
                for a, ca in enumerate(self._col(t, False)):
                    if ca:
                        _axpy(acc[a], c * ca, eps)
            return _matrix(acc)
        if self.theory == "dc":
            acc = [[f.zero] * 3 for _ in range(3)]
            for t, c in trees.items():
                eps = self._kin(t, False).cov
                for ib, eb in enumerate(self._kin(t, True).cov):
                    if eb:
                        _axpy(acc[ib], c * eb, eps)
            return _matrix(acc)
        acc = [[f.zero] * self.sc_bar.dim for _ in range(self.sc.dim)]
        for t, c in trees.items():
            cb = self._col(t, True)
            for a, ca in enumerate(self._col(t, False)):
                if ca:
                    _axpy(acc[a], c * ca, cb)
        return _matrix(acc)

    def _factorized(self, P: Word):
        g = self.vertex_constant() ** (len(P) - 1)
        return _scale(g, self.unnormalized(P))

    def _double_factorized(self, P: Word, Q: Word):
        words = self._expanded.get(Q)
        if words is None:
            words = self._expanded[Q] = word_expand(self._maps(Q, "cs"))
        g = self.vertex_constant() ** (len(P) - 1)
        return g * word_inner(FormalSum.single(P, self.field.one), words)


def _scale(c, value):
    if isinstance(value, tuple):
        return tuple(_scale(c, x) for x in value)
    return c * value


def _sub_pairs(P: Word):
    return deconcatenations(P)


def _match_field(sc: Optional[StructureConstants], cfg: KinConfig) -> StructureConstants:
    if sc is None:
        sc = builtin_su2(cfg.field)
    if cfg.field.exact and not sc.field.exact:
        raise ValueError(f"algebra {sc.name} is float-only; use float mode")
    if not cfg.field.exact and sc.field.exact:
        sc = sc.to_float()
    return sc


# module-level operations --------------------------------------------------------

def current(cfg: KinConfig, P, theory: str = "cs", mode: str = "direct", sc=None, sc_bar=None):
    """Single current value; see :class:`CurrentTable` for shapes."""
    return CurrentTable(cfg, theory, mode, sc, sc_bar).get(P)


def double_current(cfg: KinConfig, P, Q, mode: str = "direct"):
    return CurrentTable(cfg, "double", mode).get(as_word(P), as_word(Q))


def cross_check(cfg: KinConfig, P, theory: str, sc=None, sc_bar=None, Q=None):
    """Evaluate both modes and raise :class:`ModeMismatch` unless they agree."""
    if theory == "double":
        d = double_current(cfg, P, Q, "direct")
        fz = double_current(cfg, P, Q, "factorized")
    else:
        d = current(cfg, P, theory, "direct", sc, sc_bar)
        fz = current(cfg, P, theory, "factorized", sc, sc_bar)
    if not values_equal(d, fz, cfg.field):
        raise ModeMismatch(f"{theory} current {word_to_str(as_word(P))}: direct {d} != factorized {fz}")
    return d


# residuals --------------------------------------------------------------------

def _entry(table: CurrentTable, key):
    try:
        return table.entries[key]
    except KeyError:
        if isinstance(key, tuple) and key and isinstance(key[0], tuple):
            name = "|".join(word_to_str(w) for w in key)
        else:
            name = word_to_str(key)
        raise MissingEntry(f"table has no entry for {name}") from None


def _vertex_cs(table, P):
    cfg, f = table.cfg, table.field
    out = []
    splits = [(Q, R, _entry(table, Q), _entry(table, R), cfg.momentum(Q), cfg.momentum(R)) for Q, R in deconcatenations(P)]
    for i in range(3):
        total = f.zero
        for Q, R, uQ, uR, kQ, kR in splits:
            for j in range(3):
                total = total + uQ[j] * kR[j] * uR[i] - uR[j] * kQ[j] * uQ[i]
        out.append(cfg.lam * total)
    return tuple(out)


def _vertex_cd(table, P):
    cfg, f, sc = table.cfg, table.field, table.sc
    d = sc.dim
    ft = -2 * f.i
    out = [[f.zero] * 3 for _ in range(d)]
    for Q, R in ordered_partitions(P):
        uQ, uR = _entry(table, Q), _entry(table, R)
        kQ, kR = cfg.momentum(Q), cfg.momentum(R)
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    fbc = sc.f[b][c][a]
                    if not fbc:
                        continue
                    for i in range(3):
                        s = f.zero
                        for j in range(3):
                            s = s + uQ[b][j] * kR[j] * uR[c][i] - uR[c][j] * kQ[j] * uQ[b][i]
                        out[a][i] = out[a][i] + ft * fbc * s / 2
    return _matrix([[cfg.lam * x for x in row] for row in out])


def _vertex_dc(table, P):
    cfg, f = table.cfg, table.field
    out = [[f.zero] * 3 for _ in range(3)]
    for Q, R in ordered_partitions(P):
        uQ, uR = _entry(table, Q), _entry(table, R)
        kQ, kR = cfg.momentum(Q), cfg.momentum(R)
        for ib in range(3):
            for i in range(3):
                s = f.zero
                for jb in range(3):
                    for j in range(3):
                        s = s + uQ[jb][j] * kR[jb] * kR[j] * uR[ib][i] - kR[jb] * uR[ib][j] * kQ[j] * uQ[jb][i]
                out[ib][i] = out[ib][i] + s / 2
    return _matrix([[cfg.kappa * x for x in row] for row in out])


def _vertex_zc(table, P):
    cfg, f = table.cfg, table.field
    A, B = table.sc, table.sc_bar
    ft = -2 * f.i
    out = [[f.zero] * B.dim for _ in range(A.dim)]
    for Q, R in ordered_partitions(P):
        uQ, uR = _entry(table, Q), _entry(table, R)
        for b in range(A.dim):
            for bb in range(B.dim):
                if not uQ[b][bb]:
                    continue
                for c in range(A.dim):
                    for cb in range(B.dim):
                        w = uQ[b][bb] * uR[c][cb]
                        if not w:
                            continue
                        for a in range(A.dim):
                            if not A.f[b][c][a]:
                                continue
                            for ab in range(B.dim):
                                if B.f[bb][cb][ab]:
                                    out[a][ab] = out[a][ab] + ft * A.f[b][c][a] * ft * B.f[bb][cb][ab] * w / 4
    return _matrix([[cfg.gamma * x for x in row] for row in out])


def _vertex_double(table, key):
    P, Q = key
    f = table.field
    total = f.zero
    if sorted(P) != sorted(Q):
        return total
    for R, S in deconcatenations(P):
        for T, U in deconcatenations(Q):
            total = total + _entry(table, (R, T)) * _entry(table, (S, U)) - _entry(table, (S, T)) * _entry(table, (R, U))
    return table.cfg.gamma * total


_VERTICES = {"cs": _vertex_cs, "cd": _vertex_cd, "dc": _vertex_dc, "zc": _vertex_zc}


def mc_residual(table: CurrentTable, P, Q=None):
    """``s_P u_P - vertex(P)`` evaluated from the stored entries only."""
    cfg = table.cfg
    if table.theory == "double":
        if Q is None:
            P, Q = P
        key = (as_word(P), as_word(Q))
        u = _entry(table, key)
        if len(key[0]) == 1:
            return table.field.zero
        return cfg.s(key[0]) * u - _vertex_double(table, key)
    P = as_word(P)
    u = _entry(table, P)
    if len(P) == 1:
        return _zero_like(u, table.field)
    s = cfg.s(P)
    vertex = _VERTICES[table.theory](table, P)
    lhs, rhs = flatten(_scale(s, u)), flatten(vertex)
    shaped = [x - y for x, y in zip(lhs, rhs)]
    return _reshape(shaped, u)


def _reshape(flat: list, like):
    it = iter(flat)

    def build(v):
        if isinstance(v, tuple):
            return tuple(build(x) for x in v)
        return next(it)

    return build(like)


def transversality_check(table: CurrentTable, P):
    """``u_P . k_P`` for cs, or one such product per colour for cd."""
    P = as_word(P)
    kP = table.cfg.momentum(P)
    u = table.get(P)
    if table.theory == "cs":
        return dot(u, kP)
    if table.theory == "cd":
        return tuple(dot(row, kP) for row in u)
    raise ValueError("transversality applies to cs and cd currents")


def shuffle_check(table: CurrentTable, P, Q, R=None, slot: int = 1):
    """Sum of currents over the shuffle of ``P`` and ``Q``.

    For double currents the shuffle fills slot 1 or 2 and ``R`` is the
    other slot.
    """
    P, Q = as_word(P), as_word(Q)
    terms = shuffle(P, Q)
    if table.theory == "double":
        R = as_word(R)
        total = table.field.zero
        for w, c in terms.items():
            total = total + c * (table.get(w, R) if slot == 1 else table.get(R, w))
        return total
    if table.theory != "cs":
        raise ValueError("shuffle constraints apply to cs and double currents")
    acc = [table.field.zero] * 3
    for w, c in terms.items():
        _axpy(acc, c, table.get(w))
    return tuple(acc)
