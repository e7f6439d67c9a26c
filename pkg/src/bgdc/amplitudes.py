"""Partial, full and tensor amplitudes, the momentum kernel and KLT sums.

Amplitudes need momentum-conserving configurations; particle ``n`` is the
amputated leg and ``1`` is the anchor of every half-ladder basis.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .colour import StructureConstants, colour_factor, random_algebra
from .currents import CurrentTable, flatten, values_equal
from .kinematics import KinConfig, dot, k3_fixture, random_kinematics
from .numerators import numerator
from .report import Report
from .scalars import GaussianRational
from .words import Word, as_word, left_bracketing, shuffle, transpose, word_to_str


class PathMismatch(AssertionError):
    """Two evaluations of the same amplitude disagree."""


def _require_conservation(cfg: KinConfig) -> None:
    if not cfg.conserve_momentum:
        raise ValueError("amplitudes need a momentum-conserving configuration")


def barred(cfg: KinConfig) -> KinConfig:
    """Same kinematics with the barred polarizations moved into the unbarred slot."""
    parts = tuple(replace(p, eps=p.eps_bar) for p in cfg.particles)
    return replace(cfg, particles=parts, _s_cache={})


def basis_orderings(n: int) -> List[Word]:
    """Permutations ``P`` of ``2..n-1`` labelling the half-ladder basis."""
    return [tuple(p) for p in itertools.permutations(range(2, n))]


# partial amplitudes -----------------------------------------------------------

class PartialAmplitudes:
    """Colour-ordered amplitudes ``A(W n)`` sharing one current table."""

    def __init__(self, cfg: KinConfig, table: Optional[CurrentTable] = None):
        _require_conservation(cfg)
        self.cfg = cfg
        self.table = table or CurrentTable(cfg, "cs")
        n = cfg.n
        top = tuple(range(1, n))
        self._s = cfg.s(top)
        cfg.inv_s(top)
        self._eps_n = cfg.particle(n).eps

    def __call__(self, ordering) -> object:
        W = as_word(ordering)
        n = self.cfg.n
        if W and W[-1] == n:
            W = W[:-1]
        if sorted(W) != list(range(1, n)):
            raise ValueError(f"ordering must be a permutation of 1..{n - 1} followed by {n}")
        return self._s * dot(self.table.get(W), self._eps_n)


def partial_amplitude(cfg: KinConfig, ordering) -> object:
    """``A(W n) = s_W u_W . eps_n`` for a permutation ``W`` of ``1..n-1``."""
    return PartialAmplitudes(cfg)(ordering)


def kleiss_kuijf_check(cfg: KinConfig, Q, R, amps: Optional[PartialAmplitudes] = None) -> Report:
    """``A(Q 1 R n) = (-1)^|Q| sum_{W in rev(Q) sh R} A(1 W n)``."""
    Q, R = as_word(Q), as_word(R)
    amps = amps or PartialAmplitudes(cfg)
    n = cfg.n
    lhs = amps(Q + (1,) + R + (n,))
    sign = -1 if len(Q) % 2 else 1
    rhs = cfg.field.zero
    for W, c in shuffle(transpose(Q), R).items():
        rhs = rhs + c * amps((1,) + W + (n,))
    rhs = sign * rhs
    rep = Report(f"kleiss-kuijf Q={word_to_str(Q)} R={word_to_str(R)}")
    rep.check(values_equal(lhs, rhs, cfg.field), f"A({word_to_str(Q + (1,) + R + (n,))}) = {lhs} != {rhs}")
    rep.details.update(lhs=lhs, rhs=rhs)
    return rep


def kleiss_kuijf_all(cfg: KinConfig) -> Report:
    """Every ordering of ``1..n-1`` against the half-ladder basis."""
    rep = Report(f"kleiss-kuijf n={cfg.n}")
    amps = PartialAmplitudes(cfg)
    for perm in itertools.permutations(range(1, cfg.n)):
        i = perm.index(1)
        rep.absorb(kleiss_kuijf_check(cfg, perm[:i], perm[i + 1 :], amps))
    return rep


# full colour-dressed amplitude --------------------------------------------------

def _i_half_power(cfg: KinConfig, m: int):
    return (cfg.field.i * cfg.field.frac(1, 2)) ** m


def full_amplitude_paths(cfg: KinConfig, sc: Optional[StructureConstants] = None) -> Tuple[object, object]:
    """(colour-dressed current path, colour-decomposition path)."""
    _require_conservation(cfg)
    n = cfg.n
    table = CurrentTable(cfg, "cd", "direct", sc)
    sc = table.sc
    a_n = cfg.particle(n).colour - 1
    top = tuple(range(1, n))
    norm = _i_half_power(cfg, n - 2)
    u = table.get(top)
    path_a = norm * cfg.s(top) * dot(u[a_n], cfg.particle(n).eps)
    amps = PartialAmplitudes(cfg)
    assign = lambda p: cfg.particle(p).colour
    total = cfg.field.zero
    for P in basis_orderings(n):
        c = colour_factor(sc, assign, left_bracketing((1,) + P))[a_n]
        if c:
            total = total + c * amps((1,) + P)
    return path_a, norm * total


def full_amplitude(cfg: KinConfig, sc: Optional[StructureConstants] = None) -> object:
    a, b = full_amplitude_paths(cfg, sc)
    if not values_equal(a, b, cfg.field):
        raise PathMismatch(f"colour-dressed path {a} != colour decomposition {b}")
    return a


# momentum kernel ------------------------------------------------------------------

class MomentumKernel:
    """Entries ``S(P|Q)_p`` over words sharing a letter set, anchored at ``p``."""

    def __init__(self, cfg: KinConfig, anchor: int = 1):
        self.cfg = cfg
        self.anchor = anchor
        self._dots: Dict[Tuple[int, int], object] = {}
        self.two_nu = 2 * cfg.nu

    def _dot(self, a: int, b: int):
        key = (a, b) if a <= b else (b, a)
        v = self._dots.get(key)
        if v is None:
            v = self._dots[key] = dot(self.cfg.k(a), self.cfg.k(b))
        return v

    def __call__(self, P, Q):
        P, Q = list(as_word(P)), list(as_word(Q))
        if sorted(P) != sorted(Q):
            raise ValueError("kernel entries need words over the same letters")
        value = self.cfg.field.one
        while P:
            q = P.pop()
            idx = Q.index(q)
            factor = self._dot(q, self.anchor)
            for r in Q[:idx]:
                factor = factor + self._dot(q, r)
            value = value * self.two_nu * factor
            if not value:
                return value
            del Q[idx]
        return value

    def matrix(self, words: Sequence[Word]) -> List[List[object]]:
        return [[self(P, Q) for Q in words] for P in words]


def momentum_kernel(cfg: KinConfig, n: Optional[int] = None, anchor: int = 1) -> Tuple[List[Word], List[List[object]]]:
    """Full kernel over permutations of ``2..n-1`` (letters other than the anchor)."""
    n = n or cfg.n
    letters = [p for p in range(1, n) if p != anchor]
    words = [tuple(w) for w in itertools.permutations(letters)]
    return words, MomentumKernel(cfg, anchor).matrix(words)


def _matmul(A, B, zero):
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a and b), zero) for col in cols] for row in A]


def kernel_inverse_check(cfg: KinConfig, n: Optional[int] = None, mode: str = "direct") -> Report:
    """Double currents and the kernel are inverse matrices; the kernel is symmetric."""
    n = n or cfg.n
    f = cfg.field
    words, S = momentum_kernel(cfg, n)
    table = CurrentTable(cfg, "double", mode)
    m = len(words[0]) if words else 0
    vertices = cfg.gamma ** m
    U = [[table.get((1,) + P, (1,) + R) / vertices for R in words] for P in words]
    rep = Report(f"kernel-inverse n={n}")
    for left, right, label in ((U, S, "u.S"), (S, U, "S.u")):
        prod = _matmul(left, right, f.zero)
        for i, row in enumerate(prod):
            for j, x in enumerate(row):
                target = f.one if i == j else f.zero
                rep.check(values_equal(x, target, f), f"{label}[{word_to_str(words[i])},{word_to_str(words[j])}] = {x}")
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            rep.check(values_equal(S[i][j], S[j][i], f), f"kernel asymmetric at {word_to_str(words[i])}|{word_to_str(words[j])}")
    rep.details["size"] = len(words)
    return rep


# tensor amplitudes ------------------------------------------------------------------

def master_numerator(cfg: KinConfig, P) -> object:
    """``eps_bar_{l[1P]} . eps_bar_n`` for ``P`` a word over ``2..n-1``."""
    P = as_word(P)
    word = P if P[:1] == (1,) else (1,) + P
    return dot(numerator(cfg, left_bracketing(word), barred=True).cov, cfg.particle(cfg.n).eps_bar)


def tensor_direct(cfg: KinConfig) -> object:
    _require_conservation(cfg)
    n = cfg.n
    top = tuple(range(1, n))
    M = CurrentTable(cfg, "dc").get(top)
    eb, e = cfg.particle(n).eps_bar, cfg.particle(n).eps
    total = cfg.field.zero
    for ib in range(3):
        for i in range(3):
            total = total + eb[ib] * M[ib][i] * e[i]
    return cfg.s(top) * total


def _tensor_prefactor(cfg: KinConfig, lam_power: int):
    m = cfg.n - 2
    return (cfg.kappa * cfg.field.frac(1, 2)) ** m / cfg.lam ** (lam_power * m)


def tensor_master_unsigned(cfg: KinConfig) -> object:
    amps = PartialAmplitudes(cfg)
    total = cfg.field.zero
    for P in basis_orderings(cfg.n):
        nb = master_numerator(cfg, P)
        if nb:
            total = total + nb * amps((1,) + P)
    return _tensor_prefactor(cfg, 1) * total


def _accurate_sum(terms: List[object], field) -> object:
    # float KLT sums cancel strongly, so they are summed with exact rounding
    if field.exact:
        return sum(terms, field.zero)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def tensor_klt_with_scale(cfg: KinConfig) -> Tuple[object, float]:
    """Unsigned KLT sum and the sum of absolute values of its terms.

    The ratio of the two is the condition number of the sum; float-mode
    comparisons measure their tolerance against the absolute scale.
    """
    n = cfg.n
    words = basis_orderings(n)
    amps = PartialAmplitudes(cfg)
    amps_bar = PartialAmplitudes(barred(cfg))
    A = [amps((1,) + Q) for Q in words]
    Abar = [amps_bar((1,) + P) for P in words]
    kernel = MomentumKernel(cfg, 1)
    f = cfg.field
    outer = []
    scale = 0.0
    for P, ab in zip(words, Abar):
        if not ab:
            continue
        weight = cfg.inv_s((1,) + P) * ab
        terms = [kernel(P, Q) * a for Q, a in zip(words, A) if a]
        outer.append(weight * _accurate_sum(terms, f))
        scale += abs(weight) * sum(abs(t) for t in terms)
    pre = _tensor_prefactor(cfg, 2)
    return pre * _accurate_sum(outer, f), float(abs(pre)) * scale


def tensor_klt_unsigned(cfg: KinConfig) -> object:
    return tensor_klt_with_scale(cfg)[0]


# global sign calibration --------------------------------------------------------------

SIGMA_REFERENCE_SEED = 1009


@lru_cache(maxsize=None)
def sigma(n: int) -> int:
    """Global sign of the master/KLT forms, measured on a reference configuration.

    Exact arithmetic for ``n <= 6``.  Beyond that the comparison runs in
    float mode: one sign must match to within ``1e-8`` of the absolute term
    scale while the other misses by the full amplitude.
    """
    cfg = random_kinematics(n, SIGMA_REFERENCE_SEED)
    if n > 6:
        cfg = cfg.to_float()
    direct = tensor_direct(cfg)
    unsigned, scale = tensor_klt_with_scale(cfg)
    if not unsigned:
        raise ArithmeticError(f"reference configuration has vanishing tensor amplitude at n={n}")
    if cfg.field.exact:
        ratio = direct / unsigned
        if ratio in (1, -1):
            return int(ratio.re)
        raise ArithmeticError(f"direct/KLT ratio {ratio} at n={n} is not a sign")
    tol = 1e-8 * max(scale, abs(direct))
    matches = [s for s in (1, -1) if abs(direct - s * unsigned) <= tol]
    if len(matches) == 1:
        return matches[0]
    raise ArithmeticError(f"direct={direct}, KLT={unsigned} at n={n} do not fix a sign")


METHODS = ("direct", "master", "klt")


def tensor_amplitude(cfg: KinConfig, method: str = "direct", sign: Optional[int] = None) -> object:
    """Tensor amplitude by one method; ``sign`` defaults to the calibrated sigma."""
    _require_conservation(cfg)
    if method == "direct":
        return tensor_direct(cfg)
    s = sigma(cfg.n) if sign is None else sign
    if method == "master":
        return s * tensor_master_unsigned(cfg)
    if method == "klt":
        return s * tensor_klt_unsigned(cfg)
    raise ValueError(f"unknown method {method!r}")


def tensor_amplitudes(cfg: KinConfig, sign: Optional[int] = None) -> Dict[str, object]:
    """All three methods; raises :class:`PathMismatch` unless they agree.

    In float mode the KLT value is compared against the absolute scale of
    its terms, since the sum can cancel by many orders of magnitude.
    """
    _require_conservation(cfg)
    s = sigma(cfg.n) if sign is None else sign
    f = cfg.field
    direct = tensor_direct(cfg)
    master = s * tensor_master_unsigned(cfg)
    klt_unsigned, scale = tensor_klt_with_scale(cfg)
    values = {"direct": direct, "master": master, "klt": s * klt_unsigned}
    ok = values_equal(direct, master, f)
    if f.exact:
        ok = ok and values["klt"] == direct
    else:
        ok = ok and abs(values["klt"] - direct) <= f.atol + f.rtol * max(scale, abs(direct))
    if not ok:
        raise PathMismatch("tensor amplitude methods disagree: " + ", ".join(f"{k}={v}" for k, v in values.items()))
    values["sigma"] = s
    return values


# current-level identities ------------------------------------------------------------------

def current_klt(cfg: KinConfig, m: int, sign: int) -> Tuple[object, object]:
    """Double-copy current of ``1..m`` and its KLT product of colour-stripped currents."""
    top = tuple(range(1, m + 1))
    M = CurrentTable(cfg, "dc").get(top)
    u = CurrentTable(cfg, "cs")
    ubar = CurrentTable(barred(cfg), "cs")
    words = [tuple(w) for w in itertools.permutations(range(2, m + 1))]
    kernel = MomentumKernel(cfg, 1)
    f = cfg.field
    acc = [[f.zero] * 3 for _ in range(3)]
    for P in words:
        ub = ubar.get((1,) + P)
        row = [f.zero] * 3
        for Q in words:
            S = kernel(P, Q)
            if S:
                uq = u.get((1,) + Q)
                row = [r + S * x for r, x in zip(row, uq)]
        for ib in range(3):
            if ub[ib]:
                for i in range(3):
                    acc[ib][i] = acc[ib][i] + ub[ib] * row[i]
    pre = sign * (cfg.kappa * f.frac(1, 2)) ** (m - 1) / cfg.lam ** (2 * (m - 1))
    klt = tuple(tuple(pre * x for x in r) for r in acc)
    return M, klt


def numerator_recovery_check(cfg: KinConfig, m: int) -> Report:
    """``eps_bar_{l[1Q]} = sum_P S(Q|P) ubar_{1P}`` for all ``Q`` over ``2..m``."""
    rep = Report(f"numerator-recovery m={m}")
    ubar = CurrentTable(barred(cfg), "cs")
    kernel = MomentumKernel(cfg, 1)
    words = [tuple(w) for w in itertools.permutations(range(2, m + 1))]
    scale = cfg.lam ** (m - 1)
    f = cfg.field
    for Q in words:
        target = numerator(cfg, left_bracketing((1,) + Q), barred=True).cov
        total = [f.zero] * 3
        for P in words:
            S = kernel(Q, P)
            if S:
                total = [t + S * x / scale for t, x in zip(total, ubar.get((1,) + P))]
        rep.check(values_equal(tuple(total), target, f), f"numerator l[1{word_to_str(Q)}] not recovered")
    return rep


# convention audit ---------------------------------------------------------------------------

PRINTED_RHO = {"cs": (1, 1), "cd": (1, 1), "dc": (1, 2), "zc": (1, 4)}


def _proportionality(num, den, field):
    fn, fd = flatten(num), flatten(den)
    ratio = None
    for x, y in zip(fn, fd):
        if y:
            ratio = x / y
            break
    if ratio is None:
        return None
    if not values_equal(num, tuple(ratio * y for y in fd), field):
        return None
    return ratio


def vertex_constants(cfg: KinConfig, sc=None, sc_bar=None, lengths=(2, 3, 4)) -> Dict[str, Dict[int, object]]:
    """Ratio of direct currents to the coupling-free tree replacement, per vertex."""
    out: Dict[str, Dict[int, object]] = {}
    for theory in ("cs", "cd", "dc", "zc"):
        direct = CurrentTable(cfg, theory, "direct", sc, sc_bar)
        fact = CurrentTable(cfg, theory, "factorized", sc, sc_bar)
        coupling = {"cs": cfg.lam, "cd": cfg.lam, "dc": cfg.kappa, "zc": cfg.gamma}[theory]
        per = {}
        for k in lengths:
            P = tuple(range(1, k + 1))
            ratio = _proportionality(direct.get(P), fact.unnormalized(P), cfg.field)
            per[k] = None if ratio is None else ratio / coupling ** (k - 1)
        out[theory] = per
    return out


def convention_audit(ns=(3, 4, 5), seeds=range(10), sc: Optional[StructureConstants] = None) -> Report:
    """Measure the global sign and per-vertex constants and compare with the printed conventions."""
    rep = Report("audit")
    sigmas = {}
    for n in ns:
        seen = set()
        for seed in seeds:
            for label, eps_bar in (("same", False), ("independent", True)):
                cfg = random_kinematics(n, seed, independent_eps_bar=eps_bar)
                direct = tensor_direct(cfg)
                for method, fn in (("master", tensor_master_unsigned), ("klt", tensor_klt_unsigned)):
                    unsigned = fn(cfg)
                    if not unsigned:
                        rep.check(not direct, f"n={n} seed={seed} {method}: unsigned form vanishes but direct={direct}")
                        continue
                    ratio = direct / unsigned
                    ok = ratio in (1, -1)
                    rep.check(ok, f"n={n} seed={seed} eps_bar={label} {method}: ratio {ratio} is not a sign")
                    if ok:
                        seen.add(int(ratio.re))
        rep.check(len(seen) == 1, f"n={n}: sign not constant across configurations {sorted(seen)}")
        sigmas[n] = seen.pop() if len(seen) == 1 else None
    alternating = {n: (-1) ** n for n in ns}
    rep.details["sigma"] = sigmas
    rep.details["alternating_sign"] = alternating
    rep.details["sigma_matches_alternating"] = {n: sigmas[n] == alternating[n] for n in ns}

    k3 = k3_fixture()
    s3 = tensor_direct(k3) / tensor_klt_unsigned(k3)
    rep.details["sigma_k3"] = int(s3.re) if s3 in (1, -1) else str(s3)

    rho = None
    for seed in seeds:
        # a generic algebra keeps nested colour factors from vanishing
        alg = sc or random_algebra(seed)
        cfg = random_kinematics(5, seed, conserve_momentum=False, colour_dim=alg.dim)
        for p in range(1, 6):
            # distinct colours on both sides so no bracket vanishes by antisymmetry
            cfg = cfg.with_particle(p, colour=(p - 1) % alg.dim + 1, colour_bar=(p + seed) % alg.dim + 1)
        rho = vertex_constants(cfg, alg)
        if all(v is not None for per in rho.values() for v in per.values()):
            break
    rep.details["rho"] = {}
    for theory, per in rho.items():
        base = per.get(2)
        consistent = base is not None and all(per[k] is not None and per[k] == base ** (k - 1) for k in per)
        printed = GaussianRational(Fraction(*PRINTED_RHO[theory]))
        rep.check(consistent, f"{theory}: per-vertex constants {per} do not follow one geometric pattern")
        rep.details["rho"][theory] = {"measured": base, "printed": printed, "deviates": base != printed}
    return rep
