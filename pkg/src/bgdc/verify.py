"""Verification suites driving every identity the library promises.

Each suite takes ``(nmax, seeds, field)`` and returns a :class:`Report`.
Current-level suites draw configurations without momentum conservation and
use words over all ``n`` letters; amplitude-level suites use conserving
configurations.
"""

from __future__ import annotations

import itertools
import time
from math import lcm
from operator import add
from typing import Callable, Dict, Iterable, List, Sequence

from .amplitudes import (
    convention_audit,
    current_klt,
    full_amplitude_paths,
    kernel_inverse_check,
    kleiss_kuijf_all,
    numerator_recovery_check,
    PathMismatch,
    sigma,
    tensor_amplitudes,
)
from .colour import builtin_su2, check_gen_jacobi_colour, random_algebra, validate_jacobi
from .currents import (
    THEORIES,
    CurrentTable,
    magnitude,
    mc_residual,
    shuffle_check,
    transversality_check,
    value_is_zero,
    values_equal,
)
from .kinematics import KinConfig, random_kinematics
from .numerators import check_gen_jacobi
from .report import Report
from .scalars import EXACT, Field
from .words import shuffle, word_to_str

SUITES = (
    "shuffle",
    "jacobi-colour",
    "jacobi-kinematic",
    "transversality",
    "cross-path",
    "kernel-inverse",
    "kk",
    "klt",
    "audit",
)


def _config(n: int, seed: int, field: Field, **kw) -> KinConfig:
    cfg = random_kinematics(n, seed, **kw)
    return cfg if field.exact else cfg.to_float()


def all_words(letters: Sequence[int], max_len: int) -> Iterable[tuple]:
    for k in range(1, max_len + 1):
        for sub in itertools.combinations(letters, k):
            yield from itertools.permutations(sub)


def ordered_words(letters: Sequence[int], max_len: int) -> Iterable[tuple]:
    for k in range(1, max_len + 1):
        yield from itertools.combinations(letters, k)


def shuffle_pairs(letters: Sequence[int], max_total: int) -> Iterable[tuple]:
    """Unordered pairs of disjoint non-empty words with total length <= max_total."""
    for t in range(2, max_total + 1):
        for sub in itertools.combinations(letters, t):
            for perm in itertools.permutations(sub):
                for cut in range(1, t):
                    P, Q = perm[:cut], perm[cut:]
                    if P < Q:
                        yield P, Q


# shuffle ------------------------------------------------------------------------

def _double_rows_vanish(table: CurrentTable, letters: tuple, pairs: List[tuple], rep: Report) -> None:
    """Slot constraints for double currents over one letter set.

    In exact mode all entries are rescaled by a common denominator so the
    row sums run on Python ints; in float mode the rows stay complex and
    are compared against the largest entry involved.
    """
    words = list(itertools.permutations(letters))
    index = {w: i for i, w in enumerate(words)}
    values = [[table.get(W, R) for R in words] for W in words]
    field = table.field
    if field.exact:
        den = 1
        for row in values:
            for x in row:
                den = lcm(den, x.re.denominator, x.im.denominator)
        # real and imaginary parts interleaved so one int list carries both
        rows = [[int(part * den) for x in row for part in (x.re, x.im)] for row in values]
    else:
        rows = [list(row) for row in values]
    width = len(rows[0])
    cols = [[] for _ in words]
    for row in rows:
        step = width // len(words)
        for j in range(len(words)):
            cols[j].extend(row[step * j : step * (j + 1)])
    for P, Q in pairs:
        terms = shuffle(P, Q)
        for slot, mat in ((1, rows), (2, cols)):
            acc = [0] * width
            scale = 0.0
            for W, c in terms.items():
                row = mat[index[W]]
                acc = list(map(add, acc, row if c == 1 else [c * x for x in row]))
                if not field.exact:
                    scale = max(scale, max(abs(x) for x in row))
            ok = not any(acc) if field.exact else all(abs(a) <= field.atol + field.rtol * scale for a in acc)
            rep.check(ok, f"double-current slot {slot} shuffle {word_to_str(P)} sh {word_to_str(Q)} does not vanish")


def suite_shuffle(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("shuffle")
    for n in range(3, nmax + 1):
        letters = tuple(range(1, n + 1))
        for seed in seeds:
            cfg = _config(n, seed, field, conserve_momentum=False)
            cs = CurrentTable(cfg, "cs")
            for P, Q in shuffle_pairs(letters, n):
                total = shuffle_check(cs, P, Q)
                scale = max(magnitude(cs.get(W)) for W in shuffle(P, Q))
                rep.check(value_is_zero(total, field, scale), f"n={n} seed={seed}: cs shuffle {word_to_str(P)} sh {word_to_str(Q)} = {total}")
        # double currents: one seed per n, every letter set
        cfg = _config(n, seeds[0], field, conserve_momentum=False)
        dbl = CurrentTable(cfg, "double", "factorized")
        for t in range(2, n + 1):
            for sub in itertools.combinations(letters, t):
                pairs = [pq for pq in shuffle_pairs(sub, t) if len(pq[0]) + len(pq[1]) == t]
                _double_rows_vanish(dbl, sub, pairs, rep)
    return rep


# Jacobi -------------------------------------------------------------------------

def suite_jacobi_colour(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("jacobi-colour")
    algebras = [builtin_su2(field)] + [random_algebra(s) for s in seeds[:2]]
    if not field.exact:
        algebras = [sc.to_float() for sc in algebras]
    for sc in algebras:
        rep.absorb(validate_jacobi(sc), f"{sc.name}: ")
    for seed in seeds:
        for sc in algebras:
            cfg = random_kinematics(nmax, seed, conserve_momentum=False, colour_dim=sc.dim)
            assign = {p: cfg.particle(p).colour for p in range(1, nmax + 1)}
            for k in range(2, min(nmax, 6) + 1):
                rep.absorb(check_gen_jacobi_colour(sc, assign, k, range(1, nmax + 1)), f"{sc.name} seed={seed}: ")
    return rep


def suite_jacobi_kinematic(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("jacobi-kinematic")
    for seed in seeds:
        cfg = _config(nmax, seed, field, conserve_momentum=False, independent_eps_bar=True)
        for k in range(2, min(nmax, 6) + 1):
            for barred in (False, True):
                rep.absorb(check_gen_jacobi(cfg, k, barred), f"seed={seed} barred={barred}: ")
    return rep


# transversality -------------------------------------------------------------------

def suite_transversality(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("transversality")
    letters = tuple(range(1, nmax + 1))
    for seed in seeds:
        cfg = _config(nmax, seed, field, conserve_momentum=False)
        cs = CurrentTable(cfg, "cs")
        for P in all_words(letters, min(nmax, 6)):
            v = transversality_check(cs, P)
            scale = magnitude(cs.get(P)) * magnitude(cfg.momentum(P))
            rep.check(value_is_zero(v, field, scale), f"seed={seed}: cs u_{word_to_str(P)}.k = {v}")
        cd = CurrentTable(cfg, "cd")
        for P in ordered_words(letters, min(nmax, 6)):
            v = transversality_check(cd, P)
            scale = magnitude(cd.get(P)) * magnitude(cfg.momentum(P))
            rep.check(value_is_zero(v, field, scale), f"seed={seed}: cd u_{word_to_str(P)}.k = {v}")
    return rep


# cross-path ---------------------------------------------------------------------

def cross_path_config(cfg: KinConfig, rep: Report, label: str, cs_perm_len: int = 5, residuals: bool = True) -> None:
    """Direct vs factorized for every theory, plus residuals of the produced tables."""
    letters = tuple(range(1, cfg.n + 1))
    field = cfg.field
    for theory in THEORIES:
        direct = CurrentTable(cfg, theory, "direct")
        fact = CurrentTable(cfg, theory, "factorized")
        words = list(ordered_words(letters, cfg.n))
        if theory == "cs":
            words += [w for w in all_words(letters, min(cs_perm_len, cfg.n)) if list(w) != sorted(w)]
        for P in words:
            rep.check(values_equal(direct.get(P), fact.get(P), field), f"{label}: {theory} {word_to_str(P)} direct != factorized")
        if residuals:
            for table in (direct, fact):
                for P in words:
                    table.populate(P)
                    r = mc_residual(table, P)
                    scale = magnitude(table.get(P)) * abs(cfg.s(P)) if len(P) > 1 else 1.0
                    rep.check(value_is_zero(r, field, scale), f"{label}: {theory}/{table.mode} residual at {word_to_str(P)} = {r}")
    # double currents on letter sets of size <= 4, every word pair
    direct = CurrentTable(cfg, "double", "direct")
    fact = CurrentTable(cfg, "double", "factorized")
    for t in range(1, min(cfg.n, 4) + 1):
        for sub in itertools.combinations(letters, t):
            for P in itertools.permutations(sub):
                for Q in itertools.permutations(sub):
                    rep.check(
                        values_equal(direct.get(P, Q), fact.get(P, Q), field),
                        f"{label}: double {word_to_str(P)}|{word_to_str(Q)} direct != factorized",
                    )
                    rep.check(values_equal(direct.get(P, Q), direct.get(Q, P), field), f"{label}: double current not symmetric at {word_to_str(P)}|{word_to_str(Q)}")
                    if residuals:
                        r = mc_residual(direct, P, Q)
                        scale = abs(direct.get(P, Q)) * abs(cfg.s(P)) if len(P) > 1 else 1.0
                        rep.check(value_is_zero(r, field, scale), f"{label}: double residual at {word_to_str(P)}|{word_to_str(Q)} = {r}")


def suite_cross_path(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("cross-path")
    for n in range(3, nmax + 1):
        for seed in seeds:
            cfg = _config(n, seed, field, conserve_momentum=False)
            cross_path_config(cfg, rep, f"n={n} seed={seed}", cs_perm_len=5)
            amp_cfg = _config(n, seed, field)
            algebras = [builtin_su2(field)]
            if field.exact:
                algebras.append(random_algebra(seed))
            for sc in algebras:
                cfg_c = amp_cfg if sc.dim == 3 else _config(n, seed, field, colour_dim=sc.dim)
                a, b = full_amplitude_paths(cfg_c, sc)
                rep.check(values_equal(a, b, field), f"n={n} seed={seed} {sc.name}: full amplitude paths {a} != {b}")
    return rep


# amplitudes -----------------------------------------------------------------------

def suite_kernel_inverse(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("kernel-inverse")
    for n in range(3, nmax + 1):
        for seed in seeds:
            rep.absorb(kernel_inverse_check(_config(n, seed, field)), f"n={n} seed={seed}: ")
    return rep


def suite_kk(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("kk")
    for n in range(3, nmax + 1):
        for seed in seeds:
            rep.absorb(kleiss_kuijf_all(_config(n, seed, field)), f"n={n} seed={seed}: ")
    return rep


def suite_klt(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    rep = Report("klt")
    for n in range(3, nmax + 1):
        s = sigma(n)
        for seed in seeds:
            for indep in (False, True):
                cfg = _config(n, seed, field, independent_eps_bar=indep)
                try:
                    tensor_amplitudes(cfg, s)
                    rep.check(True, "")
                except PathMismatch as exc:
                    rep.fail(f"n={n} seed={seed} eps_bar={'indep' if indep else 'same'}: {exc}")
                M, K = current_klt(cfg, n - 1, s)
                rep.check(values_equal(M, K, field), f"n={n} seed={seed}: current-level KLT mismatch")
                rep.absorb(numerator_recovery_check(cfg, n - 1), f"n={n} seed={seed}: ")
    return rep


def suite_audit(nmax: int, seeds: Sequence[int], field: Field = EXACT) -> Report:
    ns = tuple(range(3, min(nmax, 5) + 1)) or (3,)
    rep = convention_audit(ns, list(seeds))
    return rep


SUITE_FUNCS: Dict[str, Callable[..., Report]] = {
    "shuffle": suite_shuffle,
    "jacobi-colour": suite_jacobi_colour,
    "jacobi-kinematic": suite_jacobi_kinematic,
    "transversality": suite_transversality,
    "cross-path": suite_cross_path,
    "kernel-inverse": suite_kernel_inverse,
    "kk": suite_kk,
    "klt": suite_klt,
    "audit": suite_audit,
}


def run_suites(names: Iterable[str], nmax: int, seeds: Sequence[int], field: Field = EXACT) -> List[Report]:
    """Run suites in order, recording wall time in each report's details."""
    out = []
    for name in names:
        start = time.perf_counter()
        rep = SUITE_FUNCS[name](nmax, list(seeds), field)
        rep.details["wall_time_s"] = round(time.perf_counter() - start, 3)
        rep.details["nmax"] = nmax
        rep.details["seeds"] = list(seeds)
        rep.details["mode"] = field.name
        out.append(rep)
    return out
