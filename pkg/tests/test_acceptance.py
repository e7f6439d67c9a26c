"""Acceptance checks, one test per criterion, each printing one PASS/FAIL line."""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import pytest

from bgdc.amplitudes import (
    MomentumKernel,
    convention_audit,
    full_amplitude_paths,
    kernel_inverse_check,
    kleiss_kuijf_all,
    partial_amplitude,
    sigma,
    tensor_amplitude,
    tensor_amplitudes,
    tensor_klt_with_scale,
)
from bgdc.colour import builtin_su2, check_gen_jacobi_colour, random_algebra, validate_jacobi
from bgdc.currents import THEORIES, CurrentTable, mc_residual, value_is_zero, values_equal
from bgdc.kinematics import k3_fixture, random_kinematics
from bgdc.numerators import check_gen_jacobi
from bgdc.report import Report
from bgdc.verify import all_words, ordered_words, suite_klt, suite_shuffle, suite_transversality

SEEDS = range(10)
LETTERS6 = tuple(range(1, 7))


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, rep: Report, extra: str = "") -> None:
        status = "PASS" if rep.passed else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({rep.checks} checks{extra})"
        with capsys.disabled():
            print("\n" + line)
            for msg in rep.failures[:5]:
                print(f"    {msg}")
        assert rep.passed, rep.failures[:5]

    return emit


def test_criterion_01_cross_path(verdict):
    rep = Report("cross-path")
    start = time.perf_counter()
    for seed in SEEDS:
        cfg = random_kinematics(6, seed, conserve_momentum=False)
        for theory in THEORIES:
            direct = CurrentTable(cfg, theory, "direct")
            fact = CurrentTable(cfg, theory, "factorized")
            for P in ordered_words(LETTERS6, 6):
                rep.check(values_equal(direct.get(P), fact.get(P), cfg.field), f"seed={seed} {theory} {P}")
    elapsed = time.perf_counter() - start
    rep.check(elapsed < 60, f"ordered-word sweep took {elapsed:.1f} s (budget 60 s)")
    # colour-stripped currents are defined on every word, not only increasing ones
    for seed in SEEDS:
        cfg = random_kinematics(6, seed, conserve_momentum=False)
        direct, fact = CurrentTable(cfg, "cs", "direct"), CurrentTable(cfg, "cs", "factorized")
        for P in all_words(LETTERS6, 5):
            rep.check(values_equal(direct.get(P), fact.get(P), cfg.field), f"seed={seed} cs {P}")
    verdict(1, "direct == factorized for cs/cd/dc/zc, 6 letters, 10 exact configs", rep, f", timed sweep {elapsed:.1f} s < 60 s")


def test_criterion_02_shuffle(verdict):
    rep = suite_shuffle(6, [0, 1])
    verdict(2, "shuffle sums vanish for |P|+|Q| <= 6, incl. both double-current slots", rep)


def test_criterion_03_generalized_jacobi(verdict):
    rep = Report("jacobi")
    for sc in (builtin_su2(), random_algebra(0)):
        rep.absorb(validate_jacobi(sc))
        for seed in range(3):
            cfg = random_kinematics(6, seed, conserve_momentum=False, colour_dim=sc.dim)
            assign = {p: cfg.particle(p).colour for p in LETTERS6}
            for k in range(2, 7):
                rep.absorb(check_gen_jacobi_colour(sc, assign, k, LETTERS6), f"{sc.name} seed={seed}: ")
    for seed in range(3):
        cfg = random_kinematics(6, seed, conserve_momentum=False, independent_eps_bar=True)
        for k in range(2, 7):
            for barred in (False, True):
                rep.absorb(check_gen_jacobi(cfg, k, barred), f"seed={seed}: ")
    verdict(3, "colour factors and numerators obey every order-k constraint, k <= 6", rep)


def test_criterion_04_transversality(verdict):
    rep = suite_transversality(6, range(5))
    verdict(4, "u_P . k_P = 0 for cs and cd currents, |P| <= 6", rep)


def test_criterion_05_kernel_inverse(verdict):
    rep = Report("kernel-inverse")
    for n in range(3, 7):
        for seed in range(5):
            for mode in ("direct", "factorized"):
                rep.absorb(kernel_inverse_check(random_kinematics(n, seed), n, mode), f"n={n} seed={seed} {mode}: ")
    verdict(5, "kernel times double currents is the identity, kernel symmetric, n <= 6", rep)


def test_criterion_06_klt_triple(verdict):
    rep = suite_klt(6, SEEDS)
    audit = convention_audit((3, 4, 5), SEEDS)
    rep.absorb(audit, "audit: ")
    d = audit.details
    rep.check(d["sigma_k3"] == 1, f"sigma on the three-particle fixture is {d['sigma_k3']}")
    rep.check(all(d["sigma"][n] in (1, -1) for n in (3, 4, 5)), f"sigma pattern {d['sigma']}")
    rep.check(sigma(6) in (1, -1), "sigma_6 undetermined")
    k3 = k3_fixture()
    rep.check(partial_amplitude(k3, (1, 2, 3)) == 1, "A(123) != 1")
    rep.check(full_amplitude_paths(k3, builtin_su2()) == (1, 1), "full three-particle amplitude != 1")
    rep.check(tensor_amplitudes(k3)["direct"] == Fraction(1, 2), "tensor three-particle amplitude != 1/2")
    rep.check(CurrentTable(k3, "double").get((1, 2), (1, 2)) == Fraction(1, 2), "u_12|12 != 1/2")
    rep.check(MomentumKernel(k3, 1)((2,), (2,)) == 2, "S(2|2) != 2")
    sig = ", ".join(f"n={n}:{s:+d}" for n, s in sorted(d["sigma"].items()))
    verdict(6, "tensor amplitude direct == master == klt for n <= 6, 10 seeds", rep, f", sigma {sig}")


def _coloured(cfg, sc, seed):
    """First colour assignment (cycled by seed) giving a non-vanishing amplitude."""
    choices = list(itertools.product(range(1, sc.dim + 1), repeat=cfg.n))
    for i in range(len(choices)):
        colours = choices[(i + 7919 * seed) % len(choices)]
        trial = cfg
        for p, a in enumerate(colours, start=1):
            trial = trial.with_particle(p, colour=a)
        a, b = full_amplitude_paths(trial, sc)
        if a:
            return a, b
    raise AssertionError("every colour assignment gives a vanishing amplitude")


def test_criterion_07_colour_decomposition(verdict):
    rep = Report("colour-decomposition")
    for sc in (builtin_su2(), random_algebra(3)):
        for n in range(3, 6):
            for seed in range(5):
                a, b = _coloured(random_kinematics(n, seed), sc, seed)
                rep.check(a == b, f"{sc.name} n={n} seed={seed}: {a} != {b}")
    verdict(7, "colour-dressed current == colour decomposition, n <= 5, su2 and a random algebra", rep)


def test_criterion_08_kleiss_kuijf(verdict):
    rep = Report("kk")
    for n in range(3, 6):
        for seed in range(5):
            rep.absorb(kleiss_kuijf_all(random_kinematics(n, seed)), f"n={n} seed={seed}: ")
    verdict(8, "Kleiss-Kuijf relations for every ordering, n <= 5", rep)


def test_criterion_09_residual(verdict):
    rep = Report("residual")
    for seed in range(3):
        cfg = random_kinematics(6, seed, conserve_momentum=False)
        for theory in THEORIES:
            for mode in ("direct", "factorized"):
                table = CurrentTable(cfg, theory, mode)
                for P in ordered_words(LETTERS6, 6):
                    table.populate(P)
                if theory == "cs":
                    for P in all_words(LETTERS6, 4):
                        table.populate(P)
                for key in list(table.entries):
                    rep.check(value_is_zero(mc_residual(table, key), cfg.field), f"seed={seed} {theory}/{mode} {key}")
        for mode in ("direct", "factorized"):
            dbl = CurrentTable(cfg, "double", mode)
            for P in itertools.permutations((1, 2, 3, 4)):
                dbl.populate(P, (4, 2, 3, 1))
            for P, Q in list(dbl.entries):
                rep.check(mc_residual(dbl, P, Q) == 0, f"seed={seed} double/{mode} {P}|{Q}")
    # fault injection: corrupt one stored entry and the checker must notice
    cfg = random_kinematics(5, 0, conserve_momentum=False)
    dbl = CurrentTable(cfg, "double")
    dbl.populate((1, 2, 3), (1, 2, 3))
    dbl.entries[((1, 2), (1, 2))] = dbl.entries[((1, 2), (1, 2))] + 1
    rep.check(mc_residual(dbl, (1, 2), (1, 2)) != 0, "mutated u_12|12 not flagged")
    rep.check(mc_residual(dbl, (1, 2, 3), (1, 2, 3)) != 0, "mutation not visible one level up")
    cd = CurrentTable(cfg, "cd")
    cd.populate((1, 2, 3))
    row = cd.entries[(1, 3)][0]
    cd.entries[(1, 3)] = ((row[1], row[0], row[2]),) + cd.entries[(1, 3)][1:]
    rep.check(not value_is_zero(mc_residual(cd, (1, 3)), cfg.field), "mutated cd u_13 not flagged")
    verdict(9, "residual is zero on produced tables and nonzero on mutated ones", rep)


def test_criterion_10_float_performance(verdict):
    rep = Report("float-n8")
    cfg = random_kinematics(8, 0, independent_eps_bar=True).to_float()
    start = time.perf_counter()
    s = sigma(8)
    unsigned, scale = tensor_klt_with_scale(cfg)
    elapsed = time.perf_counter() - start
    klt = s * unsigned
    direct = tensor_amplitude(cfg, "direct")
    rel = abs(klt - direct) / abs(direct)
    cond = scale / abs(direct)
    # the sum cancels by a factor cond, so rounding is judged against the term scale
    rep.check(abs(klt - direct) <= 1e-10 * scale, f"klt vs direct differ by {rel:.2e} relative (condition {cond:.1e})")
    rep.check(elapsed < 300, f"n=8 KLT sum took {elapsed:.1f} s (budget 300 s)")
    extra = f", {elapsed:.1f} s, rel diff {rel:.1e}, condition {cond:.1e}"
    verdict(10, "float n=8 KLT sum (720 x 720 kernel entries) under 5 minutes", rep, extra)
