"""Kinematic Lie algebra: brackets of (polarization, momentum) pairs."""

from __future__ import annotations

from typing import NamedTuple

from .kinematics import KinConfig, Vec3, vadd, vscale
from .report import Report
from .words import Node, Tree, check_distinct, gen_jacobi_constraints, tree_letters, word_to_str


class KinElement(NamedTuple):
    cov: Vec3
    mom: Vec3


def kin_bracket(x: KinElement, y: KinElement) -> KinElement:
    """``[x, y] = (x.cov . y.mom) y.cov - (y.cov . x.mom) x.cov``, momenta add."""
    xc, xm = x
    yc, ym = y
    a = xc[0] * ym[0] + xc[1] * ym[1] + xc[2] * ym[2]
    b = yc[0] * xm[0] + yc[1] * xm[1] + yc[2] * xm[2]
    cov = (a * yc[0] - b * xc[0], a * yc[1] - b * xc[1], a * yc[2] - b * xc[2])
    return KinElement(cov, (xm[0] + ym[0], xm[1] + ym[1], xm[2] + ym[2]))


def leaf(cfg: KinConfig, p: int, barred: bool = False) -> KinElement:
    part = cfg.particle(p)
    return KinElement(part.eps_bar if barred else part.eps, part.k)


def numerator(cfg: KinConfig, t: Tree, barred: bool = False) -> KinElement:
    """Evaluate a bracket tree with polarizations at the leaves."""
    check_distinct(tree_letters(t))
    return _numerator(cfg, t, barred)


def _numerator(cfg, t, barred):
    if isinstance(t, Node):
        # looked up through the module so fault-injection tests can patch it
        return kin_bracket(_numerator(cfg, t.left, barred), _numerator(cfg, t.right, barred))
    return leaf(cfg, t, barred)


def numerator_sum(cfg: KinConfig, trees, barred: bool = False, cache=None) -> Vec3:
    """Covector of a formal sum of trees, optionally sharing subtree values."""
    z = cfg.field.zero
    total = (z, z, z)
    for t, c in trees.items():
        value = _cached(cfg, t, barred, cache) if cache is not None else numerator(cfg, t, barred)
        total = vadd(total, vscale(c, value.cov))
    return total


def _cached(cfg, t, barred, cache):
    hit = cache.get(t)
    if hit is None:
        if isinstance(t, Node):
            hit = kin_bracket(_cached(cfg, t.left, barred, cache), _cached(cfg, t.right, barred, cache))
        else:
            hit = leaf(cfg, t, barred)
        cache[t] = hit
    return hit


def check_gen_jacobi(cfg: KinConfig, k: int, barred: bool = False, letters=None) -> Report:
    """Every order-``k`` generalized Jacobi constraint on the numerators."""
    rep = Report(f"jacobi-kinematic k={k}")
    alphabet = letters if letters is not None else range(1, cfg.n + 1)
    f = cfg.field
    cache: dict = {}
    for con in gen_jacobi_constraints(k, alphabet):
        total = numerator_sum(cfg, con.trees(), barred, cache)
        scale = max([abs(x) for x in numerator_sum(cfg, con.first, barred, cache)] + [1.0])
        rep.check(
            all(f.is_zero(x, scale) for x in total),
            f"numerators violate U_(Q l[R]) + U_(R l[Q]) = 0 for Q={word_to_str(con.Q)}, R={word_to_str(con.R)}",
        )
    return rep
