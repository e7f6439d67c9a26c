"""Momenta, polarizations, Mandelstam variables and random exact configurations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .report import Report
from .scalars import EXACT, FLOAT, Field, GaussianRational, format_scalar, parse_scalar
from .words import Word, check_distinct, word_to_str

Vec3 = Tuple[object, object, object]


class GenerationError(RuntimeError):
    """Random configuration could not satisfy its constraints."""


class DegenerateKinematics(ZeroDivisionError):
    """A required Mandelstam denominator vanishes."""

    def __init__(self, word: Sequence[int]):
        self.word = tuple(word)
        super().__init__(f"s_{word_to_str(self.word)} vanishes")


def dot(u: Vec3, v: Vec3):
    """Euclidean bilinear product, no complex conjugation."""
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def vadd(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vsub(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vscale(c, u: Vec3) -> Vec3:
    return (c * u[0], c * u[1], c * u[2])


def cross(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True)
class Particle:
    k: Vec3
    eps: Vec3
    eps_bar: Vec3
    colour: int = 1
    colour_bar: int = 1


@dataclass(frozen=True)
class KinConfig:
    particles: Tuple[Particle, ...]
    nu: object = None
    lam: object = None
    kappa: object = None
    gamma: object = None
    conserve_momentum: bool = True
    field: Field = EXACT
    _s_cache: Dict[frozenset, object] = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        f = self.field
        object.__setattr__(self, "particles", tuple(self.particles))
        for name in ("nu", "lam", "kappa", "gamma"):
            value = getattr(self, name)
            object.__setattr__(self, name, f.one if value is None else f.convert(value))

    @property
    def n(self) -> int:
        return len(self.particles)

    def particle(self, p: int) -> Particle:
        if not 1 <= p <= len(self.particles):
            raise KeyError(f"no particle {p} (n={len(self.particles)})")
        return self.particles[p - 1]

    def k(self, p: int) -> Vec3:
        return self.particle(p).k

    def momentum(self, P: Iterable[int]) -> Vec3:
        z = self.field.zero
        total = (z, z, z)
        for p in P:
            total = vadd(total, self.k(p))
        return total

    def s(self, P: Sequence[int]):
        """Cached Mandelstam variable of the letter set of ``P``."""
        key = frozenset(P)
        value = self._s_cache.get(key)
        if value is None:
            value = mandelstam(self, tuple(P))
            self._s_cache[key] = value
        return value

    def inv_s(self, P: Sequence[int]):
        value = self.s(P)
        if self.field.is_zero(value, scale=self.s_scale(P)):
            raise DegenerateKinematics(P)
        return 1 / value

    def s_scale(self, P: Sequence[int]) -> float:
        return float(abs(self.nu)) * sum(abs(dot(self.k(p), self.k(p))) for p in P) or 1.0

    def to_float(self) -> "KinConfig":
        if not self.field.exact:
            return self
        conv = lambda v: tuple(complex(x) for x in v)
        parts = tuple(
            Particle(conv(p.k), conv(p.eps), conv(p.eps_bar), p.colour, p.colour_bar)
            for p in self.particles
        )
        return KinConfig(
            parts,
            complex(self.nu),
            complex(self.lam),
            complex(self.kappa),
            complex(self.gamma),
            self.conserve_momentum,
            FLOAT,
        )

    def with_couplings(self, **kw) -> "KinConfig":
        """Copy with some of ``nu, lam, kappa, gamma`` replaced."""
        return replace(self, _s_cache={}, **kw)

    def with_particle(self, p: int, **kw) -> "KinConfig":
        parts = list(self.particles)
        parts[p - 1] = replace(parts[p - 1], **kw)
        return replace(self, particles=tuple(parts), _s_cache={})


def omega(cfg: KinConfig, p: int):
    """Energy from the dispersion relation, ``i nu |k_p|^2``."""
    k = cfg.k(p)
    return cfg.field.i * cfg.nu * dot(k, k)


def mandelstam(cfg: KinConfig, P: Sequence[int]):
    """``nu (|k_P|^2 - sum_p |k_p|^2)``."""
    check_distinct(P)
    kP = cfg.momentum(P)
    total = dot(kP, kP)
    for p in P:
        k = cfg.k(p)
        total = total - dot(k, k)
    return cfg.nu * total


def mandelstam_pairs(cfg: KinConfig, P: Sequence[int]):
    """Independent pair-sum form ``2 nu sum_{p<q} k_p . k_q``."""
    check_distinct(P)
    total = cfg.field.zero
    for a, b in itertools.combinations(P, 2):
        total = total + dot(cfg.k(a), cfg.k(b))
    return 2 * cfg.nu * total


def required_subsets(cfg: KinConfig) -> Iterable[Word]:
    """Letter sets whose Mandelstam variable appears as a denominator."""
    n = cfg.n
    pool = range(1, n) if cfg.conserve_momentum else range(1, n + 1)
    for size in range(2, len(pool) + 1):
        for sub in itertools.combinations(pool, size):
            yield sub


def find_degenerate(cfg: KinConfig) -> Optional[Word]:
    for sub in required_subsets(cfg):
        if cfg.field.is_zero(cfg.s(sub), scale=cfg.s_scale(sub)):
            return sub
    return None


def validate(cfg: KinConfig, omegas: Optional[Dict[int, object]] = None) -> Report:
    """Check transversality, dispersion, conservation and denominators."""
    f = cfg.field
    rep = Report("validate")
    for p in range(1, cfg.n + 1):
        part = cfg.particle(p)
        scale = float(abs(dot(part.k, part.k))) ** 0.5 or 1.0
        rep.check(f.is_zero(dot(part.eps, part.k), scale), f"transversality: particle {p} eps.k != 0")
        rep.check(f.is_zero(dot(part.eps_bar, part.k), scale), f"transversality: particle {p} eps_bar.k != 0")
    for p, w in (omegas or {}).items():
        rep.check(f.close(f.convert(w), omega(cfg, p)), f"dispersion: particle {p} omega != i nu k^2")
    if cfg.conserve_momentum:
        total = cfg.momentum(range(1, cfg.n + 1))
        rep.check(all(f.is_zero(x) for x in total), "momentum conservation: sum of k_p != 0")
    for sub in required_subsets(cfg):
        rep.check(
            not f.is_zero(cfg.s(sub), scale=cfg.s_scale(sub)),
            f"denominator: s_{word_to_str(sub)} = 0",
        )
    return rep


# generation -----------------------------------------------------------------

def _rand_rational(rng: random.Random, bound: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def _rand_vec(rng, bound, max_den, complex_: bool) -> Vec3:
    if complex_:
        return tuple(
            GaussianRational(_rand_rational(rng, bound, max_den), _rand_rational(rng, bound, max_den))
            for _ in range(3)
        )
    return tuple(GaussianRational(_rand_rational(rng, bound, max_den)) for _ in range(3))


def _is_null(v: Vec3) -> bool:
    return not any(v)


def _transverse(rng, k: Vec3, bound, max_den, complex_: bool) -> Vec3:
    for _ in range(100):
        eps = cross(_rand_vec(rng, bound, max_den, complex_), k)
        if not _is_null(eps):
            return eps
    raise GenerationError("could not find a transverse polarization")


def random_kinematics(
    n: int,
    seed: int,
    *,
    conserve_momentum: bool = True,
    independent_eps_bar: bool = False,
    complex_polarizations: bool = False,
    complex_momenta: bool = False,
    colour_dim: int = 3,
    bound: int = 5,
    max_den: int = 3,
    nu=1,
    lam=1,
    kappa=1,
    gamma=1,
    max_retries: int = 50,
) -> KinConfig:
    """Deterministic random exact configuration with non-vanishing denominators."""
    if n < 3:
        raise ValueError("need at least 3 particles")
    rng = random.Random(seed)
    last_bad: Optional[Word] = None
    for _ in range(max_retries):
        momenta = []
        for p in range(n):
            if conserve_momentum and p == n - 1:
                total = (GaussianRational(0),) * 3
                for k in momenta:
                    total = vadd(total, k)
                momenta.append(vscale(-1, total))
            else:
                momenta.append(_rand_vec(rng, bound, max_den, complex_momenta))
        if any(_is_null(k) for k in momenta):
            last_bad = None
            continue
        parts = []
        for k in momenta:
            eps = _transverse(rng, k, bound, max_den, complex_polarizations)
            eps_bar = _transverse(rng, k, bound, max_den, complex_polarizations) if independent_eps_bar else eps
            parts.append(
                Particle(k, eps, eps_bar, rng.randint(1, colour_dim), rng.randint(1, colour_dim))
            )
        cfg = KinConfig(tuple(parts), nu, lam, kappa, gamma, conserve_momentum, EXACT)
        last_bad = find_degenerate(cfg)
        if last_bad is None:
            return cfg
    where = f": s_{word_to_str(last_bad)} vanished" if last_bad else ": zero momentum drawn"
    raise GenerationError(f"no valid configuration for n={n}, seed={seed} after {max_retries} tries{where}")


def k3_fixture() -> KinConfig:
    """Three-particle reference configuration with unit couplings."""
    g = GaussianRational
    v = lambda *xs: tuple(g(x) for x in xs)
    parts = (
        Particle(v(1, 0, 0), v(0, 1, 0), v(0, 1, 0), 1, 1),
        Particle(v(1, 1, 0), v(0, 0, 1), v(0, 0, 1), 2, 2),
        Particle(v(-2, -1, 0), v(0, 0, 1), v(0, 0, 1), 3, 3),
    )
    return KinConfig(parts, 1, 1, 1, 1, True, EXACT)


# JSON ---------------------------------------------------------------------

def _read(value, f: Field):
    if isinstance(value, float) or (isinstance(value, dict) and any(isinstance(x, float) for x in value.values())):
        if f.exact:
            raise ValueError(f"floating-point value {value!r} in exact mode")
        if isinstance(value, dict):
            return complex(value.get("re", 0), value.get("im", 0))
        return complex(value)
    x = parse_scalar(value)
    return f.convert(x) if f.exact else complex(x)


def config_to_json(cfg: KinConfig) -> dict:
    vec = lambda v: [format_scalar(x) for x in v]
    return {
        "nu": format_scalar(cfg.nu),
        "couplings": {
            "lambda": format_scalar(cfg.lam),
            "kappa": format_scalar(cfg.kappa),
            "gamma": format_scalar(cfg.gamma),
        },
        "conserve_momentum": cfg.conserve_momentum,
        "particles": [
            {
                "k": vec(p.k),
                "eps": vec(p.eps),
                "eps_bar": vec(p.eps_bar),
                "colour": p.colour,
                "colour_bar": p.colour_bar,
            }
            for p in cfg.particles
        ],
    }


def config_from_json(data: dict, field: Field = EXACT) -> Tuple[KinConfig, Dict[int, object]]:
    """Parse a configuration; also returns any explicit energies for validation."""
    couplings = data.get("couplings", {})
    parts = []
    omegas = {}
    for idx, entry in enumerate(data["particles"], start=1):
        vec = lambda key: tuple(_read(x, field) for x in entry[key])
        k = vec("k")
        eps = vec("eps")
        eps_bar = vec("eps_bar") if "eps_bar" in entry else eps
        if len(k) != 3 or len(eps) != 3 or len(eps_bar) != 3:
            raise ValueError(f"particle {idx}: vectors must have 3 components")
        parts.append(
            Particle(k, eps, eps_bar, int(entry.get("colour", 1)), int(entry.get("colour_bar", entry.get("colour", 1))))
        )
        if "omega" in entry:
            omegas[idx] = _read(entry["omega"], field)
    get = lambda d, key: _read(d[key], field) if key in d else None
    cfg = KinConfig(
        tuple(parts),
        get(data, "nu"),
        get(couplings, "lambda"),
        get(couplings, "kappa"),
        get(couplings, "gamma"),
        bool(data.get("conserve_momentum", True)),
        field,
    )
    return cfg, omegas
