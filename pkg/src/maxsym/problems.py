"""Random problem instances and their JSON form.

JSON conventions: complex numbers are ``[re, im]``, matrices are nested
row-major lists, and symmetric 3x3 matrices are stored as the upper
triangle ``[m11, m12, m13, m22, m23, m33]``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .metrics_geometry import HatPair, ParameterTriple, cometric_from_normal_data, to_boundary_normal
from .symbol_calculus import MetricJet

KINDS = ("isotropic", "diagonal", "generic", "near-degenerate", "multiples")
SEED_ENV = "MAXSYM_SEED"
JET_DECAY = 0.3


def default_seed(fallback: int = 0) -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value not in (None, "") else fallback


def random_spd(rng, n: int = 3) -> np.ndarray:
    """``M^T M + 0.1 I`` with ``M`` uniform on [-1, 1]."""
    m = rng.uniform(-1.0, 1.0, (n, n))
    return m.T @ m + 0.1 * np.eye(n)


def random_symmetric(rng, n: int = 3) -> np.ndarray:
    m = rng.uniform(-1.0, 1.0, (n, n))
    return 0.5 * (m + m.T)


def random_direction(rng) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([np.cos(theta), np.sin(theta)])


def sweep_directions(rng, n_equispaced: int = 32, n_random: int = 100) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n_equispaced) / n_equispaced
    theta = np.concatenate([theta, rng.uniform(0.0, 2.0 * np.pi, n_random)])
    return np.column_stack([np.cos(theta), np.sin(theta)])


def random_hat_pair(rng, kind: str = "generic") -> HatPair:
    """Random pair of rescaled cometrics in the boundary normal chart of eps.

    ``isotropic`` gives ``eps = mu = I``; ``diagonal`` draws both diagonal.
    ``near-degenerate`` makes ``mu`` a multiple of ``eps`` up to a 1e-6
    perturbation; ``multiples`` makes the boundary cometrics proportional
    while the normal row of ``mu`` stays generic.
    """
    if kind == "isotropic":
        pair = HatPair(np.eye(3), np.eye(3))
    elif kind == "diagonal":
        pair = HatPair(np.diag(rng.uniform(0.5, 2.0, 3)), np.diag(rng.uniform(0.5, 2.0, 3)))
    elif kind == "generic":
        pair = HatPair(random_spd(rng), random_spd(rng))
    elif kind == "near-degenerate":
        eps = random_spd(rng)
        factor = rng.uniform(0.5, 2.0)
        pair = HatPair(eps, factor * eps + 1e-6 * random_symmetric(rng))
    elif kind == "multiples":
        eps_t = random_spd(rng, 2)
        factor = rng.uniform(0.5, 2.0)
        normal = np.concatenate([rng.uniform(-1.0, 1.0, 2), [rng.uniform(0.5, 2.0)]])
        eps = np.eye(3)
        eps[:2, :2] = eps_t
        pair = HatPair(eps, cometric_from_normal_data(factor * eps_t, normal))
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    return to_boundary_normal(pair).pair


def random_parameter_triple(rng) -> ParameterTriple:
    """``g`` random SPD and ``eps = g S``, ``mu = g S'`` with ``S, S'`` SPD."""
    g = random_spd(rng)
    return ParameterTriple(g @ random_spd(rng), g @ random_spd(rng), g)


def random_jet(rng, base, order: int = 3) -> MetricJet:
    """Polynomial field around ``base`` with derivatives of size ``0.3^k``."""
    d_tan = np.array([JET_DECAY * random_symmetric(rng) for _ in range(2)])
    d_norm = np.array([JET_DECAY**k * random_symmetric(rng) for k in range(1, order + 1)])
    return MetricJet(base, d_tan, d_norm)


@dataclass
class ProblemInstance:
    pair: HatPair
    omega: float
    xi_t: np.ndarray
    kind: str = "generic"
    seed: int | None = None


def generate(kind: str = "generic", seed: int | None = None) -> ProblemInstance:
    if seed is None:
        seed = default_seed()
    rng = np.random.default_rng(seed)
    pair = random_hat_pair(rng, kind)
    omega = float(rng.uniform(0.5, 2.0))
    return ProblemInstance(pair, omega, random_direction(rng), kind, seed)


# ---------------------------------------------------------------------------
# JSON


def sym_to_list(m) -> list:
    m = np.asarray(m, dtype=float)
    return [m[0, 0], m[0, 1], m[0, 2], m[1, 1], m[1, 2], m[2, 2]]


def sym_from_list(values) -> np.ndarray:
    if len(values) != 6:
        raise ValueError("a symmetric 3x3 matrix needs 6 upper-triangle entries")
    a, b, c, d, e, f = (float(v) for v in values)
    return np.array([[a, b, c], [b, d, e], [c, e, f]])


def encode(value):
    """Make numpy arrays and complex numbers JSON friendly."""
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    return value


def decode_complex_array(value) -> np.ndarray:
    """Inverse of :func:`encode` for arrays whose innermost lists are ``[re, im]``."""
    arr = np.asarray(value, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def instance_to_dict(inst: ProblemInstance) -> dict:
    return {
        "kind": inst.kind,
        "seed": inst.seed,
        "omega": inst.omega,
        "xi_t": encode(inst.xi_t),
        "eps_hat": sym_to_list(inst.pair.eps_hat),
        "mu_hat": sym_to_list(inst.pair.mu_hat),
    }


def instance_from_dict(data: dict) -> ProblemInstance:
    try:
        pair = HatPair(sym_from_list(data["eps_hat"]), sym_from_list(data["mu_hat"]))
        omega = float(data.get("omega", 1.0))
        xi_t = np.asarray(data.get("xi_t", [1.0, 0.0]), dtype=float)
    except KeyError as exc:
        raise ValueError(f"missing field {exc}") from exc
    if xi_t.shape != (2,) or not np.all(np.isfinite(xi_t)) or np.linalg.norm(xi_t) == 0:
        raise ValueError("xi_t must be a nonzero real 2-vector")
    if not np.isfinite(omega) or omega <= 0:
        raise ValueError("omega must be positive")
    return ProblemInstance(pair, omega, xi_t, data.get("kind", "generic"), data.get("seed"))


def load_instance(path) -> ProblemInstance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def dump_json(obj, path=None) -> str:
    text = json.dumps(encode(obj), indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
