"""Random chains and hittable specs for sweeps.

Rows of a random chain are i.i.d. uniforms on (0, 1] normalized to sum 1,
so every entry is strictly positive and the chain is irreducible.
"""

from __future__ import annotations

import numpy as np

from .chain import Chain
from .constructors import HittableStepSpec, min_time_scale


def random_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    w = 1.0 - rng.random((n, n))
    return w / w.sum(axis=1, keepdims=True)


def random_chain(n: int, rng: np.random.Generator) -> Chain:
    return Chain(random_matrix(n, rng))


def random_lazy_chain(n: int, rng: np.random.Generator) -> Chain:
    """Average of a random chain with the identity, so every ``P[x, x] >= 1/2``."""
    return Chain(0.5 * (random_matrix(n, rng) + np.eye(n)))


def random_hittable_spec(rng: np.random.Generator, k_max: int = 3,
                         n_scale: float = 2.0) -> HittableStepSpec:
    """A hittable spec with 1..k_max steps, alphas in (0.02, 0.48) at least 0.01 apart.

    Each jump takes a random fraction in (0.05, 0.95) of the room left by the
    hittability bound. N is ``n_scale`` times the smallest valid time scale.
    """
    k = int(rng.integers(1, k_max + 1))
    while True:
        alphas = np.sort(rng.uniform(0.02, 0.48, size=k))[::-1]
        if k == 1 or np.min(-np.diff(alphas)) >= 0.01:
            break
    lambdas, total = [], 0.0
    for a in alphas:
        lam = rng.uniform(0.05, 0.95) * (1 / a - 1 - total)
        lambdas.append(lam)
        total += lam
    eps = rng.uniform(0.1, 0.9) * min(0.5 - alphas[0], 0.05)
    big_n = n_scale * min_time_scale(alphas, lambdas, eps)
    return HittableStepSpec(tuple(alphas), tuple(lambdas), eps, big_n)
