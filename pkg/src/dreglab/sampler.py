"""Samplers and exhaustive enumeration for d-biregular 0/1 matrices.

Three ways to produce matrices:

* ``stub_rejection`` — the directed configuration model: a uniform bijection
  from the n*d out-stubs to the n*d in-stubs, rejected whenever it would
  create a multi-edge.  Conditioned on acceptance the output is *exactly*
  uniform, because every simple matrix is hit by the same number (d!)^(2n)
  of bijections.  The acceptance rate decays roughly like exp(-(d-1)^2/2),
  so this is practical for small d only.
* ``mcmc`` — a lazy random walk on feasible switchings started at the
  circulant, approximately uniform after burn-in.  The step count counts
  *proposals*, not accepted moves, so the walk terminates even when no
  switching is feasible (d = n) and keeps the uniform distribution
  stationary (acceptance-conditioned stopping would bias it).
* ``enumerate_all`` — exhaustive backtracking over row supports with column
  capacity pruning, for ground-truth checks at small sizes.

Every sampler output passes full construction-time validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import RejectionBudgetExceeded, SizeGuardError
from .matrix import BiregularMatrix, build, circulant
from .switching import SwitchSession

__all__ = [
    "SamplerConfig",
    "sample_stub",
    "sample_uniform",
    "sample_mcmc",
    "mcmc_stream",
    "draw_sample",
    "enumerate_all",
    "count_all",
]

_KINDS = ("stub_rejection", "mcmc", "exhaustive")

# JSON field order is fixed so serialized configs are byte-stable.
_CONFIG_FIELDS = ("kind", "max_rejections", "burn_in_steps", "steps_between_samples", "seed")


@dataclass(frozen=True)
class SamplerConfig:
    """Serializable description of how matrices are drawn.

    ``burn_in_steps = None`` means the scale-aware default 10 * n * d^2
    proposals; ``steps_between_samples = None`` means n * d^2.  A burn-in of
    0 is allowed and returns the start state unchanged.
    """

    kind: str = "stub_rejection"
    max_rejections: int = 10_000
    burn_in_steps: int | None = None
    steps_between_samples: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}, expected one of {_KINDS}")
        if self.max_rejections < 1:
            raise ValueError(f"max_rejections must be >= 1, got {self.max_rejections}")
        if self.burn_in_steps is not None and self.burn_in_steps < 0:
            raise ValueError(f"burn_in_steps must be >= 0, got {self.burn_in_steps}")
        if self.steps_between_samples is not None and self.steps_between_samples < 1:
            raise ValueError(
                f"steps_between_samples must be >= 1, got {self.steps_between_samples}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")

    def to_json(self) -> str:
        return json.dumps({f: getattr(self, f) for f in _CONFIG_FIELDS})

    @classmethod
    def from_json(cls, text: str) -> "SamplerConfig":
        data = json.loads(text)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "SamplerConfig":
        if not isinstance(data, dict):
            raise ValueError(f"sampler config must be a JSON object, got {type(data).__name__}")
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ValueError(f"unknown sampler config fields: {sorted(unknown)}")
        return cls(**data)


def burn_in_default(n: int, d: int) -> int:
    """Default number of burn-in proposals for the switching walk."""
    return 10 * n * d * d


def sample_stub(n: int, d: int, rng: np.random.Generator) -> BiregularMatrix | None:
    """One configuration-model draw; ``None`` when a multi-edge came up.

    Out-stub a (of row a // d) is matched to in-stub perm[a] (of column
    perm[a] // d); the draw is rejected iff some row hits a column twice.
    """
    perm = rng.permutation(n * d)
    cols = np.sort((perm // d).reshape(n, d), axis=1)
    if d > 1 and bool((cols[:, 1:] == cols[:, :-1]).any()):
        return None
    return build(n, d, [tuple(int(v) for v in row) for row in cols])


def sample_uniform(
    n: int, d: int, config: SamplerConfig, rng: np.random.Generator
) -> BiregularMatrix:
    """Exactly uniform draw from the d-biregular matrices by stub rejection.

    Raises :class:`RejectionBudgetExceeded` after ``config.max_rejections``
    rejected matchings.
    """
    for _ in range(config.max_rejections):
        a = sample_stub(n, d, rng)
        if a is not None:
            return a
    raise RejectionBudgetExceeded(
        f"no simple matching in {config.max_rejections} draws (n={n}, d={d})"
    )


def _walk(session: SwitchSession, steps: int, rng: np.random.Generator) -> None:
    """Advance the lazy switching walk by ``steps`` proposals, in place."""
    if steps <= 0:
        return
    n, d = session.n, session.d
    row_lists, row_sets = session.row_lists, session.row_sets
    draws = rng.integers(0, (n, d, n, d), size=(steps, 4))
    for i, ki, j, lj in draws.tolist():
        k = row_lists[i][ki]
        l = row_lists[j][lj]
        si, sj = row_sets[i], row_sets[j]
        if l in si or k in sj:
            continue  # infeasible proposal: lazy step, stay in place
        rl = row_lists[i]
        rl[rl.index(k)] = l
        rl = row_lists[j]
        rl[rl.index(l)] = k
        si.discard(k)
        si.add(l)
        sj.discard(l)
        sj.add(k)


def sample_mcmc(
    n: int, d: int, config: SamplerConfig, rng: np.random.Generator
) -> BiregularMatrix:
    """Approximately uniform draw via the switching walk from the circulant."""
    burn = config.burn_in_steps
    if burn is None:
        burn = burn_in_default(n, d)
    session = SwitchSession(circulant(n, d))
    _walk(session, burn, rng)
    return session.freeze()


def mcmc_stream(
    n: int, d: int, config: SamplerConfig, rng: np.random.Generator
) -> Iterator[BiregularMatrix]:
    """Endless stream of walk states: burn-in once, then one matrix every
    ``steps_between_samples`` proposals (consecutive samples stay correlated)."""
    burn = config.burn_in_steps
    if burn is None:
        burn = burn_in_default(n, d)
    spacing = config.steps_between_samples
    if spacing is None:
        spacing = max(1, n * d * d)
    session = SwitchSession(circulant(n, d))
    _walk(session, burn, rng)
    while True:
        yield session.freeze()
        _walk(session, spacing, rng)


def draw_sample(
    n: int, d: int, config: SamplerConfig, rng: np.random.Generator
) -> BiregularMatrix:
    """Draw one matrix with whichever sampler the config names."""
    if config.kind == "stub_rejection":
        return sample_uniform(n, d, config, rng)
    if config.kind == "mcmc":
        return sample_mcmc(n, d, config, rng)
    raise ValueError(f"kind {config.kind!r} cannot draw independent samples")


def _within_guard(n: int, d: int) -> bool:
    return n <= 7 or n * d <= 16


def enumerate_all(
    n: int, d: int, *, size_guard: bool = True
) -> Iterator[BiregularMatrix]:
    """Stream every d-biregular 0/1 matrix of size n, each exactly once.

    Backtracking over rows: a column whose remaining capacity equals the
    number of unfilled rows must appear in all of them; one whose capacity
    exceeds that count is a dead end.  The guard (n <= 7 or n*d <= 16)
    raises :class:`SizeGuardError` before an infeasibly large enumeration
    starts; pass ``size_guard=False`` to override it deliberately.
    """
    if n < 1 or not (1 <= d <= n):
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")
    if size_guard and not _within_guard(n, d):
        raise SizeGuardError(
            f"enumeration of n={n}, d={d} exceeds the size guard "
            "(n <= 7 or n*d <= 16); pass size_guard=False to force"
        )

    caps = [d] * n
    chosen: list[tuple[int, ...]] = []

    def rec(s: int) -> Iterator[BiregularMatrix]:
        if s == n:
            yield build(n, d, list(chosen))
            return
        remaining = n - s
        forced = [c for c in range(n) if caps[c] == remaining]
        if len(forced) > d:
            return
        optional = [c for c in range(n) if 0 < caps[c] < remaining]
        need = d - len(forced)
        if need > len(optional):
            return
        for combo in combinations(optional, need):
            support = tuple(sorted(forced + list(combo)))
            for c in support:
                caps[c] -= 1
            chosen.append(support)
            yield from rec(s + 1)
            chosen.pop()
            for c in support:
                caps[c] += 1

    return rec(0)


def count_all(n: int, d: int, *, size_guard: bool = True) -> int:
    """Number of d-biregular 0/1 matrices of size n (full enumeration)."""
    return sum(1 for _ in enumerate_all(n, d, size_guard=size_guard))
