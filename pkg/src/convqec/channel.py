"""Memoryless Pauli channels: per-qubit error probabilities, likelihoods,
and reproducible sampling.

A schedule assigns every qubit its own quadruple (p_I, p_X, p_Y, p_Z), so
position-dependent ("time-varying") channels cost nothing extra.  All
likelihood arithmetic is done in log space; a forbidden component (zero
probability) contributes -inf, which the decoder treats as a dead branch.

Randomness comes from numpy's Philox counter-based generator, so a seed
produces the same stream on every platform.  Log-likelihoods are accumulated
strictly left-to-right over qubits 1..n; the decoder relies on this exact
summation order so that equal-probability errors compare bit-identically.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import Pauli, pauli_from_codes

# Column order of the public quadruples.
QUAD_ORDER = "IXYZ"
# probs column -> per-qubit integer code (see pauli.CODE_CHARS = "IZXY"),
# and the inverse permutation (code -> probs column).
_QUAD_TO_CODE = (0, 2, 3, 1)
_CODE_TO_QUAD = (0, 3, 1, 2)
_PROB_TOLERANCE = 1e-12


@dataclass(eq=False)
class ChannelSchedule:
    """Per-qubit Pauli error probabilities; treat as immutable after creation."""

    probs: np.ndarray  # shape (n, 4), columns (p_I, p_X, p_Y, p_Z)
    _log_by_code: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.ndim != 2 or self.probs.shape[1] != 4 or self.probs.shape[0] < 1:
            raise ValueError(f"probs must have shape (n, 4), got {self.probs.shape}")
        if (self.probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        sums = self.probs.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > _PROB_TOLERANCE)
        if bad.size:
            raise ValueError(f"probabilities at qubit {bad[0] + 1} sum to {sums[bad[0]]!r}")
        self.probs.setflags(write=False)

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    def log_prob_by_code(self) -> np.ndarray:
        """(n, 4) log-probabilities indexed by per-qubit code (I,Z,X,Y order)."""
        if self._log_by_code is None:
            with np.errstate(divide="ignore"):
                table = np.log(self.probs[:, _CODE_TO_QUAD])
            table.setflags(write=False)
            self._log_by_code = table
        return self._log_by_code


def depolarizing(n: int, p: float) -> ChannelSchedule:
    """Uniform depolarizing channel: each qubit gets (1-p, p/3, p/3, p/3)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength must be in [0, 1], got {p}")
    row = np.array([1.0 - p, p / 3.0, p / 3.0, p / 3.0])
    return ChannelSchedule(np.tile(row, (n, 1)))


def schedule_from_probs(rows) -> ChannelSchedule:
    """Schedule from an explicit list of per-qubit (p_I, p_X, p_Y, p_Z) rows."""
    return ChannelSchedule(np.array(rows, dtype=np.float64))


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator; same seed gives the same stream
    on every platform.  Accepts an int, SeedSequence, or existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def sample_error_codes(schedule: ChannelSchedule, rng, count: int) -> np.ndarray:
    """Sample ``count`` independent errors as a (count, n) matrix of codes.

    Per qubit, one uniform draw is bucketed against the cumulative
    (p_I, p_X, p_Y, p_Z) thresholds, in that documented order.
    """
    rng = make_rng(rng)
    cum = np.cumsum(schedule.probs, axis=1)
    u = rng.random((count, schedule.n))
    category = (u[:, :, None] >= cum[None, :, :3]).sum(axis=2)
    return np.array(_QUAD_TO_CODE, dtype=np.uint8)[category]


def sample_error(schedule: ChannelSchedule, rng) -> Pauli:
    """Draw one error; ``rng`` is a seed or a Generator (advanced in place)."""
    codes = sample_error_codes(schedule, rng, 1)[0]
    return pauli_from_codes(codes)


def log_likelihood(schedule: ChannelSchedule, e: Pauli) -> float:
    """Sum of per-qubit log-probabilities, accumulated over qubits 1..n.

    Returns -inf as soon as any factor has zero probability.
    """
    if e.n != schedule.n:
        raise ValueError(f"error acts on {e.n} qubits, schedule has {schedule.n}")
    table = schedule.log_prob_by_code()
    total = 0.0
    for q, code in enumerate(e.codes()):
        total = total + float(table[q, code])
    return total


def channel_to_config(schedule: ChannelSchedule) -> dict:
    """JSON-ready schedule description; floats round-trip exactly."""
    return {"type": "schedule", "probs": [[float(v) for v in row] for row in schedule.probs]}


def channel_from_config(config: dict, n: int) -> ChannelSchedule:
    """Build a schedule from a config dict; unknown or missing keys are errors.

    Accepted forms:
        {"type": "depolarizing", "p": <float>}
        {"type": "schedule", "probs": [[pI,pX,pY,pZ], ...]}   (length must be n)
    """
    if not isinstance(config, dict):
        raise ValueError("channel config must be an object")
    kind = config.get("type")
    if kind == "depolarizing":
        extra = set(config) - {"type", "p"}
        if extra:
            raise ValueError(f"unknown channel config key {sorted(extra)[0]!r}")
        if "p" not in config:
            raise ValueError("depolarizing channel config requires key 'p'")
        return depolarizing(n, float(config["p"]))
    if kind == "schedule":
        extra = set(config) - {"type", "probs"}
        if extra:
            raise ValueError(f"unknown channel config key {sorted(extra)[0]!r}")
        if "probs" not in config:
            raise ValueError("schedule channel config requires key 'probs'")
        sched = schedule_from_probs(config["probs"])
        if sched.n != n:
            raise ValueError(f"schedule covers {sched.n} qubits, code needs {n}")
        return sched
    raise ValueError(f"unknown channel type {kind!r}")


def channel_id(config: dict) -> str:
    """Short stable identifier for a channel config (used in result tables)."""
    if config.get("type") == "depolarizing":
        return repr(float(config["p"]))
    digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
    return f"schedule-{digest[:8]}"
