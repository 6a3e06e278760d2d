"""Monte Carlo harness: sample, decode, classify residuals, aggregate rates.

A trial samples a channel error, extracts its syndrome, decodes, and
multiplies the sampled and decoded errors.  That residual always has zero
syndrome (asserted on every trial); the trial is a success exactly when the
residual lies in the stabilizer group, i.e. its commutation bits against
every logical operator vanish.  Decoding to a different error than the one
sampled is fine as long as they differ by a stabilizer element.

Determinism: all randomness is drawn from Philox streams keyed as follows.

  * Trial sampling for a run uses SeedSequence(master_seed); errors are drawn
    in trial order, so chunk sizes and execution strategy cannot change them.
  * Random tie-breaking (opt-in) uses SeedSequence(master_seed,
    spawn_key=(1, trial_index)) per trial.
  * Sweep row r derives its own master seed from
    SeedSequence((master_seed, r)); rows are therefore reproducible in
    isolation and independent of worker scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSchedule, depolarizing, make_rng, sample_error_codes
from .code import ConvolutionalCode, Syndrome, build_code, logical_action, syndrome_of
from .decoder import _SP1, _codes_of_index, brute_force_table, decode_batch, viterbi_decode
from .pauli import Pauli, multiply, pauli_from_codes

WILSON_Z = 1.959963984540054  # two-sided 95%


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval; well behaved at zero and full counts."""
    if trials < 1:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * float(np.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class TrialOutcome:
    sampled_error: Pauli
    decoded_error: Pauli
    logical_bits: tuple[int, ...]

    @property
    def success(self) -> bool:
        return not any(self.logical_bits)


@dataclass(frozen=True)
class SimStats:
    trials: int
    logical_errors: int
    rate: float
    ci_low: float
    ci_high: float
    master_seed: int
    elapsed: float
    infeasible: int = 0


def classify_residual(code: ConvolutionalCode, sampled: Pauli, decoded: Pauli) -> tuple[int, ...]:
    """Logical action of sampled*decoded; all-zero means successful correction.

    Raises if the two errors have different syndromes (a decoder bug).
    """
    if syndrome_of(code, sampled).bits != syndrome_of(code, decoded).bits:
        raise ValueError("sampled and decoded errors have different syndromes")
    return logical_action(code, multiply(sampled, decoded))


def _operator_bits_batch(code_mat: np.ndarray, operators) -> np.ndarray:
    """Commutation bits of each row of ``code_mat`` against each operator."""
    trials = code_mat.shape[0]
    out = np.zeros((trials, len(operators)), dtype=np.uint8)
    for col, op in enumerate(operators):
        acc = np.zeros(trials, dtype=np.uint8)
        for q in op.support():
            acc ^= _SP1[code_mat[:, q - 1], op.code_at(q)]
        out[:, col] = acc
    return out


def syndrome_bits_batch(code: ConvolutionalCode, code_mat: np.ndarray) -> np.ndarray:
    """(trials, 4N+2) syndrome bits for a batch of errors given as code rows."""
    return _operator_bits_batch(code_mat, code.generators)


def _logical_bits_batch(code: ConvolutionalCode, code_mat: np.ndarray) -> np.ndarray:
    ops = []
    for lx, lz in zip(code.logical_x, code.logical_z):
        ops.extend((lx, lz))
    return _operator_bits_batch(code_mat, ops)


def run_trials(
    code: ConvolutionalCode,
    schedule: ChannelSchedule,
    trials: int,
    master_seed: int,
    tie_mode: str = "deterministic",
    chunk_size: int = 4096,
) -> SimStats:
    """Sample/decode/classify ``trials`` times; bit-reproducible per seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start = time.perf_counter()
    rng = make_rng(np.random.SeedSequence(master_seed))
    logical_errors = 0
    infeasible = 0
    done = 0
    while done < trials:
        batch = min(chunk_size, trials - done)
        sampled = sample_error_codes(schedule, rng, batch)
        syndromes = syndrome_bits_batch(code, sampled)
        if tie_mode == "deterministic":
            result = decode_batch(code, schedule, syndromes)
            decoded, feasible = result.codes, result.feasible
        else:
            decoded = np.zeros_like(sampled)
            feasible = np.ones(batch, dtype=bool)
            for t in range(batch):
                seed = np.random.SeedSequence(master_seed, spawn_key=(1, done + t))
                r = viterbi_decode(
                    code, schedule, Syndrome(tuple(int(b) for b in syndromes[t])),
                    tie_mode="random", rng=make_rng(seed),
                )
                decoded[t] = r.error.codes()
        residual = sampled ^ decoded
        live = np.flatnonzero(feasible)
        if syndrome_bits_batch(code, residual[live]).any():
            raise AssertionError("residual error has nonzero syndrome; decoder is broken")
        actions = _logical_bits_batch(code, residual[live])
        logical_errors += int((actions.any(axis=1)).sum())
        infeasible += int(batch - live.size)
        done += batch

    effective = trials - infeasible
    rate = logical_errors / effective if effective else 0.0
    lo, hi = wilson_interval(logical_errors, effective) if effective else (0.0, 0.0)
    return SimStats(
        trials=trials,
        logical_errors=logical_errors,
        rate=rate,
        ci_low=lo,
        ci_high=hi,
        master_seed=master_seed,
        elapsed=time.perf_counter() - start,
        infeasible=infeasible,
    )


def collect_trials(
    code: ConvolutionalCode,
    schedule: ChannelSchedule,
    trials: int,
    master_seed: int,
    decoder: str = "viterbi",
) -> list[TrialOutcome]:
    """Per-trial outcomes for desk-scale studies; same sampling stream as
    :func:`run_trials`.  ``decoder`` is "viterbi" or "brute" (the latter
    decodes via the exhaustive table, for interchangeability checks)."""
    rng = make_rng(np.random.SeedSequence(master_seed))
    sampled = sample_error_codes(schedule, rng, trials)
    syndromes = syndrome_bits_batch(code, sampled)
    if decoder == "viterbi":
        decoded = decode_batch(code, schedule, syndromes).codes
    elif decoder == "brute":
        _, winner, _, _ = brute_force_table(code, schedule)
        weights = (1 << np.arange(syndromes.shape[1])).astype(np.int64)
        syn_idx = (syndromes.astype(np.int64) * weights).sum(axis=1)
        decoded = np.array(
            [_codes_of_index(int(winner[s]), code.n) for s in syn_idx], dtype=np.uint8
        )
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    outcomes = []
    for t in range(trials):
        s_p = pauli_from_codes(sampled[t])
        d_p = pauli_from_codes(decoded[t])
        outcomes.append(TrialOutcome(s_p, d_p, classify_residual(code, s_p, d_p)))
    return outcomes


@dataclass(frozen=True)
class SweepRow:
    blocks: int
    n: int
    channel_label: str
    stats: SimStats


def derive_row_seed(master_seed: int, row_index: int) -> int:
    """Documented splitting rule: row r is seeded from SeedSequence((master, r))."""
    return int(np.random.SeedSequence((master_seed, row_index)).generate_state(1, np.uint64)[0])


def _run_sweep_row(args) -> SweepRow:
    blocks, p, trials, row_seed, tie_mode = args
    code = build_code(blocks)
    schedule = depolarizing(code.n, p)
    stats = run_trials(code, schedule, trials, row_seed, tie_mode=tie_mode)
    return SweepRow(blocks, code.n, repr(float(p)), stats)


def sweep(
    blocks_list,
    ps,
    trials: int,
    master_seed: int,
    tie_mode: str = "deterministic",
    jobs: int = 1,
) -> list[SweepRow]:
    """Depolarizing sweep over the (blocks, p) grid, one row per cell.

    Rows are independent; with jobs > 1 they run in a process pool, and the
    per-row seed derivation makes parallel output identical to serial.
    """
    tasks = []
    for idx, (blocks, p) in enumerate((b, p) for b in blocks_list for p in ps):
        tasks.append((blocks, p, trials, derive_row_seed(master_seed, idx), tie_mode))
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_sweep_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_sweep_row, tasks))


CSV_HEADER = "N,n,p_or_schedule_id,trials,logical_errors,rate,ci_low,ci_high,seed,elapsed_s"


def rows_to_csv(rows, include_timing: bool = False) -> str:
    """CSV with the fixed schema above.

    elapsed_s is written as 0.000 unless ``include_timing`` is set: run time
    is not a function of the seed, and emitting it would break byte-for-byte
    reproducibility of otherwise identical runs.
    """
    lines = [CSV_HEADER]
    for row in rows:
        s = row.stats
        elapsed = f"{s.elapsed:.3f}" if include_timing else "0.000"
        lines.append(
            f"{row.blocks},{row.n},{row.channel_label},{s.trials},{s.logical_errors},"
            f"{s.rate!r},{s.ci_low!r},{s.ci_high!r},{s.master_seed},{elapsed}"
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows, include_timing: bool = False) -> str:
    import json

    payload = []
    for row in rows:
        s = row.stats
        payload.append(
            {
                "N": row.blocks,
                "n": row.n,
                "p_or_schedule_id": row.channel_label,
                "trials": s.trials,
                "logical_errors": s.logical_errors,
                "rate": s.rate,
                "ci_low": s.ci_low,
                "ci_high": s.ci_high,
                "seed": s.master_seed,
                "elapsed_s": round(s.elapsed, 3) if include_timing else 0.0,
            }
        )
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
