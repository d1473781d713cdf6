"""Random complex generators and the reproducible threshold-sweep harness.

Randomness comes from the counter-based Philox generator keyed by a hash of
(seed, stream labels), so any trial can be regenerated independently of worker
count or scheduling.  One uniform is drawn per lexicographic candidate cell,
which makes the 1-dimensional skeleton model and the graph model draw from
literally the same stream.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .complexes import Face, SimplicialComplex
from .errors import AbortedGreedy, DivisibilityError
from .f2 import F2Complex

DEFAULT_SEED = 20230211  # documented default; HDX_SEED overrides in the CLI
GREEDY_RETRY_CAP = 20
_WILSON_Z = 1.959963984540054  # two-sided 95%


def derive_key(seed: int, *parts: int | str) -> int:
    """128-bit stream key from a seed and labels, stable across platforms."""
    h = hashlib.blake2b(digest_size=16)
    h.update(int(seed).to_bytes(16, "little", signed=True))
    for p in parts:
        tag = p.encode() if isinstance(p, str) else int(p).to_bytes(16, "little", signed=True)
        h.update(len(tag).to_bytes(2, "little"))
        h.update(tag)
    return int.from_bytes(h.digest(), "little")


def derive_rng(seed: int, *parts: int | str) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *parts)))


def derive_seed(seed: int, *parts: int | str) -> int:
    """64-bit sub-seed, used to key per-trial model specs in sweeps."""
    return derive_key(seed, *parts) & (2**63 - 1)


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """One random-complex draw: model tag, sizes, parameter, seed."""

    model: str                 # "er" | "lm" | "y" | "w"
    n: int
    d: int = 1
    p: float | None = None    # er / lm
    k: int | None = None      # y / w
    delta0: float = 0.1       # w only
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.model not in ("er", "lm", "y", "w"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model in ("er", "lm"):
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("p must lie in [0, 1]")
        else:
            if self.k is None or self.k < 1:
                raise ValueError("k must be a positive integer")
        if self.model == "er" and self.d != 1:
            raise ValueError("the edge model is 1-dimensional")
        if self.n < self.d + 1:
            raise ValueError("need n >= d + 1")


def _sampled_cells(n: int, d: int, p: float,
                   rng: np.random.Generator) -> list[Face]:
    """Each (d+1)-subset kept with probability p, one uniform per subset."""
    total = math.comb(n, d + 1)
    if p >= 1.0:
        return list(itertools.combinations(range(n), d + 1))
    if p <= 0.0:
        return []
    us = rng.random(total)
    return [c for c, u in zip(itertools.combinations(range(n), d + 1), us)
            if u < p]


def _skeleton_faces(n: int, j: int) -> set[Face]:
    faces: set[Face] = set()
    for i in range(j + 1):
        faces.update(itertools.combinations(range(n), i + 1))
    return faces


def gen_linial_meshulam(spec: ModelSpec) -> SimplicialComplex:
    """Full (d-1)-skeleton plus independent d-cells with probability p."""
    rng = derive_rng(spec.seed, "lm-cells")
    faces = _skeleton_faces(spec.n, spec.d - 1)
    faces.update(_sampled_cells(spec.n, spec.d, spec.p, rng))
    return SimplicialComplex.from_cells(spec.n, faces)


def gen_erdos_renyi(spec: ModelSpec) -> SimplicialComplex:
    """Independent edges on n labelled vertices; isolated vertices kept."""
    if spec.d != 1:
        raise ValueError("the edge model is 1-dimensional")
    return gen_linial_meshulam(spec)


def gen_partition_Y(spec: ModelSpec) -> SimplicialComplex:
    """Union of k uniform partitions of the vertex set into (d+1)-blocks."""
    n, d, k = spec.n, spec.d, spec.k
    if n % (d + 1) != 0:
        raise DivisibilityError(f"(d+1)={d + 1} must divide n={n}")
    cells: set[Face] = set()
    for copy in range(k):
        rng = derive_rng(spec.seed, "y", copy)
        perm = rng.permutation(n)
        for b in range(n // (d + 1)):
            cells.add(tuple(sorted(int(v) for v in perm[b * (d + 1):(b + 1) * (d + 1)])))
    faces = set()
    for c in cells:
        for r in range(1, d + 2):
            faces.update(itertools.combinations(c, r))
    return SimplicialComplex.from_cells(n, faces)


def steiner_greedy(n: int, d: int, seed: int, delta0: float = 0.1,
                   *, rng: np.random.Generator | None = None,
                   ) -> tuple[list[Face], int]:
    """Greedy stage of a partial design: legal cells share no (d-1)-subset.

    The first cell is uniform over all candidates; afterwards each step draws
    uniformly from the legal cells (rejection sampling against a coverage
    bitset, switching to explicit enumeration of the legal set once the
    acceptance rate collapses, so uniformity is exact either way).  Stops once
    the uncovered (d-1)-cell count drops to n^(d - delta0); raises
    AbortedGreedy when no legal cell remains before that.
    Returns the chosen cells and the final uncovered count.
    """
    if n < d + 1:
        raise ValueError("need n >= d + 1")
    rng = rng if rng is not None else derive_rng(seed, "steiner")
    facet_index = {c: j for j, c in
                   enumerate(itertools.combinations(range(n), d))}
    target = n ** (d - delta0)
    covered = 0  # bitset over (d-1)-cells
    chosen: list[Face] = []

    def facets(cell: Face):
        for ell in range(len(cell)):
            yield cell[:ell] + cell[ell + 1:]

    def is_legal(cell: Face) -> bool:
        return all(not covered >> facet_index[f] & 1 for f in facets(cell))

    def take(cell: Face) -> None:
        nonlocal covered
        chosen.append(cell)
        for f in facets(cell):
            covered |= 1 << facet_index[f]

    while True:
        pick = None
        for _ in range(200):  # rejection against the coverage bitset
            cand = tuple(sorted(int(v) for v in
                                rng.choice(n, size=d + 1, replace=False)))
            if is_legal(cand):
                pick = cand
                break
        if pick is None:
            legal = [c for c in itertools.combinations(range(n), d + 1)
                     if is_legal(c)]
            if not legal:
                raise AbortedGreedy(
                    f"no legal cell after {len(chosen)} picks")
            pick = legal[int(rng.integers(len(legal)))]
        take(pick)
        uncovered = len(facet_index) - (d + 1) * len(chosen)
        if uncovered <= target:
            return chosen, uncovered


def gen_steiner_W(spec: ModelSpec) -> tuple[SimplicialComplex, list[int]]:
    """Union of k independent greedy-stage designs over the full skeleton.

    Each copy contributes at most one cell per (d-1)-subset, so the union has
    upper-degree at most k.  Aborted copies are retried with fresh derived
    streams up to the retry cap.  Returns the complex and the per-copy
    uncovered (d-1)-cell counts (completion of the design is out of scope
    and reported, not performed).
    """
    n, d = spec.n, spec.d
    cells: set[Face] = set()
    uncovered_counts = []
    for copy in range(spec.k):
        for attempt in range(GREEDY_RETRY_CAP):
            try:
                chosen, uncovered = steiner_greedy(
                    n, d, spec.seed, spec.delta0,
                    rng=derive_rng(spec.seed, "w", copy, attempt))
                break
            except AbortedGreedy:
                if attempt == GREEDY_RETRY_CAP - 1:
                    raise
        cells.update(chosen)
        uncovered_counts.append(uncovered)
    faces = _skeleton_faces(n, d - 1)
    for c in cells:
        faces.add(c)
    return SimplicialComplex.from_cells(n, faces), uncovered_counts


def generate(spec: ModelSpec) -> SimplicialComplex:
    """Dispatch on the model tag; the W model's side report is dropped here."""
    if spec.model == "er":
        return gen_erdos_renyi(spec)
    if spec.model == "lm":
        return gen_linial_meshulam(spec)
    if spec.model == "y":
        return gen_partition_Y(spec)
    return gen_steiner_W(spec)[0]


# ----------------------------------------------------------------------
# sweep harness


def wilson_interval(successes: int, trials: int,
                    z: float = _WILSON_Z) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    ph = successes / trials
    denom = 1.0 + z * z / trials
    centre = ph + z * z / (2 * trials)
    rad = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials))
    return (centre - rad) / denom, (centre + rad) / denom


PREDICATES: dict[str, Callable[[SimplicialComplex, ModelSpec], bool]] = {
    "connected": lambda X, spec: X.is_connected(),
    "homologically-connected":
        lambda X, spec: F2Complex(X).homologically_connected(spec.d - 1),
}


@dataclass(frozen=True)
class SweepSpec:
    template: ModelSpec
    grid: Sequence[float]
    trials: int
    predicate: str | Callable[[SimplicialComplex, ModelSpec], bool] = "connected"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial per grid point")
        if isinstance(self.predicate, str) and self.predicate not in PREDICATES:
            raise ValueError(f"unknown predicate {self.predicate!r}")


@dataclass(frozen=True)
class SweepPoint:
    value: float
    successes: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    failures: int = 0
    wall_clock: float = 0.0


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: list[SweepPoint] = field(default_factory=list)


def _trial_spec(template: ModelSpec, value: float, gi: int, ti: int) -> ModelSpec:
    seed = derive_seed(template.seed, "sweep", gi, ti)
    if template.model in ("er", "lm"):
        return replace(template, p=float(value), seed=seed)
    return replace(template, k=int(value), seed=seed)


def _run_trial(args: tuple) -> tuple[int, int, bool | None, str | None]:
    template, value, gi, ti, predicate, dump_dir = args
    spec = _trial_spec(template, value, gi, ti)
    pred = PREDICATES[predicate] if isinstance(predicate, str) else predicate
    try:
        X = generate(spec)
        if dump_dir is not None:
            from pathlib import Path

            from .complexes import to_mfl_json
            path = Path(dump_dir) / f"{spec.model}-g{gi}-t{ti}.json"
            path.write_text(to_mfl_json(X))
        return gi, ti, bool(pred(X, spec)), None
    except Exception as exc:  # recorded per trial, aggregation continues
        return gi, ti, None, f"{type(exc).__name__}: {exc}"


def threshold_sweep(spec: SweepSpec, workers: int = 1, log=None,
                    dump_dir: str | None = None) -> SweepResult:
    """Run trials at every grid value and aggregate empirical probabilities.

    Trial streams depend only on (seed, grid index, trial index), and results
    are merged by index, so the outcome is identical for any worker count.
    With ``dump_dir`` every generated complex is also written there in the
    wire format, one file per (grid, trial) pair.
    """
    tasks = [(spec.template, v, gi, ti)
             for gi, v in enumerate(spec.grid) for ti in range(spec.trials)]
    outcomes: dict[tuple[int, int], tuple[bool | None, str | None]] = {}
    started = time.perf_counter()
    if workers > 1 and isinstance(spec.predicate, str):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            args = [t + (spec.predicate, dump_dir) for t in tasks]
            for gi, ti, ok, err in pool.map(_run_trial, args,
                                            chunksize=max(1, len(args) // (4 * workers))):
                outcomes[(gi, ti)] = (ok, err)
    else:
        for t in tasks:
            gi, ti, ok, err = _run_trial(t + (spec.predicate, dump_dir))
            outcomes[(gi, ti)] = (ok, err)
    elapsed = time.perf_counter() - started

    points = []
    for gi, v in enumerate(spec.grid):
        succ = comp = fail = 0
        for ti in range(spec.trials):
            ok, err = outcomes[(gi, ti)]
            if err is not None:
                fail += 1
                if log is not None:
                    log(f"trial ({gi},{ti}) failed: {err}")
            else:
                comp += 1
                succ += bool(ok)
        ph = succ / comp if comp else 0.0
        lo, hi = wilson_interval(succ, comp)
        points.append(SweepPoint(
            value=float(v), successes=succ, trials=comp, p_hat=ph,
            ci_low=lo, ci_high=hi, failures=fail,
            wall_clock=elapsed * comp / max(1, len(tasks)),
        ))
    return SweepResult(spec=spec, points=points)
