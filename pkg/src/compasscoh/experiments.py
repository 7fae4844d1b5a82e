"""Threshold-estimation harness: sweeps, crossing detection, ensembles.

A sweep evaluates a channel source over a (distance, theta) grid and emits
plot-ready rows; ``find_crossings`` automates the bounding procedure of
reading threshold estimates off intersecting distance curves: every sign
change of metric(d_next) - metric(d) across the swept grid is a crossing,
refined by bisection when the source can be re-evaluated exactly, and the
overall (lower, upper) bounds bracket every per-pair crossing.  Angles are
exchanged as theta/pi everywhere at this interface.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import families
from .codes import build_code, random_coloring
from .exact import MIN_WEIGHT, _check_recovery, get_backend
from .ptm import LogicalPTM, diamond_avg, kappa, r1

CSV_COLUMNS = ("family", "dx", "dz", "h", "q_shor", "seed", "theta_over_pi",
               "provenance", "epsilon", "delta", "kappa", "r1", "r1_stderr",
               "diamond", "diamond_stderr", "n_codes", "n_samples")

REFINE_TOL_OVER_PI = 0.001


@dataclass(frozen=True)
class SweepRow:
    family: str
    dx: int
    dz: int
    h: int | None
    q_shor: float | None
    seed: int | None
    theta_over_pi: float
    provenance: str
    epsilon: float
    delta: float
    kappa: float
    r1: float
    r1_stderr: float | None
    diamond: float | None
    diamond_stderr: float | None
    n_codes: int | None
    n_samples: int | None

    @property
    def distance(self) -> int:
        """Series-ordering parameter: the grown dimension of the family."""
        return self.dz if self.family == families.REPETITION else self.dx

    def metric(self, name: str) -> float:
        if name == "r1":
            return self.r1
        if name == "diamond":
            if self.diamond is None:
                raise ValueError("row has no diamond value")
            return self.diamond
        raise ValueError(f"metric must be 'r1' or 'diamond', got {name!r}")


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]

    def series(self) -> dict[int, list[SweepRow]]:
        out: dict[int, list[SweepRow]] = {}
        for row in self.rows:
            out.setdefault(row.distance, []).append(row)
        for rows in out.values():
            rows.sort(key=lambda r: r.theta_over_pi)
            thetas = [r.theta_over_pi for r in rows]
            if any(b <= a for a, b in zip(thetas, thetas[1:])):
                raise ValueError("theta grid must be strictly increasing per series")
        return out


@dataclass(frozen=True)
class PairCrossing:
    d_low: int
    d_high: int
    lo_over_pi: float
    hi_over_pi: float


@dataclass(frozen=True)
class ThresholdEstimate:
    """Crossing-derived threshold bounds; one-sided when the swept window
    saw no intersections (the bracketing grid edge is reported instead)."""

    metric: str
    crossings: tuple[PairCrossing, ...]
    lower_over_pi: float | None
    upper_over_pi: float | None

    @property
    def one_sided(self) -> bool:
        return not self.crossings


# ---------------------------------------------------------------------------
# Channel sources

class AnalyticFamilySource:
    """Closed-form family evaluated at square (or 1 x l) distances."""

    def __init__(self, family: str, recovery: str = MIN_WEIGHT, h: int | None = None):
        self.family = family
        self.recovery = _check_recovery(recovery)
        self.h = h
        if family == families.Z_STACKED and h is None:
            raise ValueError("zstacked source needs a block height h")
        if family not in (families.REPETITION, families.Z_SHOR, families.X_SHOR,
                          families.Z_STACKED):
            raise ValueError(f"unknown analytic family {family!r}")

    def dims(self, distance: int) -> tuple[int, int]:
        if self.family == families.REPETITION:
            return 1, distance
        return distance, distance

    def channel(self, distance: int, theta: float) -> LogicalPTM:
        d = distance
        if self.family == families.REPETITION:
            return families.repetition_exact(d, theta, self.recovery)
        if self.family == families.Z_SHOR:
            return families.z_shor_channel(d, d, theta, self.recovery)
        if self.family == families.X_SHOR:
            return families.x_shor_channel(d, d, theta)
        return families.z_stacked_channel(d, self.h, theta)

    def distribution(self, distance: int, theta: float):
        d = distance
        try:
            if self.family == families.REPETITION:
                return families.repetition_distribution(d, theta, self.recovery)
            if self.family == families.Z_SHOR:
                return families.z_shor_distribution(d, d, theta, self.recovery)
            if self.family == families.X_SHOR:
                return families.x_shor_distribution(d, d, theta)
            return families.z_stacked_distribution(d, self.h, theta)
        except ValueError:
            return None  # product form too large for exact convolution

    def rows(self, distance: int, thetas_over_pi) -> list[SweepRow]:
        dx, dz = self.dims(distance)
        out = []
        for top in thetas_over_pi:
            ch = self.channel(distance, top * math.pi)
            dist = self.distribution(distance, top * math.pi)
            out.append(SweepRow(
                family=self.family, dx=dx, dz=dz, h=self.h, q_shor=None, seed=None,
                theta_over_pi=top, provenance="analytic",
                epsilon=ch.epsilon, delta=ch.delta, kappa=kappa(ch), r1=r1(ch),
                r1_stderr=None,
                diamond=None if dist is None else diamond_avg(dist),
                diamond_stderr=None, n_codes=None, n_samples=None))
        return out

    def metric_fn(self, metric: str):
        def value(distance: int, theta_over_pi: float) -> float:
            theta = theta_over_pi * math.pi
            if metric == "r1":
                return r1(self.channel(distance, theta))
            dist = self.distribution(distance, theta)
            if dist is None:
                raise ValueError("diamond refinement unavailable for this family size")
            return diamond_avg(dist)
        return value


class CodeSource:
    """Exact-backend source over codes built per distance."""

    def __init__(self, name: str, builder, recovery: str = MIN_WEIGHT):
        self.family = name
        self.builder = builder
        self.recovery = _check_recovery(recovery)

    def rows(self, distance: int, thetas_over_pi) -> list[SweepRow]:
        code = self.builder(distance)
        backend = get_backend(code)
        out = []
        for top in thetas_over_pi:
            dist = backend.distribution(top * math.pi, self.recovery)
            ch = backend.channel(top * math.pi, self.recovery)
            out.append(SweepRow(
                family=self.family, dx=code.d_x, dz=code.d_z, h=None,
                q_shor=code.coloring.x_fraction, seed=None,
                theta_over_pi=top, provenance="exact",
                epsilon=ch.epsilon, delta=ch.delta, kappa=kappa(ch), r1=r1(ch),
                r1_stderr=None, diamond=diamond_avg(dist), diamond_stderr=None,
                n_codes=None, n_samples=None))
        return out

    def metric_fn(self, metric: str):
        def value(distance: int, theta_over_pi: float) -> float:
            backend = get_backend(self.builder(distance))
            if metric == "r1":
                return r1(backend.channel(theta_over_pi * math.pi, self.recovery))
            return diamond_avg(backend.distribution(theta_over_pi * math.pi,
                                                    self.recovery))
        return value


def sweep(source, thetas_over_pi, distances) -> SweepTable:
    """One row per (distance, theta); deterministic given the source seeds."""
    thetas = [float(t) for t in thetas_over_pi]
    if not thetas or not list(distances):
        raise ValueError("sweep needs a non-empty theta grid and distance list")
    rows: list[SweepRow] = []
    for d in distances:
        rows.extend(source.rows(d, thetas))
    return SweepTable(tuple(rows))


# ---------------------------------------------------------------------------
# Crossing detection

def _bisect_crossing(diff, lo: float, hi: float, f_lo: float, f_hi: float,
                     tol: float) -> tuple[float, float]:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if f_mid == 0.0:
            return mid, mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo, hi


def find_crossings(table: SweepTable, metric: str = "r1", source=None,
                   tol_over_pi: float = REFINE_TOL_OVER_PI) -> ThresholdEstimate:
    """Locate metric crossings between consecutive distance curves.

    With a re-evaluatable ``source`` each grid sign change is refined by
    bisection to width <= ``tol_over_pi``; sampled tables keep the grid
    cell as the crossing interval.  Bounds are the (min, max) over every
    crossing; without any crossing the estimate is one-sided at the grid
    edge that bounds the threshold.
    """
    series = table.series()
    distances = sorted(series)
    if len(distances) < 2:
        raise ValueError("crossing detection needs at least two distances")
    grids = [tuple(r.theta_over_pi for r in series[d]) for d in distances]
    if len(set(grids)) != 1:
        raise ValueError("all distance series must share one theta grid")
    thetas = grids[0]

    refine = source.metric_fn(metric) if source is not None else None
    crossings: list[PairCrossing] = []
    all_positive = True
    all_negative = True
    for d1, d2 in zip(distances, distances[1:]):
        v1 = [row.metric(metric) for row in series[d1]]
        v2 = [row.metric(metric) for row in series[d2]]
        g = [b - a for a, b in zip(v1, v2)]
        all_positive &= all(x > 0 for x in g)
        all_negative &= all(x < 0 for x in g)
        for i in range(len(thetas) - 1):
            if g[i] == 0.0:
                crossings.append(PairCrossing(d1, d2, thetas[i], thetas[i]))
            elif g[i] * g[i + 1] < 0.0:
                lo, hi = thetas[i], thetas[i + 1]
                if refine is not None:
                    diff = lambda t: refine(d2, t) - refine(d1, t)
                    lo, hi = _bisect_crossing(diff, lo, hi, g[i], g[i + 1],
                                              tol_over_pi)
                crossings.append(PairCrossing(d1, d2, lo, hi))
        if g[-1] == 0.0:
            crossings.append(PairCrossing(d1, d2, thetas[-1], thetas[-1]))

    if crossings:
        return ThresholdEstimate(metric, tuple(crossings),
                                 min(c.lo_over_pi for c in crossings),
                                 max(c.hi_over_pi for c in crossings))
    if all_positive:  # increasing with distance everywhere: threshold below grid
        return ThresholdEstimate(metric, (), None, thetas[0])
    if all_negative:  # suppressed everywhere: threshold above grid
        return ThresholdEstimate(metric, (), thetas[-1], None)
    return ThresholdEstimate(metric, (), None, None)


# ---------------------------------------------------------------------------
# Monte Carlo estimators

@dataclass(frozen=True)
class SampleEstimate:
    mean_r1: float
    r1_stderr: float
    mean_diamond: float
    diamond_stderr: float
    n_samples: int


def sample_distribution(dist, n_samples: int, seed) -> SampleEstimate:
    """Monte Carlo estimate of (r1, diamond) from an exact distribution.

    Draws syndromes with probability p_s and scores (1 - cos theta_s)/3 and
    2|sin theta_s|; reports sample means and standard errors of the mean.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    rng = np.random.default_rng(seed)
    p = np.asarray(dist.p, dtype=float)
    idx = rng.choice(len(p), size=n_samples, p=p / p.sum())
    theta_s = np.asarray(dist.theta_s, dtype=float)[idx]
    r1_scores = (1.0 - np.cos(theta_s)) / 3.0
    dia_scores = 2.0 * np.abs(np.sin(theta_s))
    return SampleEstimate(
        mean_r1=float(r1_scores.mean()),
        r1_stderr=float(r1_scores.std(ddof=1) / math.sqrt(n_samples)),
        mean_diamond=float(dia_scores.mean()),
        diamond_stderr=float(dia_scores.std(ddof=1) / math.sqrt(n_samples)),
        n_samples=n_samples)


@dataclass(frozen=True)
class EnsembleResult:
    mean_r1: float
    r1_stderr: float
    mean_diamond: float
    diamond_stderr: float
    code_r1: tuple[float, ...]
    code_diamond: tuple[float, ...]
    mean_q_shor: float
    shot_r1_variance: float
    shot_diamond_variance: float
    n_codes: int
    n_samples: int | None


def _ensemble_task(args):
    d_x, d_z, q_shor, theta, recovery, n_samples, code_seed, sample_seed = args
    coloring = random_coloring(d_x, d_z, q_shor, code_seed)
    backend = get_backend(build_code(coloring))
    dist = backend.distribution(theta, recovery)
    if n_samples is None:
        ch = backend.channel(theta, recovery)
        return r1(ch), diamond_avg(dist), coloring.x_fraction, 0.0, 0.0
    est = sample_distribution(dist, n_samples, sample_seed)
    return (est.mean_r1, est.mean_diamond, coloring.x_fraction,
            est.r1_stderr ** 2, est.diamond_stderr ** 2)


def ensemble_estimate(d_x: int, d_z: int, q_shor: float, n_codes: int,
                      theta: float, seed: int, recovery: str = MIN_WEIGHT,
                      n_samples: int | None = None, jobs: int = 1) -> EnsembleResult:
    """Mean logical metrics over random colorings of density ``q_shor``.

    Each code gets its own seed stream (split per code index, so results do
    not depend on execution order or ``jobs``).  Per-code metrics are exact
    when ``n_samples`` is None, otherwise Monte Carlo; the reported stderr
    is the ensemble standard error of the per-code means, with the shot
    contribution also exposed separately.
    """
    _check_recovery(recovery)
    if n_codes < 1:
        raise ValueError("need at least one code")
    tasks = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(n_codes)):
        code_seed, sample_seed = (int(x) for x in child.generate_state(2))
        tasks.append((d_x, d_z, q_shor, theta, recovery, n_samples,
                      code_seed, sample_seed))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_ensemble_task, tasks, chunksize=8))
    else:
        results = [_ensemble_task(t) for t in tasks]

    r1s = np.array([res[0] for res in results])
    dias = np.array([res[1] for res in results])
    qs = np.array([res[2] for res in results])
    shot_r1 = float(np.mean([res[3] for res in results]))
    shot_dia = float(np.mean([res[4] for res in results]))

    def sem(vals):
        if len(vals) < 2 or vals.max() == vals.min():
            return 0.0
        return float(vals.std(ddof=1) / math.sqrt(len(vals)))

    return EnsembleResult(
        mean_r1=float(r1s.mean()), r1_stderr=sem(r1s),
        mean_diamond=float(dias.mean()), diamond_stderr=sem(dias),
        code_r1=tuple(float(x) for x in r1s),
        code_diamond=tuple(float(x) for x in dias),
        mean_q_shor=float(qs.mean()),
        shot_r1_variance=shot_r1, shot_diamond_variance=shot_dia,
        n_codes=n_codes, n_samples=n_samples)


class EnsembleSource:
    """Sampled random-coloring source for sweeps (square d x d grids)."""

    def __init__(self, q_shor: float, n_codes: int, seed: int,
                 recovery: str = MIN_WEIGHT, n_samples: int | None = None,
                 jobs: int = 1):
        self.q_shor = q_shor
        self.n_codes = n_codes
        self.seed = seed
        self.recovery = _check_recovery(recovery)
        self.n_samples = n_samples
        self.jobs = jobs

    def rows(self, distance: int, thetas_over_pi) -> list[SweepRow]:
        out = []
        for top in thetas_over_pi:
            # cell seed derived from (seed, distance, theta) so any row can be
            # regenerated in isolation from its own fields
            cell_seed = int(np.random.SeedSequence(
                self.seed,
                spawn_key=(distance, int(round(top * 1e9)) & 0xFFFFFFFF),
            ).generate_state(1)[0])
            res = ensemble_estimate(distance, distance, self.q_shor, self.n_codes,
                                    top * math.pi, cell_seed, self.recovery,
                                    self.n_samples, self.jobs)
            out.append(SweepRow(
                family="random", dx=distance, dz=distance, h=None,
                q_shor=self.q_shor, seed=self.seed, theta_over_pi=top,
                provenance="sampled", epsilon=3.0 * res.mean_r1, delta=math.nan,
                kappa=math.nan, r1=res.mean_r1, r1_stderr=res.r1_stderr,
                diamond=res.mean_diamond, diamond_stderr=res.diamond_stderr,
                n_codes=res.n_codes, n_samples=res.n_samples))
        return out


def interpolation_curve(distances, q_shors, thetas_over_pi, n_codes: int,
                        seed: int, recovery: str = MIN_WEIGHT,
                        n_samples: int | None = None, jobs: int = 1):
    """Ensemble sweeps per q_shor with grid-level threshold estimates."""
    tables: list[SweepTable] = []
    estimates: dict[float, ThresholdEstimate] = {}
    for q in q_shors:
        src = EnsembleSource(q, n_codes, seed, recovery, n_samples, jobs)
        tab = sweep(src, thetas_over_pi, distances)
        tables.append(tab)
        if len(list(distances)) >= 2:
            estimates[q] = find_crossings(tab, "r1")
    merged = SweepTable(tuple(row for tab in tables for row in tab.rows))
    return merged, estimates


# ---------------------------------------------------------------------------
# CSV / JSON serialization

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(table: SweepTable, path, config: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write("# " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in table.rows:
            writer.writerow([_cell(getattr(row, col)) for col in CSV_COLUMNS])


def _parse(value: str, typ):
    if value == "":
        return None
    return typ(value)


def read_csv(path) -> SweepTable:
    rows = []
    with open(path) as fh:
        content = [line for line in fh if not line.startswith("#")]
    for rec in csv.DictReader(io.StringIO("".join(content))):
        rows.append(SweepRow(
            family=rec["family"], dx=int(rec["dx"]), dz=int(rec["dz"]),
            h=_parse(rec["h"], int), q_shor=_parse(rec["q_shor"], float),
            seed=_parse(rec["seed"], int),
            theta_over_pi=float(rec["theta_over_pi"]),
            provenance=rec["provenance"], epsilon=float(rec["epsilon"]),
            delta=float(rec["delta"]), kappa=float(rec["kappa"]),
            r1=float(rec["r1"]), r1_stderr=_parse(rec["r1_stderr"], float),
            diamond=_parse(rec["diamond"], float),
            diamond_stderr=_parse(rec["diamond_stderr"], float),
            n_codes=_parse(rec["n_codes"], int),
            n_samples=_parse(rec["n_samples"], int)))
    return SweepTable(tuple(rows))


def table_to_json(table: SweepTable, config: dict | None = None) -> str:
    payload = {"rows": [{col: getattr(row, col) for col in CSV_COLUMNS}
                        for row in table.rows]}
    if config is not None:
        payload["config"] = config
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True)


def source_for_rows(table: SweepTable):
    """Rebuild an analytic source from named-family rows, for refinement."""
    families_present = {row.family for row in table.rows}
    if len(families_present) != 1:
        return None
    fam = families_present.pop()
    if fam not in (families.REPETITION, families.Z_SHOR, families.X_SHOR,
                   families.Z_STACKED):
        return None
    if any(row.provenance != "analytic" for row in table.rows):
        return None
    hs = {row.h for row in table.rows}
    return AnalyticFamilySource(fam, MIN_WEIGHT, hs.pop() if len(hs) == 1 else None)
