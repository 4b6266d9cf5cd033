"""Monte Carlo power curves over an (eps, mu2) grid.

Every grid cell draws ``reps`` samples of size ``n`` from
``(1 - eps) phi(x) + eps phi(x - mu2)`` and feeds the same sample to every
selected procedure, so differences between procedures are paired. A cell
with ``mu2 == 0`` is a null cell. Tables are calibrated once per procedure
and reused across the grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .dist import BaseDistribution, MixtureParams, draw_mixture, draw_pure
from .errors import DomainError
from .montecarlo import DEFAULT_BUDGET, check_alpha, check_budget, check_size
from .procedures import Table, calibrate_procedure, procedure_name
from .streams import DOMAIN_POWER, run_blocks, stream

CSV_HEADER = ("test", "eps", "mu2", "rejections", "reps", "power", "stderr")

#: ``sampler(params, shape, rng)``; ``params`` is None for a null cell
Sampler = Callable[[Optional[MixtureParams], tuple, np.random.Generator], np.ndarray]


def arithmetic_grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    """Inclusive grid ``start, start + step, ..., stop``."""
    if not step > 0 or stop < start:
        raise DomainError(f"bad grid start={start} stop={stop} step={step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding strips the drift of repeated float steps (0.1 * 3 -> 0.3)
    return tuple(round(start + i * step, 12) for i in range(count))


@dataclass(frozen=True)
class PowerExperiment:
    n: int
    eps_list: Sequence[float]
    mu_grid: Sequence[float]
    tests: Sequence[str]
    base: BaseDistribution = BaseDistribution.GAUSSIAN
    reps: int = 100_000
    alpha: float = 0.05
    seed: int = 0
    calibration_budget: int = DEFAULT_BUDGET
    hc_plugin_literal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "base", BaseDistribution.parse(self.base))
        object.__setattr__(self, "tests", tuple(procedure_name(t) for t in self.tests))
        object.__setattr__(self, "eps_list", tuple(float(e) for e in self.eps_list))
        object.__setattr__(self, "mu_grid", tuple(float(m) for m in self.mu_grid))
        check_size(self.n)
        check_alpha(self.alpha)
        check_budget(self.calibration_budget)
        if not (self.eps_list and self.mu_grid and self.tests):
            raise DomainError("eps list, mu2 grid and test list must all be nonempty")
        if len(set(self.tests)) != len(self.tests):
            raise DomainError("duplicate test names")
        if int(self.reps) != self.reps or self.reps < 100:
            raise DomainError(f"reps must be an integer >= 100, got {self.reps}")
        for e in self.eps_list:
            if not 0.0 < e < 1.0:
                raise DomainError(f"eps must lie in (0, 1), got {e}")
        for m in self.mu_grid:
            if m < 0 or not math.isfinite(m):
                raise DomainError(f"mu2 values must be finite and >= 0 (mu1 is 0), got {m}")

    @classmethod
    def from_config(cls, doc: dict) -> "PowerExperiment":
        """Build from the JSON config layout
        ``{n, base, alpha, eps, mu2: {start, stop, step}, tests, reps, seed,
        calibration_budget}``."""
        if not isinstance(doc, dict):
            raise DomainError("experiment config must be a JSON object")
        known = {"n", "base", "alpha", "eps", "mu2", "tests", "reps", "seed", "calibration_budget", "hc_plugin_literal"}
        extra = set(doc) - known
        if extra:
            raise DomainError(f"unknown config keys: {sorted(extra)}")
        try:
            mu = doc["mu2"]
            grid = arithmetic_grid(mu["start"], mu["stop"], mu["step"]) if isinstance(mu, dict) else mu
            return cls(
                n=doc["n"],
                base=doc.get("base", "gaussian"),
                alpha=doc.get("alpha", 0.05),
                eps_list=doc["eps"],
                mu_grid=grid,
                tests=doc["tests"],
                reps=doc.get("reps", 100_000),
                seed=doc.get("seed", 0),
                calibration_budget=doc.get("calibration_budget", DEFAULT_BUDGET),
                hc_plugin_literal=doc.get("hc_plugin_literal", False),
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed experiment config: {exc!r}") from None

    def to_config(self) -> dict:
        return {
            "n": self.n,
            "base": self.base.value,
            "alpha": self.alpha,
            "eps": list(self.eps_list),
            "mu2": list(self.mu_grid),
            "tests": list(self.tests),
            "reps": self.reps,
            "seed": self.seed,
            "calibration_budget": self.calibration_budget,
            "hc_plugin_literal": self.hc_plugin_literal,
        }


def load_experiment(path) -> PowerExperiment:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return PowerExperiment.from_config(doc)


@dataclass(frozen=True)
class PowerRow:
    test: str
    eps: float
    mu2: float
    rejections: int
    reps: int

    @property
    def power(self) -> float:
        return self.rejections / self.reps

    @property
    def stderr(self) -> float:
        p = self.power
        return math.sqrt(p * (1.0 - p) / self.reps)


@dataclass
class PowerGridResult:
    rows: list[PowerRow] = field(default_factory=list)

    def cell(self, test: str, eps: float, mu2: float) -> PowerRow:
        for r in self.rows:
            if r.test == test and r.eps == eps and r.mu2 == mu2:
                return r
        raise KeyError((test, eps, mu2))

    def curve(self, test: str, eps: float) -> list[PowerRow]:
        return [r for r in self.rows if r.test == test and r.eps == eps]


def default_sampler(base: BaseDistribution) -> Sampler:
    def sampler(params, shape, rng):
        if params is None:
            return draw_pure(base, 0.0, shape, rng)
        return draw_mixture(params, shape, rng)

    return sampler


def calibrate_experiment(e: PowerExperiment) -> dict[str, Table]:
    return {
        name: calibrate_procedure(
            name, e.n, e.base, e.alpha, e.calibration_budget, e.seed, hc_plugin_literal=e.hc_plugin_literal
        )
        for name in e.tests
    }


def paired_rejections(
    tables: Sequence[Table],
    params: Optional[MixtureParams],
    n: int,
    reps: int,
    seed: int,
    cell: int = 0,
    sampler: Optional[Sampler] = None,
) -> np.ndarray:
    """Boolean ``(reps, len(tables))`` matrix of decisions on shared samples.

    Row ``i`` holds every table's verdict on replicate ``i``; ``params=None``
    draws from the centred base density of the first table.
    """
    draw = sampler or default_sampler(tables[0].base)

    def block(b: int, m: int) -> np.ndarray:
        rng = stream(seed, DOMAIN_POWER, cell, b)
        x = np.array(draw(params, (m, n), rng), dtype=float)
        x.sort(axis=1)
        return np.column_stack([t.reject_batch(x) for t in tables])

    return np.concatenate(run_blocks(block, reps), axis=0)


def run_power_experiment(
    e: PowerExperiment,
    tables: Optional[dict[str, Table]] = None,
    sampler: Optional[Sampler] = None,
) -> PowerGridResult:
    """Empirical rejection counts for every (test, eps, mu2) cell.

    Pass ``tables`` to reuse calibrations across experiments; ``sampler``
    replaces the mixture draw (it must honour the ``rng`` it is handed for
    the result to stay reproducible).
    """
    if tables is None:
        tables = calibrate_experiment(e)
    missing = [t for t in e.tests if t not in tables]
    if missing:
        raise DomainError(f"no calibration table for {missing}")
    for name in e.tests:
        if tables[name].n != e.n:
            raise DomainError(f"table for {name} was calibrated at n={tables[name].n}, not {e.n}")
    draw = sampler or default_sampler(e.base)
    chosen = [tables[name] for name in e.tests]

    counts: dict[tuple[str, float, float], int] = {}
    cells = [(eps, mu2) for eps in e.eps_list for mu2 in e.mu_grid]
    for index, (eps, mu2) in enumerate(cells):
        params = None if mu2 == 0.0 else MixtureParams(eps, 0.0, mu2, e.base)
        hits = paired_rejections(chosen, params, e.n, e.reps, e.seed, index, draw).sum(axis=0)
        for name, h in zip(e.tests, hits):
            counts[(name, eps, mu2)] = int(h)

    rows = [
        PowerRow(name, eps, mu2, counts[(name, eps, mu2)], e.reps)
        for name in e.tests
        for eps, mu2 in cells
    ]
    return PowerGridResult(rows)


def _fmt(value: float) -> str:
    return repr(float(value))


def format_csv(result: PowerGridResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.rows:
        writer.writerow([r.test, _fmt(r.eps), _fmt(r.mu2), r.rejections, r.reps, _fmt(r.power), _fmt(r.stderr)])
    return buf.getvalue()


def export_csv(result: PowerGridResult, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(result))
    except OSError as exc:
        raise OSError(f"cannot write power table to {os.fspath(path)!r}: {exc.strerror or exc}") from exc


def parse_csv(text: str) -> PowerGridResult:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise DomainError(f"unexpected power CSV header {header!r}")
    rows = [PowerRow(t, float(e), float(m), int(k), int(n)) for t, e, m, k, n, *_ in reader]
    return PowerGridResult(rows)


def read_csv(path) -> PowerGridResult:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv(fh.read())
