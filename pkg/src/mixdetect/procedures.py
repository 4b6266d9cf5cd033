"""One name per test procedure, plus table persistence.

Names: ``spacing``, ``contamination``, ``variance``, ``hc_known``,
``hc_plugin``, ``ks_known``, ``ks_plugin``. Hyphenated spellings are
accepted everywhere.
"""

from __future__ import annotations

import json
import os
from typing import Union

from .baselines import BaselineKind, BaselineTable, calibrate_baseline, run_baseline
from .decision import TestDecision
from .dist import BaseDistribution
from .errors import DomainError
from .montecarlo import DEFAULT_BUDGET
from .spacing import CalibrationTable, Variant, calibrate, run_test
from .variance import VarianceTable, calibrate_variance, run_variance_test

Table = Union[CalibrationTable, VarianceTable, BaselineTable]

PROCEDURES = ("spacing", "contamination", "variance", "hc_known", "hc_plugin", "ks_known", "ks_plugin")

#: procedures whose decision does not depend on the (unknown) null location
LOCATION_FREE = ("spacing", "variance", "hc_plugin", "ks_plugin")

_SCHEMAS = {cls.schema: cls for cls in (CalibrationTable, VarianceTable, BaselineTable)}


def procedure_name(name: str) -> str:
    key = str(name).lower().replace("-", "_")
    if key not in PROCEDURES:
        raise DomainError(f"unknown test procedure {name!r}; choose from {', '.join(PROCEDURES)}")
    return key


def calibrate_procedure(
    name: str,
    n: int,
    base=BaseDistribution.GAUSSIAN,
    alpha: float = 0.05,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    hc_plugin_literal: bool = False,
) -> Table:
    name = procedure_name(name)
    if name in ("spacing", "contamination"):
        return calibrate(n, base, alpha, budget, seed, Variant.parse(name))
    if name == "variance":
        return calibrate_variance(n, base, alpha, budget, seed)
    return calibrate_baseline(name, n, base, alpha, budget, seed, literal=hc_plugin_literal)


def table_procedure(table: Table) -> str:
    if isinstance(table, CalibrationTable):
        return "spacing" if table.variant is Variant.SPACING else "contamination"
    if isinstance(table, VarianceTable):
        return "variance"
    return table.statistic_kind.value


def run_procedure(sample, table: Table) -> TestDecision:
    if isinstance(table, CalibrationTable):
        return run_test(sample, table)
    if isinstance(table, VarianceTable):
        return run_variance_test(sample, table)
    return run_baseline(sample, table)


def table_summary(table: Table) -> dict:
    out = {"procedure": table_procedure(table), "n": table.n, "alpha": table.alpha}
    if isinstance(table, CalibrationTable):
        out["alpha_n"] = table.alpha_n
    elif isinstance(table, VarianceTable):
        out["threshold"] = table.v_alpha_n
    else:
        out["threshold"] = table.threshold
    return out


def dumps_table(table: Table) -> str:
    # json renders floats with repr, which round-trips exactly
    return json.dumps(table.to_dict(), indent=2) + "\n"


def loads_table(text: str) -> Table:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise DomainError("a table document must be a JSON object")
    schema = doc.get("schema")
    if schema not in _SCHEMAS:
        raise DomainError(f"unrecognised table schema {schema!r}")
    return _SCHEMAS[schema].from_dict(doc)


def save_table(table: Table, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_table(table))


def load_table(path: Union[str, os.PathLike]) -> Table:
    with open(path, encoding="utf-8") as fh:
        return loads_table(fh.read())


__all__ = [
    "BaselineKind",
    "LOCATION_FREE",
    "PROCEDURES",
    "Table",
    "calibrate_procedure",
    "dumps_table",
    "load_table",
    "loads_table",
    "procedure_name",
    "run_procedure",
    "save_table",
    "table_procedure",
    "table_summary",
]
