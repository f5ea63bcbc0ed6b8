"""File formats: network JSON, categorical CSV, and JSON for learned/averaged results.

Network JSON::

    {"name": "chain3",
     "nodes": [
        {"name": "A", "levels": ["a0", "a1"], "parents": [], "cpt": [[0.3, 0.7]]},
        {"name": "B", "levels": ["b0", "b1"], "parents": ["A"],
         "cpt": [[0.9, 0.1], [0.2, 0.8]]}]}

Node order is declaration order and fixes the canonical node indices. ``cpt`` has
one row per parent configuration, row-major over ``parents`` in listed order
(last parent fastest), and one column per child level.

CSV: comma separated, UTF-8, one header row of variable names, cells are level
labels. Quoted cells, embedded commas and empty cells are rejected.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .data import DataError, Dataset, Variable
from .graph import Dag, NodeSet, enumerate_possible_edges
from .model import Cpt, DiscreteBayesNet, NetworkError
from .threshold import ConfidenceProfile, ThresholdReport

FIXTURES = ("chain3", "synthetic8")


# -- networks ----------------------------------------------------------------


def network_from_dict(doc: dict[str, Any]) -> DiscreteBayesNet:
    try:
        specs = doc["nodes"]
        names = [s["name"] for s in specs]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"network document needs nodes[].name ({exc})") from None
    nodes = NodeSet(names)
    variables, cpts, edges = [], [], set()
    for i, s in enumerate(specs):
        for key in ("levels", "cpt"):
            if key not in s:
                raise NetworkError(f"node {s['name']!r}: missing {key!r}")
        variables.append(Variable(s["name"], s["levels"]))
        try:
            parents = tuple(nodes.index(p) for p in s.get("parents", []))
        except KeyError as exc:
            raise NetworkError(f"node {s['name']!r}: {exc.args[0]}") from None
        edges.update((p, i) for p in parents)
        try:
            table = np.asarray(s["cpt"], dtype=float)
        except (TypeError, ValueError):
            raise NetworkError(f"node {s['name']!r}: cpt is not a rectangular numeric table") from None
        if table.ndim == 1:
            table = table[None, :]
        cpts.append(Cpt(i, parents, table))
    return DiscreteBayesNet(Dag(nodes, frozenset(edges)), variables, cpts)


def network_to_dict(net: DiscreteBayesNet, name: str | None = None) -> dict[str, Any]:
    names = net.nodes.names
    doc: dict[str, Any] = {}
    if name:
        doc["name"] = name
    doc["nodes"] = [
        {
            "name": v.name,
            "levels": list(v.levels),
            "parents": [names[p] for p in cpt.parents],
            "cpt": cpt.table.tolist(),
        }
        for v, cpt in zip(net.variables, net.cpts)
    ]
    return doc


def load_network(source: str | Path) -> DiscreteBayesNet:
    """Load a network JSON file, or a bundled fixture by name."""
    if str(source) in FIXTURES:
        text = resources.files("netavg.fixtures").joinpath(f"{source}.json").read_text()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return network_from_dict(doc)


# -- CSV ---------------------------------------------------------------------


def parse_csv(text: str, levels: dict[str, Iterable[str]] | None = None) -> Dataset:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise DataError("line 1: missing header row")
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            if lineno == len(lines):
                continue
            raise DataError(f"line {lineno}: empty line")
        if '"' in line or "'" in line:
            raise DataError(f"line {lineno}: quoted cells are not supported")
        rows.append([c.strip() for c in line.split(",")])
    header, body = rows[0], rows[1:]
    if any(not h for h in header):
        raise DataError("line 1: empty variable name in header")
    if len(set(header)) != len(header):
        raise DataError("line 1: duplicate variable names in header")
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise DataError(f"line {i}: expected {len(header)} fields, got {len(r)}")
        for j, c in enumerate(r):
            if not c:
                raise DataError(f"line {i}, column {header[j]!r}: missing value")
    if not body:
        raise DataError("no data rows")
    try:
        return Dataset.from_labels(header, body, levels)
    except DataError as exc:
        # from_labels counts data rows from 1; shift to file lines
        raise DataError(str(exc).replace("row ", "data row ")) from None


def read_csv(path: str | Path, levels: dict[str, Iterable[str]] | None = None) -> Dataset:
    return parse_csv(Path(path).read_text(encoding="utf-8"), levels)


def format_csv(data: Dataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_NONE, escapechar=None)
    w.writerow(data.names)
    w.writerows(data.labels())
    return buf.getvalue()


def write_csv(data: Dataset, path: str | Path) -> None:
    Path(path).write_text(format_csv(data), encoding="utf-8")


def levels_of(net: DiscreteBayesNet) -> dict[str, list[str]]:
    return {v.name: list(v.levels) for v in net.variables}


# -- results -----------------------------------------------------------------


def dag_to_dict(dag: Dag) -> dict[str, Any]:
    names = dag.nodes.names
    return {"nodes": list(names), "edges": [[names[u], names[v]] for u, v in dag.sorted_edges()]}


def dag_from_dict(doc: dict[str, Any]) -> Dag:
    return Dag.from_names(doc["nodes"], [tuple(e) for e in doc["edges"]])


def profile_to_dict(profile: ConfidenceProfile) -> dict[str, Any]:
    names = profile.nodes.names
    return {
        "nodes": list(names),
        "m": profile.m,
        "edges": [[names[u], names[v]] for u, v in profile.pairs],
        "p_hat": profile.p_hat.tolist(),
        "direction_counts": profile.direction_counts.tolist(),
    }


def profile_from_dict(doc: dict[str, Any]) -> ConfidenceProfile:
    nodes = NodeSet(doc["nodes"])
    if "edges" in doc:
        expected = [[nodes[u], nodes[v]] for u, v in enumerate_possible_edges(nodes)]
        if [list(e) for e in doc["edges"]] != expected:
            raise DataError("profile edges must be listed in canonical pair order")
    k = len(nodes) * (len(nodes) - 1) // 2
    counts = doc.get("direction_counts") or np.zeros((k, 2), dtype=np.int64)
    return ConfidenceProfile(nodes, int(doc.get("m", 0)), np.asarray(doc["p_hat"], float), np.asarray(counts))


def report_to_dict(report: ThresholdReport, nodes: NodeSet) -> dict[str, Any]:
    out = {
        "t_hat": report.t_hat,
        "cutoff": report.cutoff,
        "selected": [[nodes[u], nodes[v]] for u, v in report.sorted_selected()],
        "l1_value": report.l1_value,
        "method": report.method,
    }
    if report.details:
        out["details"] = report.details
    return out


def report_from_dict(doc: dict[str, Any], nodes: NodeSet) -> ThresholdReport:
    sel = frozenset(
        tuple(sorted((nodes.index(a), nodes.index(b)))) for a, b in doc["selected"]
    )
    return ThresholdReport(
        float(doc["t_hat"]), float(doc["cutoff"]), sel, float(doc["l1_value"]),
        doc["method"], doc.get("details", {}),
    )


def dumps(doc: Any) -> str:
    """Canonical JSON text used for every command output."""
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
