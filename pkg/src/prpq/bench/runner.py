"""Benchmark runner: one CSV row per (query instance, algorithm)."""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, TextIO, Union

from ..eval import EvalOptions, evaluate
from ..graph import PropertyGraph, load_graph_file
from ..query import parse_query
from .graphgen import GraphGenSpec, gen_graph
from .templates import CATEGORY, TemplateId, instantiate_template

HEADER = (
    "dataset", "qtemplate", "dtemplate", "category", "algo", "answer",
    "time_ms", "oracle_calls", "states_expanded", "timed_out", "error",
)


@dataclass
class SuiteEntry:
    dataset: str
    graph: Union[GraphGenSpec, str, PropertyGraph]
    templates: Sequence[TemplateId]
    repetitions: int = 1
    algorithms: Sequence[str] = ("optimized",)
    timeout: float = 10.0
    seed: int = 0

    def load(self) -> PropertyGraph:
        if isinstance(self.graph, PropertyGraph):
            return self.graph
        if isinstance(self.graph, GraphGenSpec):
            return gen_graph(self.graph)
        return load_graph_file(self.graph)


def _templates(spec) -> list[TemplateId]:
    if isinstance(spec, dict):
        return [TemplateId(q, d) for q in spec["q"] for d in spec["d"]]
    return [t if isinstance(t, TemplateId) else TemplateId.parse(t) for t in spec]


def load_suite(text: str) -> list[SuiteEntry]:
    """Suite file: JSON list of entries (or ``{"entries": [...]}``)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid suite file: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("entries", [])
    if not isinstance(data, list):
        raise ValueError("suite must be a list of entries")
    out = []
    for i, e in enumerate(data):
        try:
            graph = e["graph"]
            graph = graph if isinstance(graph, str) else GraphGenSpec.from_dict(graph)
            out.append(SuiteEntry(
                dataset=e.get("dataset", f"d{i}"),
                graph=graph,
                templates=_templates(e["templates"]),
                repetitions=int(e.get("repetitions", 1)),
                algorithms=tuple(e.get("algorithms", ("optimized",))),
                timeout=float(e.get("timeout", 10.0)),
                seed=int(e.get("seed", 0)),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"suite entry {i}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# running

_GRAPHS: dict[str, PropertyGraph] = {}


def _init_worker(graphs: dict) -> None:
    _GRAPHS.update(graphs)


def _run_one(task) -> dict:
    dataset, t, qtext, algo, timeout = task
    row = {
        "dataset": dataset, "qtemplate": t.q if t else "", "dtemplate": t.d if t else "",
        "category": CATEGORY.get(t.q, "") if t else "", "algo": algo, "answer": "",
        "time_ms": "", "oracle_calls": "", "states_expanded": "", "timed_out": "false", "error": "",
    }
    if qtext is None:
        row["error"] = "template instantiation failed"
        return row
    try:
        g = _GRAPHS[dataset]
        query = parse_query(qtext)
        opts = EvalOptions(algorithm=algo, timeout=timeout)
        t0 = time.perf_counter()
        res = evaluate(g, query, opts)
        elapsed = (time.perf_counter() - t0) * 1000.0
    except Exception as exc:  # recorded per row, the run goes on
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
        return row
    row["time_ms"] = f"{elapsed:.3f}"
    row["oracle_calls"] = str(res.stats.oracle_calls)
    row["states_expanded"] = str(res.stats.states_expanded)
    if res.stats.timed_out:
        row["timed_out"] = "true"
    else:
        row["answer"] = "true" if res.answer else "false"
    return row


def _tasks(suite: Iterable[SuiteEntry]) -> Iterator[tuple]:
    for entry in suite:
        g = _GRAPHS[entry.dataset]
        for t in entry.templates:
            for rep in range(entry.repetitions):
                try:
                    qtext = instantiate_template(t, g, entry.seed + rep)
                except ValueError:
                    qtext = None
                for algo in entry.algorithms:
                    yield entry.dataset, t, qtext, algo, entry.timeout


def iter_bench(suite: Sequence[SuiteEntry], jobs: int = 1) -> Iterator[dict]:
    """Rows in a deterministic order, yielded as they complete."""
    _GRAPHS.clear()
    for entry in suite:
        if entry.dataset not in _GRAPHS:
            _GRAPHS[entry.dataset] = entry.load()
    tasks = _tasks(suite)
    if jobs <= 1:
        for task in tasks:
            yield _run_one(task)
        return
    graphs = {e.dataset: _GRAPHS[e.dataset] for e in suite}
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(graphs,)) as pool:
        yield from pool.map(_run_one, tasks)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    if len(xs) < 2:
        return None
    try:
        return statistics.correlation(xs, ys)
    except statistics.StatisticsError:  # constant input
        return None


def summary_lines(rows: Sequence[dict]) -> list[str]:
    lines = [f"#summary,rows={len(rows)}"]
    for algo in sorted({r["algo"] for r in rows}):
        mine = [r for r in rows if r["algo"] == algo]
        done = [r for r in mine if r["time_ms"] and r["timed_out"] == "false"]
        times = [float(r["time_ms"]) for r in done]
        calls = [float(r["oracle_calls"]) for r in done]
        median = f"{statistics.median(times):.3f}" if times else "nan"
        r = pearson(times, calls)
        lines.append(
            f"#summary,algo={algo},rows={len(mine)}"
            f",true={sum(x['answer'] == 'true' for x in mine)}"
            f",false={sum(x['answer'] == 'false' for x in mine)}"
            f",timeouts={sum(x['timed_out'] == 'true' for x in mine)}"
            f",errors={sum(bool(x['error']) for x in mine)}"
            f",median_ms={median}"
            f",pearson_time_oracle_calls={'nan' if r is None else f'{r:.4f}'}"
        )
    return lines


def write_bench(suite: Sequence[SuiteEntry], out: TextIO, jobs: int = 1) -> list[dict]:
    writer = csv.DictWriter(out, fieldnames=HEADER, lineterminator="\n")
    writer.writeheader()
    rows = []
    for row in iter_bench(suite, jobs):
        writer.writerow(row)
        out.flush()
        rows.append(row)
    for line in summary_lines(rows):
        out.write(line + "\n")
    return rows


def run_bench(suite: Sequence[SuiteEntry], jobs: int = 1) -> str:
    buf = io.StringIO()
    write_bench(suite, buf, jobs)
    return buf.getvalue()


def read_rows(text: str) -> list[dict]:
    lines = [l for l in text.splitlines() if not l.startswith("#summary")]
    return list(csv.DictReader(lines))
