"""Response parsing, exact-accuracy scoring, and the evaluation matrix.

Scoring is single-threaded over gateway-delivered results. Every method
answers the same fixed task instances per graph, so table cells are
directly comparable. Unparseable responses count as incorrect rather
than being excluded, keeping denominators identical across methods.
"""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .gateway import Gateway, Model
from .generators import GraphRecord, Shape
from .linearize import Labeling, LinearizationSpec, LinearizedGraph, linearize
from .prompts import PromptRecord, Shots, render_prompt
from .tasks import EXISTENCE_TASKS, NUMERIC_TASKS, TaskInstance, TaskKind

UNPARSEABLE = None

_INT_RE = re.compile(r"-?\d+")
_YESNO_RE = re.compile(r"\b(yes|no)\b", re.IGNORECASE)
_SHAPE_RE = re.compile("|".join(s.value for s in Shape), re.IGNORECASE)


class EmptyInputError(ValueError):
    pass


def parse_answer(kind: TaskKind, raw: str) -> Union[int, str, None]:
    """Extract the answer from a raw model response.

    Numeric tasks take the first integer, existence tasks the first
    yes/no word, motif classification the first shape name. Returns
    ``None`` (scored incorrect) when nothing matches. Never raises.
    """
    kind = TaskKind(kind)
    text = raw if isinstance(raw, str) else str(raw)
    if kind in NUMERIC_TASKS:
        match = _INT_RE.search(text)
        return int(match.group()) if match else UNPARSEABLE
    if kind in EXISTENCE_TASKS:
        match = _YESNO_RE.search(text)
        return match.group().lower() if match else UNPARSEABLE
    match = _SHAPE_RE.search(text)
    return match.group().lower() if match else UNPARSEABLE


def is_correct(inst: TaskInstance, parsed: Union[int, str, None]) -> bool:
    if parsed is UNPARSEABLE:
        return False
    return parsed in inst.truth_set()


@dataclass
class EvalRecord:
    instance: TaskInstance
    method: str
    shots: Shots
    raw: str
    parsed: Union[int, str, None]
    correct: bool


def exact_accuracy(records: Sequence[EvalRecord]) -> float:
    if not records:
        raise EmptyInputError("cannot score an empty record set")
    return sum(r.correct for r in records) / len(records)


@dataclass
class Cell:
    accuracy: float
    n_instances: int
    seeds: Tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"accuracy": self.accuracy, "n_instances": self.n_instances,
                "seeds": list(self.seeds)}


@dataclass
class Row:
    label: str
    labeling: str
    linegraph: bool
    cells: Dict[Tuple[str, str], Cell] = field(default_factory=dict)

    def average(self, shots: str) -> Optional[float]:
        vals = [c.accuracy for (task, sh), c in self.cells.items() if sh == shots]
        return sum(vals) / len(vals) if vals else None


@dataclass
class ResultsTable:
    rows: List[Row]
    baseline: Optional[Row]
    tasks: List[str]
    shots: List[str]
    metadata: dict = field(default_factory=dict)

    def all_rows(self) -> List[Row]:
        return self.rows + ([self.baseline] if self.baseline else [])


def task_list(records: Sequence[GraphRecord]) -> List[TaskKind]:
    """Task kinds present in every record of the dataset."""
    kinds = [k for k in TaskKind
             if all(k.value in rec.tasks for rec in records)]
    return kinds


def split_exemplar(records: Sequence[GraphRecord]
                   ) -> Tuple[Optional[GraphRecord], List[GraphRecord]]:
    exemplar = next((r for r in records if r.one_shot_exemplar), None)
    rest = [r for r in records if r is not exemplar]
    return exemplar, rest


def _linearize_all(records: Sequence[GraphRecord],
                   spec: LinearizationSpec) -> Dict[str, LinearizedGraph]:
    return {rec.id: linearize(rec.graph, spec, rec.default_edge_order)
            for rec in records}


def evaluate_cell(records: Sequence[GraphRecord], lgs: Dict[str, LinearizedGraph],
                  task: TaskKind, shots: Shots, gateway: Gateway,
                  method_label: str,
                  exemplar: Optional[GraphRecord] = None) -> List[EvalRecord]:
    """Score one (method, task, shots) cell over the given records."""
    shots = Shots(shots)
    ex_pair = None
    if shots is Shots.ONE:
        if exemplar is None:
            raise EmptyInputError("one-shot evaluation needs an exemplar record")
        ex_pair = (exemplar.tasks[task.value], lgs[exemplar.id])

    items: List[Tuple[PromptRecord, TaskInstance]] = []
    for rec in records:
        inst = rec.tasks[task.value]
        prompt = render_prompt(inst, lgs[rec.id], shots, ex_pair)
        items.append((prompt, inst))
    responses = gateway.run(items)

    out = []
    for (prompt, inst), resp in zip(items, responses):
        parsed = parse_answer(task, resp.text)
        out.append(EvalRecord(instance=inst, method=method_label, shots=shots,
                              raw=resp.text, parsed=parsed,
                              correct=is_correct(inst, parsed)))
    return out


def _checkpoint_path(directory: str, label: str, task: str, shots: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9_.-]", "_", f"{label}__{task}__{shots}")
    return os.path.join(directory, safe + ".json")


def run_matrix(records: Sequence[GraphRecord],
               methods: Sequence[LinearizationSpec],
               model: Model,
               shots: Sequence[Shots] = (Shots.ZERO, Shots.ONE),
               tasks: Optional[Sequence[TaskKind]] = None,
               baseline_seed: Optional[int] = None,
               baseline_runs: int = 5,
               gateway: Optional[Gateway] = None,
               checkpoint_dir: Optional[str] = None) -> ResultsTable:
    """Evaluate every (method, task, shots) cell plus the random baseline.

    The baseline cell is the mean accuracy over ``baseline_runs``
    consecutive seeds starting at ``baseline_seed`` (skipped when None).
    Completed cells are checkpointed to ``checkpoint_dir`` and reloaded
    on rerun, so interrupted runs resume without duplicate model calls.
    """
    gateway = gateway or Gateway(model)
    exemplar, eval_records = split_exemplar(records)
    if exemplar is None and any(Shots(s) is Shots.ONE for s in shots):
        raise EmptyInputError("dataset has no one-shot exemplar record")
    tasks = list(tasks) if tasks else task_list(records)
    shots = [Shots(s) for s in shots]
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)

    def cached_cell(label: str, task: TaskKind, sh: Shots, compute) -> Cell:
        if checkpoint_dir:
            path = _checkpoint_path(checkpoint_dir, label, task.value, sh.value)
            if os.path.exists(path):
                with open(path, encoding="utf-8") as fh:
                    obj = json.load(fh)
                return Cell(obj["accuracy"], obj["n_instances"],
                            tuple(obj.get("seeds", [])))
        cell = compute()
        if checkpoint_dir:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(cell.to_json(), fh)
        return cell

    rows = []
    for spec in methods:
        label = spec.method_label()
        lgs = _linearize_all(records, spec)
        row = Row(label=label, labeling=spec.labeling.value,
                  linegraph=spec.via_linegraph)
        for task in tasks:
            for sh in shots:
                def compute(task=task, sh=sh):
                    recs = evaluate_cell(eval_records, lgs, task, sh, gateway,
                                         label, exemplar)
                    return Cell(exact_accuracy(recs), len(recs), (spec.seed,))
                row.cells[(task.value, sh.value)] = cached_cell(
                    f"{label}_{spec.labeling.value}", task, sh, compute)
        rows.append(row)

    baseline = None
    if baseline_seed is not None:
        seeds = tuple(range(baseline_seed, baseline_seed + baseline_runs))
        baseline = Row(label="Baseline", labeling=Labeling.RANDOM_LABELS.value,
                       linegraph=False)
        per_seed_lgs = {
            s: _linearize_all(records, LinearizationSpec(
                ordering="random", labeling="random_labels", seed=s))
            for s in seeds}
        for task in tasks:
            for sh in shots:
                def compute(task=task, sh=sh):
                    accs = []
                    n = 0
                    for s in seeds:
                        recs = evaluate_cell(eval_records, per_seed_lgs[s],
                                             task, sh, gateway, "Baseline",
                                             exemplar)
                        accs.append(exact_accuracy(recs))
                        n = len(recs)
                    return Cell(sum(accs) / len(accs), n, seeds)
                baseline.cells[(task.value, sh.value)] = cached_cell(
                    "Baseline", task, sh, compute)

    return ResultsTable(rows=rows, baseline=baseline,
                        tasks=[t.value for t in tasks],
                        shots=[s.value for s in shots],
                        metadata={"model": model.name,
                                  "n_records": len(eval_records),
                                  "exemplar": exemplar.id if exemplar else None})


# -- Report emission ---------------------------------------------------------

CSV_FIELDS = ["method", "labeling", "linegraph", "task", "shots",
              "n_instances", "accuracy", "seeds"]


def write_csv(table: ResultsTable, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in table.all_rows():
            for (task, sh), cell in sorted(row.cells.items()):
                writer.writerow({
                    "method": row.label, "labeling": row.labeling,
                    "linegraph": int(row.linegraph), "task": task, "shots": sh,
                    "n_instances": cell.n_instances,
                    "accuracy": repr(cell.accuracy),
                    "seeds": " ".join(map(str, cell.seeds)),
                })


def read_csv(path: str) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def table_from_csv(rows: List[dict], metadata: Optional[dict] = None) -> ResultsTable:
    """Rebuild a ResultsTable from CSV rows (lossless round-trip)."""
    by_key: Dict[Tuple[str, str, bool], Row] = {}
    tasks: List[str] = []
    shots: List[str] = []
    order: List[Tuple[str, str, bool]] = []
    for r in rows:
        key = (r["method"], r["labeling"], bool(int(r["linegraph"])))
        if key not in by_key:
            by_key[key] = Row(label=key[0], labeling=key[1], linegraph=key[2])
            order.append(key)
        seeds = tuple(int(s) for s in r["seeds"].split()) if r["seeds"] else ()
        by_key[key].cells[(r["task"], r["shots"])] = Cell(
            float(r["accuracy"]), int(r["n_instances"]), seeds)
        if r["task"] not in tasks:
            tasks.append(r["task"])
        if r["shots"] not in shots:
            shots.append(r["shots"])
    baseline = None
    method_rows = []
    for key in order:
        if key[0] == "Baseline":
            baseline = by_key[key]
        else:
            method_rows.append(by_key[key])
    return ResultsTable(rows=method_rows, baseline=baseline, tasks=tasks,
                        shots=shots, metadata=metadata or {})


def _marks(table: ResultsTable) -> Tuple[set, set]:
    """Cells to underline (best within labeling group) and bold (best per
    task/shots overall). Ties mark every tied cell. Keys are
    (row label, labeling, task, shots)."""
    underline, bold = set(), set()
    eps = 1e-12
    for task in table.tasks:
        for sh in table.shots:
            groups: Dict[str, List[Row]] = {}
            for row in table.rows:
                groups.setdefault(row.labeling, []).append(row)
            overall_best = None
            for labeling, rows in groups.items():
                vals = [r.cells[(task, sh)].accuracy for r in rows
                        if (task, sh) in r.cells]
                if not vals:
                    continue
                best = max(vals)
                overall_best = best if overall_best is None else max(overall_best, best)
                for r in rows:
                    cell = r.cells.get((task, sh))
                    if cell and abs(cell.accuracy - best) <= eps:
                        underline.add((r.label, r.labeling, task, sh))
            for row in table.rows:
                cell = row.cells.get((task, sh))
                if cell and overall_best is not None \
                        and abs(cell.accuracy - overall_best) <= eps:
                    bold.add((row.label, row.labeling, task, sh))
    return underline, bold


def format_table(table: ResultsTable) -> str:
    """Aligned text table: one row per method, ``zero / one`` accuracy
    percents per task, underline marked as _x_, task-wise best as *x*."""
    underline, bold = _marks(table)
    headers = ["Method"] + table.tasks + ["Average"]

    def fmt_cell(row: Row, task: str) -> str:
        parts = []
        for sh in table.shots:
            cell = row.cells.get((task, sh))
            if cell is None:
                parts.append("-")
                continue
            txt = f"{100 * cell.accuracy:.2f}"
            key = (row.label, row.labeling, task, sh)
            if key in underline:
                txt = f"_{txt}_"
            if key in bold:
                txt = f"*{txt}*"
            parts.append(txt)
        return " / ".join(parts)

    lines: List[List[str]] = []
    current_group = None
    for row in table.rows:
        if row.labeling != current_group:
            current_group = row.labeling
            lines.append([f"[{current_group}]"] + [""] * (len(headers) - 1))
        avg = " / ".join(
            f"{100 * row.average(sh):.2f}" if row.average(sh) is not None else "-"
            for sh in table.shots)
        lines.append([row.label] + [fmt_cell(row, t) for t in table.tasks] + [avg])
    if table.baseline:
        row = table.baseline
        avg = " / ".join(f"{100 * row.average(sh):.2f}" for sh in table.shots)
        lines.append([row.label] + [fmt_cell(row, t) for t in table.tasks] + [avg])

    widths = [max(len(headers[i]), *(len(l[i]) for l in lines))
              for i in range(len(headers))]
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    out.append("  ".join("-" * w for w in widths))
    for line in lines:
        out.append("  ".join(c.ljust(w) for c, w in zip(line, widths)))
    meta = ", ".join(f"{k}={v}" for k, v in table.metadata.items())
    return "\n".join(out) + (f"\n[{meta}]" if meta else "") + "\n"


def emit_report(table: ResultsTable, out_prefix: str) -> Tuple[str, str]:
    """Write ``<prefix>.csv`` and ``<prefix>.txt``; returns both paths."""
    csv_path = out_prefix + ".csv"
    txt_path = out_prefix + ".txt"
    write_csv(table, csv_path)
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write(format_table(table))
    return csv_path, txt_path
