import pytest

from graphlin.gateway import ConstantModel, Gateway, PerfectOracle
from graphlin.harness import (Cell, EmptyInputError, EvalRecord, ResultsTable,
                              Row, evaluate_cell, exact_accuracy, format_table,
                              parse_answer, read_csv, run_matrix,
                              split_exemplar, table_from_csv, task_list,
                              write_csv)
from graphlin.linearize import Labeling, LinearizationSpec, Ordering
from graphlin.prompts import Shots
from graphlin.tasks import TaskInstance, TaskKind


def test_parse_numeric_first_integer():
    assert parse_answer(TaskKind.DIAMETER, "The diameter is 4.") == 4
    assert parse_answer(TaskKind.NODE_COUNTING, "12 nodes") == 12
    assert parse_answer(TaskKind.SHORTEST_PATH, "answer: -1 maybe 3") == -1
    assert parse_answer(TaskKind.MAX_DEGREE, "no digits here") is None


def test_parse_existence():
    assert parse_answer(TaskKind.EDGE_EXISTENCE, "Yes, an edge exists") == "yes"
    assert parse_answer(TaskKind.PATH_EXISTENCE, "NO") == "no"
    assert parse_answer(TaskKind.EDGE_EXISTENCE, "unclear") is None
    # substrings of other words do not count
    assert parse_answer(TaskKind.EDGE_EXISTENCE, "nothing to say") is None


def test_parse_motif_first_occurrence():
    assert parse_answer(TaskKind.MOTIF_SHAPE, "It could be a star or a fan") == "star"
    assert parse_answer(TaskKind.MOTIF_SHAPE, "A Diamond!") == "diamond"
    assert parse_answer(TaskKind.MOTIF_SHAPE, "a square") is None


def _record(correct):
    inst = TaskInstance(graph_ref="r", kind=TaskKind.NODE_COUNTING, truth=1)
    return EvalRecord(instance=inst, method="m", shots=Shots.ZERO,
                      raw="", parsed=1 if correct else 0, correct=correct)


def test_exact_accuracy():
    assert exact_accuracy([_record(True)] * 3) == 1.0
    recs = [_record(True)] * 7 + [_record(False)] * 3
    assert exact_accuracy(recs) == pytest.approx(0.7)
    with pytest.raises(EmptyInputError):
        exact_accuracy([])


def test_task_list_and_exemplar(graphwave_small):
    kinds = task_list(graphwave_small)
    assert TaskKind.MOTIF_SHAPE in kinds
    assert len(kinds) == 8
    exemplar, rest = split_exemplar(graphwave_small)
    assert exemplar is not None
    assert len(rest) == len(graphwave_small) - 1


METHODS = [
    LinearizationSpec(ordering=Ordering.DEGREE,
                      labeling=Labeling.NODE_RELABELING, seed=1),
    LinearizationSpec(ordering=Ordering.CORE_NUMBER,
                      labeling=Labeling.RANDOM_LABELS, seed=1),
    LinearizationSpec(ordering=Ordering.PAGERANK,
                      labeling=Labeling.RANDOM_LABELS, via_linegraph=True,
                      seed=1),
]


def test_run_matrix_oracle_all_cells_perfect(graphwave_small):
    table = run_matrix(graphwave_small, METHODS, PerfectOracle(),
                       shots=(Shots.ZERO, Shots.ONE), baseline_seed=3,
                       baseline_runs=2)
    for row in table.all_rows():
        for cell in row.cells.values():
            assert cell.accuracy == 1.0
    assert table.metadata["model"] == "mock:oracle"
    assert len(table.rows) == 3
    assert table.baseline is not None


def test_run_matrix_constant_model_reproducible(graphqa_small):
    kwargs = dict(shots=(Shots.ZERO,), baseline_seed=None)
    t1 = run_matrix(graphqa_small, METHODS[:1], ConstantModel("5"), **kwargs)
    t2 = run_matrix(graphqa_small, METHODS[:1], ConstantModel("5"), **kwargs)
    c1 = {k: c.accuracy for k, c in t1.rows[0].cells.items()}
    c2 = {k: c.accuracy for k, c in t2.rows[0].cells.items()}
    assert c1 == c2


def test_baseline_is_mean_of_per_seed_accuracies(graphqa_small):
    seeds = range(4, 9)
    table = run_matrix(graphqa_small, [], ConstantModel("yes"),
                       shots=(Shots.ZERO,),
                       tasks=[TaskKind.EDGE_EXISTENCE],
                       baseline_seed=4, baseline_runs=5)
    cell = table.baseline.cells[("edge_existence", "zero")]
    assert cell.seeds == tuple(seeds)

    from graphlin.harness import _linearize_all
    exemplar, rest = split_exemplar(graphqa_small)
    per_seed = []
    for s in seeds:
        lgs = _linearize_all(graphqa_small, LinearizationSpec(
            ordering=Ordering.RANDOM, labeling=Labeling.RANDOM_LABELS, seed=s))
        recs = evaluate_cell(rest, lgs, TaskKind.EDGE_EXISTENCE, Shots.ZERO,
                             Gateway(ConstantModel("yes")), "Baseline", exemplar)
        per_seed.append(exact_accuracy(recs))
    assert cell.accuracy == sum(per_seed) / len(per_seed)


def test_constant_yes_accuracy_equals_positive_fraction(graphqa_small):
    exemplar, rest = split_exemplar(graphqa_small)
    from graphlin.harness import _linearize_all
    lgs = _linearize_all(graphqa_small, METHODS[0])
    recs = evaluate_cell(rest, lgs, TaskKind.PATH_EXISTENCE, Shots.ZERO,
                         Gateway(ConstantModel("yes")), "m")
    positive = sum(1 for r in rest
                   if r.tasks["path_existence"].truth == "yes")
    assert exact_accuracy(recs) == pytest.approx(positive / len(rest))


def test_checkpoint_resume_skips_completed_cells(tmp_path, graphqa_small):
    ckpt = str(tmp_path / "cells")
    args = (graphqa_small, METHODS[:1], ConstantModel("3"))
    kwargs = dict(shots=(Shots.ZERO,), tasks=[TaskKind.NODE_COUNTING],
                  baseline_seed=None, checkpoint_dir=ckpt)
    t1 = run_matrix(*args, **kwargs)

    gw = Gateway(ConstantModel("3"))
    t2 = run_matrix(graphqa_small, METHODS[:1], ConstantModel("3"),
                    gateway=gw, **kwargs)
    assert gw.network_calls == 0  # every cell loaded from checkpoint
    assert t1.rows[0].cells == t2.rows[0].cells


def test_csv_round_trip(tmp_path, graphqa_small):
    table = run_matrix(graphqa_small, METHODS[:2], ConstantModel("2"),
                       shots=(Shots.ZERO,), baseline_seed=1, baseline_runs=2)
    path = str(tmp_path / "results.csv")
    write_csv(table, path)
    back = table_from_csv(read_csv(path))
    assert [r.label for r in back.rows] == [r.label for r in table.rows]
    for row, orig in zip(back.all_rows(), table.all_rows()):
        for key, cell in orig.cells.items():
            assert back_cell_close(row.cells[key], cell)


def back_cell_close(a: Cell, b: Cell) -> bool:
    return (abs(a.accuracy - b.accuracy) < 1e-9
            and a.n_instances == b.n_instances and a.seeds == b.seeds)


def test_format_table_marks_maxima():
    rows = [Row("A", "random_labels", False,
                {("t", "zero"): Cell(0.5, 10)}),
            Row("B", "random_labels", False,
                {("t", "zero"): Cell(0.8, 10)}),
            Row("C", "node_relabeling", False,
                {("t", "zero"): Cell(0.9, 10)})]
    table = ResultsTable(rows=rows, baseline=None, tasks=["t"], shots=["zero"])
    text = format_table(table)
    assert "_80.00_" in text       # group best, not overall
    assert "*_90.00_*" in text     # overall best is also its group's best
    assert "_50.00_" not in text


def test_average_column_within_task_range():
    row = Row("A", "random_labels", False,
              {("t1", "zero"): Cell(0.2, 5), ("t2", "zero"): Cell(0.6, 5)})
    avg = row.average("zero")
    assert 0.2 <= avg <= 0.6
    assert avg == pytest.approx(0.4)
