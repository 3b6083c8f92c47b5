"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

from __future__ import annotations

import functools
import json
import random
import time
from pathlib import Path

from helpers import (
    addr,
    brute_force_longest_path,
    brute_force_reachable,
    build_workbook,
    graph_of,
    random_dag_workbook,
    random_workbook,
)

from sheetlens.cli import run_cli
from sheetlens.evaluate import EvalEnvironment, evaluate_formula, evaluate_workbook
from sheetlens.formula import parse_formula, pretty_print
from sheetlens.graph import SliceDirection, classify_cells, sources_sinks
from sheetlens.metrics import PartitionKind, partition_equivalence
from sheetlens.model import ErrorKind, Value
from sheetlens.pipeline import analyze_path, analyze_workbook
from sheetlens.recommend import ViewId
from test_parser import CORPUS

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ACYCLIC_FIXTURES = [
    "golden.json", "cross_sheet.json", "data_centered.json",
    "hotspots.json", "copy_block.json", "months.json",
]


def criterion(name: str, budget_seconds: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            started = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE FAIL: {name}")
                raise
            elapsed = time.perf_counter() - started
            print(f"ACCEPTANCE PASS: {name} ({elapsed:.2f}s)")
            assert elapsed < budget_seconds, f"{name} exceeded {budget_seconds}s budget"
        return run
    return wrap


# shared random-graph corpus for the chain and slice criteria
def _dag_corpus():
    rng = random.Random(20240401)
    return [graph_of(random_dag_workbook(rng, max_vertices=12)) for _ in range(500)]


_DAGS = None


def dag_corpus():
    global _DAGS
    if _DAGS is None:
        _DAGS = _dag_corpus()
    return _DAGS


@criterion("golden six-cell fixture", budget_seconds=1.0)
def test_golden_golden_fixture():
    result = analyze_path(FIXTURES / "golden.json")
    graph = result.graph
    assert result.report.sizes.sz_v == 6
    hyper = [e for e in graph.edges if len(e.targets) >= 2]
    assert len(hyper) == 1
    assert result.report.sizes.ed_h == 1
    assert hyper[0].source == addr("B3")
    assert set(hyper[0].targets) == {addr("B4"), addr("B5"), addr("B6")}
    matrix = graph.coupling_matrix()
    assert matrix.entry(addr("B3"), addr("B6")) == 2
    _, sinks = sources_sinks(graph, result.classes)
    assert sinks == {addr("B3")}
    assert graph.slice(addr("B6"), SliceDirection.SCOPE) == {addr("B3")}


@criterion("partition identities on 200 random workbooks", budget_seconds=10.0)
def test_partition_identities():
    rng = random.Random(77)
    for _ in range(200):
        wb = random_workbook(rng, max_cells=500)
        report = analyze_workbook(wb).report
        sizes, ratios = report.sizes, report.ratios
        assert sizes.sz_v == sizes.sz_l + sizes.sz_d + sizes.sz_f
        assert sizes.ed_e == sizes.ed_s + sizes.ed_h
        if sizes.sz_v > 0:
            assert abs(ratios.r_l + ratios.r_d + ratios.r_f - 1.0) <= 1e-12


@criterion("equivalence refinement g >= h >= k and copy block g = 1", budget_seconds=5.0)
def test_equivalence_refinement():
    rng = random.Random(88)
    for _ in range(60):
        wb = random_workbook(rng, max_cells=300)
        formulas = {c.addr: c.ast for c in wb.iter_cells() if c.is_formula}
        if not formulas:
            continue
        g = partition_equivalence(formulas, PartitionKind.COPY).count
        h = partition_equivalence(formulas, PartitionKind.LOGICAL).count
        k = partition_equivalence(formulas, PartitionKind.STRUCTURAL).count
        assert g >= h >= k >= 1
    block = analyze_path(FIXTURES / "copy_block.json").report
    assert block.sizes.sz_f == 100
    assert block.distinct_formulae == 1


@criterion("longest chains match brute force on 500 random DAGs", budget_seconds=30.0)
def test_longest_chain_oracle():
    for graph in dag_corpus():
        ref_adj = {v: sorted(set(graph.precedents(v))) for v in graph.vertices}
        dep_adj = {v: sorted(set(graph.dependents(v))) for v in graph.vertices}
        for v in graph.vertices:
            path_ref, path_dep = graph.longest_chains(v)
            assert path_ref == brute_force_longest_path(ref_adj, v)
            assert path_dep == brute_force_longest_path(dep_adj, v)


@criterion("slice duality on the random DAG corpus", budget_seconds=30.0)
def test_slice_duality():
    for graph in dag_corpus():
        vis = {v: graph.slice(v, SliceDirection.VISIBILITY) for v in graph.vertices}
        sco = {v: graph.slice(v, SliceDirection.SCOPE) for v in graph.vertices}
        dep_adj = {v: sorted(set(graph.dependents(v))) for v in graph.vertices}
        for v in graph.vertices:
            assert sco[v] == brute_force_reachable(dep_adj, v)
        for u in graph.vertices:
            for v in graph.vertices:
                assert (u in vis[v]) == (v in sco[u])


@criterion("cycle handling", budget_seconds=5.0)
def test_cycle_handling(tmp_path, capsys):
    # self-loop fixture: A1 = "=A1", B1 depends on it
    self_loop = analyze_path(FIXTURES / "cycle_self.json")
    assert self_loop.report.cycles == [[addr("A1")]]
    assert self_loop.values[addr("A1")] == Value.error(ErrorKind.CYCLE)
    assert self_loop.values[addr("B1")] == Value.error(ErrorKind.CYCLE)
    assert self_loop.values[addr("C1")] == Value.number(5)
    metrics = self_loop.report.cell_metrics[addr("A1")]
    assert metrics.path_ref is None and metrics.path_dep is None

    # three-cycle fixture: A1 -> A3 -> A2 -> A1, with dependent B1
    three = analyze_path(FIXTURES / "cycle_three.json")
    assert three.report.cycles == [[addr("A1"), addr("A2"), addr("A3")]]
    for a1 in ("A1", "A2", "A3", "B1"):
        assert three.values[addr(a1)] == Value.error(ErrorKind.CYCLE)
    assert three.values[addr("C1")] == Value.number(7)

    # CLI exits 0 with the cycle flag set in the bundle
    out = tmp_path / "out"
    code = run_cli(["analyze", str(FIXTURES / "cycle_three.json"), "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    bundle = json.loads((out / "bundle.json").read_text())
    assert bundle["cycles"] == [["Sheet1!A1", "Sheet1!A2", "Sheet1!A3"]]


@criterion("evaluator consistency", budget_seconds=5.0)
def test_evaluator_consistency():
    cells = {f"A{i}": i for i in range(1, 13)}
    cells["A13"] = "=SUM(A1:A12)"
    wb = build_workbook({"Sheet1": cells})
    values = evaluate_workbook(wb, graph_of(wb))
    assert values[addr("A13")] == Value.number(78)

    wb = build_workbook({"Sheet1": {"B1": "=C1+5"}})
    values = evaluate_workbook(wb, graph_of(wb))
    assert values[addr("B1")] == Value.number(5)

    for fixture in ACYCLIC_FIXTURES:
        result = analyze_path(FIXTURES / fixture)
        again = evaluate_workbook(result.workbook, result.graph)
        assert again == result.values
        env = EvalEnvironment(values=dict(result.values))
        for cell in result.workbook.iter_cells():
            if cell.is_formula:
                assert evaluate_formula(cell.ast, env) == result.values[cell.addr]


@criterion("parser round-trip fixpoint over the corpus", budget_seconds=5.0)
def test_parser_round_trip():
    names = ["Sheet1", "Jan", "Year End"]
    anchor = addr("A13")
    assert len(CORPUS) >= 50
    assert any(";" in text and "IF(" in text for text in CORPUS)
    for text in CORPUS:
        first = parse_formula(text, anchor, names)
        printed = pretty_print(first, names)
        assert parse_formula(printed, anchor, names) == first


@criterion("byte-identical analyze artifacts", budget_seconds=10.0)
def test_determinism(tmp_path, capsys):
    for fixture in ("golden.json", "months.json", "cycle_three.json"):
        a, b = tmp_path / f"a-{fixture}", tmp_path / f"b-{fixture}"
        assert run_cli(["analyze", str(FIXTURES / fixture), "--out", str(a)]) == 0
        assert run_cli(["analyze", str(FIXTURES / fixture), "--out", str(b)]) == 0
        capsys.readouterr()
        for name in ("report.txt", "graph.dot", "bundle.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


@criterion("recommendation rule cascade", budget_seconds=5.0)
def test_recommendation_rules():
    expected = {
        "cross_sheet.json": ViewId.LAYERED_WORKBOOK,
        "data_centered.json": ViewId.DATA_HEATMAP,
        "hotspots.json": ViewId.HOTSPOT_LIST,
    }
    for fixture, view in expected.items():
        result = analyze_path(FIXTURES / fixture)
        assert result.recommendations[0].view == view
        assert result.recommendations[-1].view == ViewId.DEPENDENCY_GRAPH
