from __future__ import annotations

import datetime as dt
import io
import json

import pytest

from tempograph.estimation import EstimationConfig
from tempograph.graph import TemporalEdgeList
from tempograph.metrics.registry import REGISTRY, Strategy, evaluate, get_metric
from tempograph.synthgen import generate_random_digraph
from tempograph.timeinfer import CreationIndex
from tempograph.timeline import (
    CSV_HEADER,
    EraSpec,
    run_evolution,
    series_to_csv,
    series_to_json,
    split_eras,
    write_series_csv,
)

CFG = EstimationConfig(budget_seconds=None, max_rounds=2, sample_size=20, n_subgraphs=5, subgraph_start=5)

DEFAULT_STRATEGIES = {
    "assortativity": "none",
    "betweenness": "cutoff",
    "cliques": "subgraph",
    "closeness": "cutoff",
    "cocitation": "rnd_nodes",
    "coreness": "none",
    "degree_distribution": "none",
    "density": "none",
    "diameter": "subgraph",
    "eccentricity": "rnd_nodes",
    "edge_connectivity": "none",
    "eigenvector_centrality": "none",
    "all_shortest_paths": "rnd_nodes",
    "hub_score": "none",
    "knn": "none",
    "max_degree": "none",
    "motifs3": "none",
    "motifs4": "none",
    "neighborhood_size": "none",
    "pagerank": "none",
    "silw": "rnd_nodes",
    "strength": "none",
    "transitivity_local": "none",
    "transitivity_global": "none",
}


def edges_at(times, pairs=None):
    pairs = pairs or [(i, i + 1) for i in range(len(times))]
    return TemporalEdgeList.from_records([(u, v, t) for (u, v), t in zip(pairs, times)])


def epoch(y, m, d):
    return int(dt.datetime(y, m, d, tzinfo=dt.timezone.utc).timestamp())


@pytest.mark.parametrize("name, strategy", sorted(DEFAULT_STRATEGIES.items()))
def test_registry_default_strategies(name, strategy):
    assert get_metric(name).strategy is Strategy(strategy)


def test_registry_has_24_metrics():
    assert len(REGISTRY) == 24 and set(REGISTRY) == set(DEFAULT_STRATEGIES)


def test_unknown_metric_lists_registry():
    with pytest.raises(KeyError, match="density"):
        get_metric("nope")


def test_unsupported_strategy():
    s = generate_random_digraph(10, 0.3, seed=1)
    with pytest.raises(ValueError):
        evaluate(s, "density", CFG, "cutoff")


def test_edge_count_eras():
    eras = split_eras(edges_at([1, 2, 3, 4]), EraSpec("edges", 2))
    assert [e.stop for e in eras] == [2, 4]


def test_edge_count_eras_keep_remainder():
    eras = split_eras(edges_at([1, 2, 3, 4, 5]), EraSpec("edges", 2))
    assert [e.stop for e in eras] == [2, 4, 5]


def test_month_eras():
    edges = edges_at([epoch(2006, 4, 3), epoch(2006, 5, 1), epoch(2006, 5, 30)])
    eras = split_eras(edges, EraSpec("month"), CreationIndex(epoch=True))
    assert [(e.label, e.stop) for e in eras] == [("2006-04", 1), ("2006-05", 3)]


def test_day_eras_drop_edges_after_end():
    edges = edges_at([epoch(2009, 1, 1), epoch(2009, 1, 2), epoch(2009, 1, 9)])
    eras = split_eras(edges, EraSpec("day", start="2009-01-01", end="2009-01-02"), CreationIndex(epoch=True))
    assert [(e.label, e.stop) for e in eras] == [("2009-01-01", 1), ("2009-01-02", 2)]


def test_calendar_eras_need_calendar():
    with pytest.raises(ValueError):
        split_eras(edges_at([1, 2]), EraSpec("day"))
    with pytest.raises(ValueError):
        split_eras(edges_at([1, 2]), EraSpec("day"), CreationIndex())


def test_bad_era_spec():
    with pytest.raises(ValueError):
        EraSpec("week")
    with pytest.raises(ValueError):
        EraSpec("edges", 0)


def three_era_edges():
    s = generate_random_digraph(12, 0.3, seed=3)
    src, dst = s.edges()
    return TemporalEdgeList.from_arrays(src, dst, list(range(len(src))))


def test_exact_metrics_over_three_eras():
    edges = three_era_edges()
    k = -(-edges.edge_count // 3)
    series = run_evolution(edges, ["density", "coreness"], EraSpec("edges", k), CFG)
    assert [s.metric for s in series] == ["density", "coreness"]
    for s in series:
        assert len(s.entries) == 3
        assert all(e.report.n_samples == 0 and e.report.width == 0 for e in s.entries)
        vs = [e.v_count for e in s.entries]
        es = [e.e_count for e in s.entries]
        assert vs == sorted(vs) and es == sorted(es)


def test_cutoff_entries_tagged():
    series = run_evolution(three_era_edges(), [("closeness", "cutoff")], EraSpec("edges", 100), CFG)
    assert [e.param for e in series[0].entries] == [2, 3]


def test_empty_first_era_records_error():
    edges = edges_at([epoch(2006, 5, 1)])
    spec = EraSpec("month", start="2006-04-01")
    series = run_evolution(edges, ["density"], spec, CFG, calendar=CreationIndex(epoch=True))
    first = series[0].entries[0]
    assert first.v_count == 0 and first.report is None and "empty" in first.error
    assert series[0].entries[1].report.mean == 0.5


def test_errors_do_not_abort():
    edges = edges_at([1, 2], [(1, 2), (3, 4)])
    series = run_evolution(edges, ["edge_connectivity", "density"], EraSpec("edges", 1), CFG)
    assert series[0].entries[0].report is not None
    assert "not connected" in series[0].entries[1].error
    assert len(series[1].entries) == 2


def test_seeds_independent_of_metric_set():
    edges = three_era_edges()
    spec = EraSpec("edges", 10)
    alone = run_evolution(edges, [("eccentricity", "rnd_nodes")], spec, CFG)
    mixed = run_evolution(edges, ["density", ("eccentricity", "rnd_nodes")], spec, CFG)
    assert series_to_csv(alone) == series_to_csv(mixed[1:])


def test_workers_do_not_change_output():
    edges = three_era_edges()
    spec = EraSpec("edges", 10)
    names = ["density", "betweenness", "cliques", "silw"]
    assert series_to_csv(run_evolution(edges, names, spec, CFG, workers=1)) == series_to_csv(
        run_evolution(edges, names, spec, CFG, workers=4)
    )


def test_csv_schema():
    series = run_evolution(three_era_edges(), ["density"], EraSpec("edges", 100), CFG)
    buf = io.StringIO()
    write_series_csv(series, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[0] == "metric,era,v_count,e_count,mean,ci_low,ci_high,n_samples,converged,param"
    assert lines[1].startswith("density,")


def test_json_variant():
    series = run_evolution(three_era_edges(), ["density"], EraSpec("edges", 100), CFG)
    rows = json.loads(series_to_json(series))
    assert rows[0]["metric"] == "density" and "mean" in rows[0] and "v_count" in rows[0]
