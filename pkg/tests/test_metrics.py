from __future__ import annotations

import math

import networkx as nx
import numpy as np
import pytest
from conftest import FIXTURES, snap
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tempograph.errors import MetricError
from tempograph.graph import Mode, Snapshot
from tempograph.metrics import (
    assortativity_degree,
    avg_shortest_path,
    betweenness,
    closeness,
    cocitation,
    cocitation_pair,
    coreness,
    degree_stats,
    density,
    diameter,
    eccentricity_radius,
    edge_connectivity,
    eigenvector_centrality,
    hits_scores,
    knn_average_degree,
    local_transitivity,
    max_clique,
    motifs_randesu,
    neighborhood_size,
    pagerank,
    silw,
    silw_pair,
    source_dependency,
    strength,
    transitivity,
)
from tempograph.synthgen import generate_random_digraph


def approx_dict(got, want, tol=1e-12):
    assert got.keys() == want.keys()
    for k in want:
        assert got[k] == pytest.approx(want[k], abs=tol, rel=tol), k


digraphs = st.builds(
    generate_random_digraph,
    st.integers(2, 12),
    st.sampled_from([0.1, 0.25, 0.5]),
    st.integers(0, 10_000),
)


# -- degree family -----------------------------------------------------------


def test_degree_stats_examples(c3, star, k4):
    d = degree_stats(c3, Mode.ALL)
    assert (d.average, d.max) == (2.0, 2)
    d = degree_stats(star, Mode.IN)
    assert d.distribution == {0: 3, 3: 1} and d.max == 3
    assert degree_stats(k4, Mode.OUT).average == 3.0


def test_degree_stats_empty():
    with pytest.raises(MetricError, match="empty graph"):
        degree_stats(Snapshot.empty())


def test_strength_examples(c3, star):
    assert set(strength(c3, Mode.ALL).values()) == {2.0}
    unit = {e: 1.0 for e in FIXTURES["STAR"]}
    assert strength(star, Mode.IN, unit)[0] == 3.0
    s = snap([(1, 2), (1, 3)])
    assert strength(s, Mode.OUT, {(1, 2): 2.0, (1, 3): 3.0})[1] == 5.0


def test_strength_partial_weights(c3):
    with pytest.raises(MetricError):
        strength(c3, Mode.ALL, {(1, 2): 1.0})
    with pytest.raises(MetricError):
        strength(c3, Mode.ALL, {(1, 2): 1.0, (2, 3): math.inf, (3, 1): 1.0})


def test_neighborhood_size_examples(star, k4):
    assert set(neighborhood_size(k4, 0).values()) == {1}
    assert neighborhood_size(star, 1, Mode.ALL)[1] == 2
    assert neighborhood_size(star, 2, Mode.ALL)[1] == 4


def test_density_examples(c3, k4, p3):
    assert density(c3) == 0.5
    assert density(k4) == 1.0
    assert density(p3) == pytest.approx(1 / 3, abs=1e-15)
    with pytest.raises(MetricError):
        density(snap([], nodes=[1]))


def test_assortativity_examples(star, p3, c3):
    assert assortativity_degree(star, Mode.ALL) == pytest.approx(-1.0, abs=1e-12)
    assert assortativity_degree(p3, Mode.ALL) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(MetricError, match="regular graph"):
        assortativity_degree(c3)


def pearson_two_pass(xs, ys):
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


@settings(max_examples=60, deadline=None)
@given(digraphs)
def test_assortativity_matches_two_pass_pearson(s):
    und = s.undirected
    deg = dict(zip(s.nodes.tolist(), und.degree(Mode.OUT).tolist()))
    src, dst = und.edges()
    pairs = list(zip(src.tolist(), dst.tolist()))
    xs = [deg[u] for u, v in pairs] + [deg[v] for u, v in pairs]
    ys = [deg[v] for u, v in pairs] + [deg[u] for u, v in pairs]
    if not pairs or len(set(xs)) == 1:
        with pytest.raises(MetricError):
            assortativity_degree(s, Mode.ALL)
        return
    assert assortativity_degree(s, Mode.ALL) == pytest.approx(pearson_two_pass(xs, ys), abs=1e-12)


def test_coreness_examples(k4, c3, star):
    assert set(coreness(k4).values()) == {3}
    assert set(coreness(c3).values()) == {2}
    assert set(coreness(star).values()) == {1}


@settings(max_examples=60, deadline=None)
@given(digraphs, st.sampled_from([Mode.IN, Mode.OUT, Mode.ALL]))
def test_coreness_shells_have_min_degree(s, mode):
    core = coreness(s, mode)
    for k in set(core.values()):
        keep = [v for v, c in core.items() if c >= k]
        sub = s.subgraph(keep)
        assert int(sub.degree(mode).min()) >= k


def test_transitivity_examples(c3, star, k4):
    t = transitivity(c3)
    assert (t.global_, t.local_average) == (1.0, 1.0)
    t = transitivity(star)
    assert (t.global_, t.local_average) == (0.0, 0.0)
    assert transitivity(k4).global_ == 1.0


def test_transitivity_undefined(p3):
    with pytest.raises(MetricError):
        transitivity(snap([(1, 2)]))


def test_knn_examples(c3, star, p3):
    assert set(knn_average_degree(c3).values()) == {2.0}
    k = knn_average_degree(star)
    assert k[0] == 1.0 and {k[1], k[2], k[3]} == {3.0}
    assert knn_average_degree(p3)[2] == 1.0


def test_knn_skips_isolated():
    assert 9 not in knn_average_degree(snap([(1, 2)], nodes=[1, 2, 9]))


# -- spectral ----------------------------------------------------------------


def test_pagerank_examples(c3, star):
    approx_dict(pagerank(c3), {1: 1 / 3, 2: 1 / 3, 3: 1 / 3})
    approx_dict(pagerank(snap([(1, 2), (2, 1)])), {1: 0.5, 2: 0.5})
    pr = pagerank(star)
    assert all(pr[0] > pr[leaf] for leaf in (1, 2, 3))
    approx_dict(pr, oracles.pagerank_oracle(FIXTURES["STAR"], [0, 1, 2, 3]), tol=1e-9)


def test_pagerank_scale(star):
    scaled = pagerank(star, scale=True)
    assert sum(scaled.values()) == pytest.approx(4.0)


def test_pagerank_nonconvergence(star):
    with pytest.raises(MetricError) as err:
        pagerank(star, max_iter=2)
    assert err.value.residual > 0


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_pagerank_sums_to_one_and_floor(s):
    pr = pagerank(s)
    assert sum(pr.values()) == pytest.approx(1.0, abs=1e-9)
    assert min(pr.values()) >= 0.15 / s.v_count - 1e-12


@settings(max_examples=30, deadline=None)
@given(digraphs)
def test_pagerank_matches_networkx(s):
    g = nx.DiGraph()
    g.add_nodes_from(s.nodes.tolist())
    g.add_edges_from(zip(*(x.tolist() for x in s.edges())))
    approx_dict(pagerank(s), nx.pagerank(g, alpha=0.85, tol=1e-14, max_iter=10_000), tol=1e-8)


def test_hits_examples(c3, star):
    h = hits_scores(c3)
    assert set(h.hub.values()) == {1.0} and set(h.authority.values()) == {1.0}
    h = hits_scores(star)
    assert h.hub[0] == 0.0 and all(h.hub[i] == pytest.approx(1.0) for i in (1, 2, 3))
    assert h.authority[0] == 1.0 and all(h.authority[i] == 0.0 for i in (1, 2, 3))
    with pytest.raises(MetricError):
        hits_scores(snap([], nodes=[1, 2]))


def test_eigenvector_examples(c3, star, k4):
    approx_dict(eigenvector_centrality(c3), {1: 1.0, 2: 1.0, 3: 1.0})
    approx_dict(eigenvector_centrality(k4), {i: 1.0 for i in range(4)})
    ev = eigenvector_centrality(star)
    assert ev[0] == pytest.approx(1.0)
    for leaf in (1, 2, 3):
        assert ev[leaf] == pytest.approx(1 / math.sqrt(3), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(digraphs)
def test_eigenvector_matches_dense_eigensolver(s):
    und = s.undirected
    if und.e_count == 0:
        return
    comps = nx.number_connected_components(nx.Graph(list(zip(*(x.tolist() for x in und.edges())))))
    if comps != 1 or und.v_count != s.v_count:
        return  # principal eigenvector is unique only on a connected graph
    a = np.zeros((s.v_count, s.v_count))
    src, dst = und.edges()
    a[und.indices(src), und.indices(dst)] = 1
    a[und.indices(dst), und.indices(src)] = 1
    w, vecs = np.linalg.eigh(a)
    vec = np.abs(vecs[:, -1])
    vec /= vec.max()
    got = eigenvector_centrality(s)
    np.testing.assert_allclose([got[i] for i in s.nodes.tolist()], vec, atol=1e-6)


# -- paths -------------------------------------------------------------------


def test_betweenness_examples(p3, c3):
    assert betweenness(p3) == {1: 0.0, 2: 1.0, 3: 0.0}
    assert betweenness(c3) == {1: 1.0, 2: 1.0, 3: 1.0}
    assert betweenness(p3, cutoff=1) == {1: 0.0, 2: 0.0, 3: 0.0}
    assert betweenness(p3, cutoff=2)[2] == 1.0


def test_cutoff_must_be_positive(p3):
    with pytest.raises(ValueError):
        betweenness(p3, cutoff=0)


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_betweenness_matches_bruteforce(s):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    nodes = s.nodes.tolist()
    approx_dict(betweenness(s), oracles.betweenness_bruteforce(oracles.out_sets(pairs, nodes)))
    approx_dict(betweenness(s, cutoff=2), oracles.betweenness_len2(oracles.out_sets(pairs, nodes)))


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_undirected_betweenness_matches_networkx(s):
    g = nx.Graph()
    g.add_nodes_from(s.nodes.tolist())
    g.add_edges_from(zip(*(x.tolist() for x in s.edges())))
    approx_dict(betweenness(s, directed=False), nx.betweenness_centrality(g, normalized=False), tol=1e-9)


@settings(max_examples=40, deadline=None)
@given(digraphs, st.sampled_from([None, 1, 2, 3]))
def test_source_dependency_mean_is_mean_betweenness(s, cutoff):
    dep = source_dependency(s, None, cutoff)
    bc = betweenness(s, cutoff)
    assert math.fsum(dep.values()) == pytest.approx(math.fsum(bc.values()), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_betweenness_monotone_in_cutoff(s):
    prev = betweenness(s, cutoff=1)
    for c in range(2, s.v_count + 1):
        cur = betweenness(s, cutoff=c)
        assert sum(cur.values()) >= sum(prev.values()) - 1e-12
        prev = cur


def test_closeness_examples(p3):
    assert closeness(p3, mode=Mode.OUT)[1] == pytest.approx(1 / 3)
    assert closeness(p3, cutoff=1, mode=Mode.OUT)[1] == 1.0
    assert closeness(p3, mode=Mode.OUT)[3] == 0.0


@settings(max_examples=40, deadline=None)
@given(digraphs, st.sampled_from([None, 1, 2, 3]))
def test_closeness_matches_truncated_bfs(s, cutoff):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    want = oracles.closeness_bruteforce(oracles.out_sets(pairs, s.nodes.tolist()), cutoff)
    approx_dict(closeness(s, cutoff, Mode.OUT), want)


def test_eccentricity_examples(c3, p3, star):
    e = eccentricity_radius(c3, Mode.ALL)
    assert set(e.ecc.values()) == {1} and e.radius == 1
    e = eccentricity_radius(p3, Mode.ALL)
    assert e.ecc == {1: 2, 2: 1, 3: 2} and e.radius == 1
    assert eccentricity_radius(star, Mode.ALL).radius == 1
    with pytest.raises(MetricError):
        eccentricity_radius(snap([], nodes=[1, 2]))


def test_diameter_examples(p3, k4, c3):
    assert diameter(p3, Mode.ALL) == 2
    assert diameter(k4) == 1
    assert diameter(c3, Mode.OUT) == 2
    with pytest.raises(MetricError):
        diameter(snap([], nodes=[1]))


def test_avg_shortest_path_examples(c3, k4):
    p = avg_shortest_path(c3, mode=Mode.OUT)
    assert (p.mean, p.reachable_fraction) == (1.5, 1.0)
    assert avg_shortest_path(k4).mean == 1.0
    p = avg_shortest_path(snap(FIXTURES["P3"], nodes=[1, 2, 3, 4]), mode=Mode.ALL)
    assert p.reachable_fraction < 1.0
    assert p.mean == pytest.approx(8 / 6)


@settings(max_examples=30, deadline=None)
@given(digraphs)
def test_avg_shortest_path_matches_networkx(s):
    g = nx.DiGraph()
    g.add_nodes_from(s.nodes.tolist())
    g.add_edges_from(zip(*(x.tolist() for x in s.edges())))
    lengths = [d for u, row in nx.all_pairs_shortest_path_length(g) for v, d in row.items() if u != v]
    if not lengths:
        with pytest.raises(MetricError):
            avg_shortest_path(s)
        return
    assert avg_shortest_path(s).mean == pytest.approx(sum(lengths) / len(lengths), abs=1e-12)


# -- structure ---------------------------------------------------------------


def test_max_clique_examples(k4, c3, star):
    assert max_clique(k4) == 4
    assert max_clique(c3) == 3
    assert max_clique(star) == 2
    assert max_clique(Snapshot.empty()) == 0


@settings(max_examples=60, deadline=None)
@given(st.builds(generate_random_digraph, st.integers(1, 16), st.sampled_from([0.2, 0.4, 0.7]), st.integers(0, 999)))
def test_max_clique_matches_bruteforce(s):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    assert max_clique(s) == oracles.max_clique_bruteforce(oracles.und_sets(pairs, s.nodes.tolist()))


def test_cocitation_examples(coc, c3):
    assert cocitation_pair(coc, 3, 4) == 2
    assert cocitation_pair(c3, 2, 3) == 0
    assert cocitation(snap(FIXTURES["C3"], nodes=[1, 2, 3, 9]), [9]) == {9: 0.0}


def test_silw_examples(coc, star):
    assert silw_pair(coc, 3, 4) == pytest.approx(2 / math.log(2))
    assert silw_pair(star, 1, 2) == pytest.approx(1 / math.log(3))
    assert silw_pair(coc, 1, 3) == 0.0


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_cocitation_and_silw_match_bruteforce(s):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    nodes = s.nodes.tolist()
    approx_dict(cocitation(s), oracles.cocitation_bruteforce(pairs, nodes))
    approx_dict(silw(s), oracles.silw_bruteforce(pairs, nodes))


def test_motif_examples(c3, k4, star):
    assert motifs_randesu(c3, 3) == 1
    assert motifs_randesu(k4, 3) == 4
    assert motifs_randesu(star, 4) == 1
    with pytest.raises(ValueError):
        motifs_randesu(c3, 5)


@settings(max_examples=40, deadline=None)
@given(digraphs, st.sampled_from([3, 4]))
def test_motifs_match_bruteforce(s, size):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    assert motifs_randesu(s, size) == oracles.motif_count_bruteforce(oracles.und_sets(pairs, s.nodes.tolist()), size)


def test_motif_sampling_is_seeded(k4):
    a = motifs_randesu(k4, 3, [1.0, 0.5, 0.5], rng=3)
    b = motifs_randesu(k4, 3, [1.0, 0.5, 0.5], rng=3)
    assert a == b
    assert a % 4 == 0  # every hit counts 1 / 0.25


def test_edge_connectivity_examples(k4, p3):
    assert edge_connectivity(k4) == 3
    assert edge_connectivity(p3) == 1
    with pytest.raises(MetricError, match="not connected"):
        edge_connectivity(snap([(1, 2), (3, 4)]))


@settings(max_examples=40, deadline=None)
@given(digraphs, st.booleans())
def test_edge_connectivity_matches_networkx(s, directed):
    g = (nx.DiGraph if directed else nx.Graph)()
    g.add_nodes_from(s.nodes.tolist())
    g.add_edges_from(zip(*(x.tolist() for x in s.edges())))
    ok = nx.is_strongly_connected(g) if directed else nx.is_connected(g)
    if not ok:
        with pytest.raises(MetricError):
            edge_connectivity(s, directed)
        return
    assert edge_connectivity(s, directed) == nx.edge_connectivity(g)


@settings(max_examples=40, deadline=None)
@given(digraphs)
def test_transitivity_matches_bruteforce(s):
    pairs = list(zip(*(x.tolist() for x in s.edges())))
    glob, avg, local = oracles.transitivity_bruteforce(oracles.und_sets(pairs, s.nodes.tolist()))
    approx_dict(local_transitivity(s), local)
    if glob is None:
        with pytest.raises(MetricError):
            transitivity(s)
        return
    t = transitivity(s)
    assert t.global_ == pytest.approx(glob, abs=1e-12)
    assert t.local_average == pytest.approx(avg, abs=1e-12)


def test_metrics_are_pure(k4):
    s = generate_random_digraph(30, 0.2, seed=4)
    assert betweenness(s) == betweenness(s)
    assert pagerank(s) == pagerank(s)
    assert coreness(s) == coreness(s)
