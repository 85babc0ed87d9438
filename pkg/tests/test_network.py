"""Bipartite network construction, concept-restricted cores, and export."""

import datetime as dt
import random

import pytest

from claimnet.dyads import Dyad
from claimnet.errors import InputError
from claimnet.network import (
    CoreConfig,
    DiscourseNetwork,
    PeriodSpec,
    build,
    concept_core,
    concept_degrees,
    dot_string,
    edge_csv_string,
    export,
    graphml_string,
    load_graphml,
    load_periods,
)

PERIOD = PeriodSpec(index=1, start=dt.date(2011, 3, 11), end=dt.date(2011, 3, 13), core_n=3)


def make_dyad(actor, code, date, polarity=1):
    return Dyad(
        actor=actor,
        code=code,
        polarity=polarity,
        date=date,
        doc_id="a1",
        sentence_index=0,
        similarity=0.8,
        claim_score=0.9,
        stance_margin=0.3,
    )


class TestBuild:
    def test_empty_window(self):
        dyads = [make_dyad("A", 110, dt.date(2012, 1, 1))]
        assert build(dyads, PERIOD).edges == {}

    def test_weight_counts_distinct_dates(self):
        dyads = [
            make_dyad("A", 110, dt.date(2011, 3, 11)),
            make_dyad("A", 110, dt.date(2011, 3, 12)),
            make_dyad("A", 110, dt.date(2011, 3, 13)),
        ]
        net = build(dyads, PERIOD)
        assert net.edges == {("A", 110, 1): 3}

    def test_opposite_polarities_are_parallel_edges(self):
        dyads = [
            make_dyad("A", 110, dt.date(2011, 3, 11), polarity=1),
            make_dyad("A", 110, dt.date(2011, 3, 12), polarity=-1),
        ]
        net = build(dyads, PERIOD)
        assert net.edges == {("A", 110, 1): 1, ("A", 110, -1): 1}

    def test_nodes_derived_from_edges(self):
        dyads = [make_dyad("A", 110, dt.date(2011, 3, 11)),
                 make_dyad("B", 130, dt.date(2011, 3, 12))]
        net = build(dyads, PERIOD)
        assert net.actors == ["A", "B"]
        assert net.concepts == [110, 130]


def random_network(rng, max_concepts=12, max_actors=20):
    actors = [f"Actor{i}" for i in range(rng.randint(1, max_actors))]
    concepts = [100 + i for i in range(rng.randint(1, max_concepts))]
    edges = {}
    for actor in actors:
        for code in concepts:
            for sign in (1, -1):
                if rng.random() < 0.25:
                    edges[(actor, code, sign)] = rng.randint(1, 5)
    return DiscourseNetwork(edges=edges)


def core_oracle(net, n, mode):
    """Brute force: test each concept against the threshold in the original
    network, then keep actors that still touch an edge."""
    survivors = set()
    for code in {c for _, c, _ in net.edges}:
        if mode == "distinct_actors":
            degree = len({a for a, c, _ in net.edges if c == code})
        else:
            degree = sum(w for (a, c, s), w in net.edges.items() if c == code)
        if degree >= n:
            survivors.add(code)
    edges = {k: w for k, w in net.edges.items() if k[1] in survivors}
    actors = {a for a, _, _ in edges}
    return edges, actors, survivors & {c for _, c, _ in edges}


class TestConceptCore:
    def test_n_zero_is_identity(self):
        rng = random.Random(1)
        net = random_network(rng)
        assert concept_core(net, 0).edges == net.edges

    def test_n_above_max_degree_empties(self):
        rng = random.Random(2)
        net = random_network(rng)
        assert concept_core(net, 10_000).edges == {}

    def test_negative_n_rejected(self):
        with pytest.raises(InputError):
            concept_core(DiscourseNetwork(), -1)

    def test_matches_oracle_on_random_graphs(self):
        rng = random.Random(3)
        for _ in range(100):
            net = random_network(rng)
            for mode in ("distinct_actors", "mention_count"):
                cfg = CoreConfig(degree_mode=mode)
                for n in range(0, 6):
                    got = concept_core(net, n, cfg)
                    edges, actors, concepts = core_oracle(net, n, mode)
                    assert got.edges == edges
                    assert set(got.actors) == actors
                    assert set(got.concepts) == concepts

    def test_idempotent(self):
        rng = random.Random(4)
        for _ in range(20):
            net = random_network(rng)
            n = rng.randint(0, 5)
            once = concept_core(net, n)
            assert concept_core(once, n).edges == once.edges

    def test_core_nesting(self):
        rng = random.Random(5)
        for _ in range(20):
            net = random_network(rng)
            for n1 in range(0, 4):
                inner = concept_core(net, n1 + 1)
                outer = concept_core(net, n1)
                assert set(inner.actors) <= set(outer.actors)
                assert set(inner.concepts) <= set(outer.concepts)
                assert set(inner.edges) <= set(outer.edges)

    def test_surviving_concepts_meet_threshold_in_original(self):
        rng = random.Random(6)
        for _ in range(20):
            net = random_network(rng)
            n = rng.randint(1, 5)
            core = concept_core(net, n)
            original_degrees = concept_degrees(net)
            for code in core.concepts:
                assert original_degrees[code] >= n

    def test_bipartite_preserved(self):
        rng = random.Random(7)
        net = random_network(rng)
        core = concept_core(net, 2)
        for actor, code, sign in core.edges:
            assert isinstance(actor, str)
            assert isinstance(code, int)
            assert sign in (1, -1)


class TestExport:
    def sample_network(self):
        return DiscourseNetwork(
            edges={
                ("Angela Merkel", 110, 1): 2,
                ("Jürgen Trittin", 102, 1): 1,
                ("RWE", 102, -1): 1,
            },
            name="p1_core3",
            config_hash="cafe0123",
        )

    def test_graphml_roundtrip(self, tmp_path):
        net = self.sample_network()
        path = export(net, "graphml", tmp_path / "net.graphml")
        loaded = load_graphml(path)
        assert loaded == net
        assert loaded.config_hash == "cafe0123"
        assert loaded.actors == net.actors
        assert loaded.concepts == net.concepts

    def test_empty_network_valid_file(self, tmp_path):
        path = export(DiscourseNetwork(name="empty"), "graphml", tmp_path / "e.graphml")
        loaded = load_graphml(path)
        assert loaded.edges == {}

    def test_export_deterministic(self, tmp_path):
        net = self.sample_network()
        p1 = export(net, "graphml", tmp_path / "a.graphml")
        p2 = export(net, "graphml", tmp_path / "b.graphml")
        assert p1.read_bytes() == p2.read_bytes()

    def test_dot_contains_partitions_and_edges(self):
        text = dot_string(self.sample_network())
        assert "shape=box" in text and "shape=ellipse" in text
        assert '"a:Angela Merkel" -> "c:110"' in text

    def test_edge_csv_shape(self):
        text = edge_csv_string(self.sample_network())
        lines = text.strip().split("\n")
        assert lines[0] == "actor,code,sign,weight"
        assert len(lines) == 4
        assert lines[1] == "Angela Merkel,110,1,2"


class TestPeriods:
    def test_load_and_order(self, tmp_path):
        path = tmp_path / "periods.csv"
        path.write_text(
            "index,start,end,core_n\n2,2011-03-14,2011-03-15,5\n1,2011-03-11,2011-03-13,3\n",
            encoding="utf-8",
        )
        periods = load_periods(path)
        assert [p.index for p in periods] == [1, 2]

    def test_overlap_rejected(self, tmp_path):
        path = tmp_path / "periods.csv"
        path.write_text(
            "index,start,end,core_n\n1,2011-03-11,2011-03-14,3\n2,2011-03-14,2011-03-15,5\n",
            encoding="utf-8",
        )
        with pytest.raises(InputError, match="overlap"):
            load_periods(path)

    def test_graphml_string_has_config_hash(self):
        net = DiscourseNetwork(edges={}, name="x", config_hash="deadbeef")
        assert "deadbeef" in graphml_string(net)
