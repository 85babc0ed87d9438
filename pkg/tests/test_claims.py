"""Claim scorer tests: logistic head numerics, training, thresholding."""

import math

import numpy as np
import pytest

from claimnet.claims import (
    ClaimScore,
    LinearHead,
    MockClaimScorer,
    RemoteClaimScorer,
    cross_entropy,
    cross_entropy_grad,
    filter_candidates,
    implicit_article_selection,
    load_head,
    save_head,
    score_sentence,
    train_head,
)
from claimnet.embeddings import mock_embed
from claimnet.errors import ContractError, InputError, TransportError


def scalar_logistic_oracle(weights, vec, bias):
    """Independent scalar oracle: 1 / (1 + exp(-z))."""
    z = math.fsum(w * x for w, x in zip(weights, vec)) + bias
    return 1.0 / (1.0 + math.exp(-z))


class TestScoreSentence:
    def test_zero_head_scores_half(self):
        head = LinearHead(weights=np.zeros(8), bias=0.0)
        assert score_sentence(np.ones(8), head) == 0.5

    def test_large_bias_saturates(self):
        head = LinearHead(weights=np.zeros(8), bias=50.0)
        assert score_sentence(np.zeros(8), head) > 0.999999

    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            dim = int(rng.integers(2, 16))
            w = rng.normal(size=dim)
            x = rng.normal(size=dim)
            b = float(rng.normal())
            head = LinearHead(weights=w, bias=b)
            assert abs(score_sentence(x, head) - scalar_logistic_oracle(w, x, b)) < 1e-9

    def test_open_interval_within_representable_range(self):
        # float64 saturates for |z| > ~36; test strict bounds inside it
        rng = np.random.default_rng(4)
        for _ in range(100):
            w = rng.normal(size=4)
            x = rng.normal(size=4)
            head = LinearHead(weights=w, bias=float(rng.uniform(-5, 5)))
            s = score_sentence(x, head)
            assert 0.0 < s < 1.0

    def test_dim_mismatch_rejected(self):
        head = LinearHead(weights=np.zeros(8), bias=0.0)
        with pytest.raises(ContractError):
            score_sentence(np.ones(4), head)


def separable_fixture():
    """Mock embeddings of claim-verb sentences vs. noun phrases."""
    claims = [
        "Merkel fordert den Ausstieg.",
        "Gabriel fordert ein Moratorium.",
        "Die SPD fordert neue Regeln.",
        "Trittin fordert die Abschaltung.",
        "Künast fordert den Wandel.",
        "Der Verband fordert mehr Geld.",
        "Roth fordert eine Wende.",
        "Kraft fordert den Umbau.",
        "Seehofer fordert eine Lösung.",
        "Der BUND fordert den Stopp.",
    ]
    non_claims = [
        "Das alte Kraftwerk am Fluss.",
        "Eine lange Nacht in Berlin.",
        "Der Bericht aus dem Ministerium.",
        "Die Sitzung am Dienstag.",
        "Ein Blick auf die Zahlen.",
        "Das Ende der Debatte.",
        "Die Lage im Land.",
        "Ein Treffen der Fraktionen.",
        "Der Plan für das Jahr.",
        "Die Woche im Rückblick.",
    ]
    examples = [(mock_embed(t), 1) for t in claims] + [(mock_embed(t), 0) for t in non_claims]
    return examples


class TestTrainHead:
    def test_separable_fixture_reaches_perfect_training_accuracy(self):
        examples = separable_fixture()
        head = train_head(examples, epochs=500, learning_rate=1.0)
        correct = sum(
            1 for vec, label in examples if (score_sentence(vec, head) >= 0.5) == bool(label)
        )
        assert correct == len(examples)

    def test_empty_set_rejected(self):
        with pytest.raises(InputError):
            train_head([])

    def test_single_class_rejected(self):
        examples = [(mock_embed("a"), 1), (mock_embed("b"), 1)]
        with pytest.raises(InputError):
            train_head(examples)

    def test_deterministic(self):
        examples = separable_fixture()
        h1 = train_head(examples, epochs=50)
        h2 = train_head(examples, epochs=50)
        assert np.array_equal(h1.weights, h2.weights)
        assert h1.bias == h2.bias

    def test_gradient_matches_central_differences(self):
        rng = np.random.default_rng(11)
        h_step = 1e-5
        for _ in range(20):
            dim = int(rng.integers(2, 8))
            m = int(rng.integers(2, 10))
            X = rng.normal(size=(m, dim))
            y = rng.integers(0, 2, size=m).astype(float)
            head = LinearHead(weights=rng.normal(size=dim), bias=float(rng.normal()))
            gw, gb = cross_entropy_grad(head, X, y)
            numeric = np.zeros(dim)
            for j in range(dim):
                wp = head.weights.copy()
                wm = head.weights.copy()
                wp[j] += h_step
                wm[j] -= h_step
                numeric[j] = (
                    cross_entropy(LinearHead(wp, head.bias), X, y)
                    - cross_entropy(LinearHead(wm, head.bias), X, y)
                ) / (2 * h_step)
            nb = (
                cross_entropy(LinearHead(head.weights, head.bias + h_step), X, y)
                - cross_entropy(LinearHead(head.weights, head.bias - h_step), X, y)
            ) / (2 * h_step)
            analytic = np.concatenate([gw, [gb]])
            numeric_full = np.concatenate([numeric, [nb]])
            rel = np.linalg.norm(analytic - numeric_full) / max(np.linalg.norm(numeric_full), 1e-12)
            assert rel < 1e-4

    def test_head_roundtrip(self, tmp_path):
        head = train_head(separable_fixture(), epochs=20)
        save_head(head, tmp_path / "head.json", trained_on=20)
        loaded = load_head(tmp_path / "head.json")
        assert np.array_equal(loaded.weights, head.weights)
        assert loaded.bias == head.bias


class TestFilterCandidates:
    def scores(self, values):
        return [ClaimScore("d", i, v, text=f"s{i}") for i, v in enumerate(values)]

    def test_threshold_inclusive_at_paper_default(self):
        kept = filter_candidates(self.scores([0.05, 0.10, 0.95]), 0.1)
        assert [c.score for c in kept] == [0.10, 0.95]

    def test_zero_threshold_keeps_all(self):
        kept = filter_candidates(self.scores([0.0, 0.3, 0.9]), 0.0)
        assert len(kept) == 3

    def test_full_threshold_keeps_none_without_perfect_scores(self):
        kept = filter_candidates(self.scores([0.2, 0.99]), 1.0)
        assert kept == []

    def test_monotone_nesting(self):
        rng = np.random.default_rng(5)
        scores = self.scores(rng.uniform(0, 1, size=100).tolist())
        previous = None
        for threshold in np.linspace(0, 1, 20):
            kept = {(c.doc_id, c.sentence_index) for c in filter_candidates(scores, float(threshold))}
            if previous is not None:
                assert kept <= previous
            previous = kept

    def test_order_and_text_preserved(self):
        kept = filter_candidates(self.scores([0.9, 0.2, 0.8]), 0.5)
        assert [c.sentence_index for c in kept] == [0, 2]
        assert kept[0].text == "s0"


class TestImplicitArticleSelection:
    def test_deduplicates_doc_ids(self):
        cands = filter_candidates(
            [ClaimScore("a", 0, 0.9), ClaimScore("a", 1, 0.9), ClaimScore("b", 0, 0.9)], 0.5
        )
        assert implicit_article_selection(cands) == {"a", "b"}

    def test_empty(self):
        assert implicit_article_selection([]) == set()

    def test_all_docs_selected(self):
        cands = filter_candidates(
            [ClaimScore("a", 0, 0.9), ClaimScore("b", 0, 0.9), ClaimScore("c", 0, 0.9)], 0.5
        )
        assert implicit_article_selection(cands) == {"a", "b", "c"}


class TestMockClaimScorer:
    def test_cue_verbs_score_high(self):
        scorer = MockClaimScorer()
        high, low = scorer.score_texts(
            ["Merkel fordert den Ausstieg.", "Das Kraftwerk liegt in Bayern."]
        )
        assert high >= 0.5
        assert low < 0.1

    def test_deterministic(self):
        scorer = MockClaimScorer()
        texts = ["Er warnt vor dem Plan.", "Ein stiller Morgen."]
        assert scorer.score_texts(texts) == scorer.score_texts(texts)


class TestRemoteClaimScorer:
    def test_scores_returned(self, fake_http_server):
        url = fake_http_server({"/claim-score": {"scores": [0.7, 0.1]}})
        scorer = RemoteClaimScorer(url + "/claim-score", retries=1)
        assert scorer.score_texts(["a", "b"]) == [0.7, 0.1]

    def test_count_mismatch_is_contract_error(self, fake_http_server):
        url = fake_http_server({"/claim-score": {"scores": [0.7]}})
        scorer = RemoteClaimScorer(url + "/claim-score", retries=1)
        with pytest.raises(ContractError):
            scorer.score_texts(["a", "b"])

    def test_out_of_range_is_contract_error(self, fake_http_server):
        url = fake_http_server({"/claim-score": {"scores": [1.7]}})
        scorer = RemoteClaimScorer(url + "/claim-score", retries=1)
        with pytest.raises(ContractError):
            scorer.score_texts(["a"])

    def test_unreachable_is_transport_error(self):
        scorer = RemoteClaimScorer("http://127.0.0.1:1/claim-score", retries=2, timeout=0.2)
        with pytest.raises(TransportError):
            scorer.score_texts(["a"])
