"""Hypothesis construction, mock NLI behaviour, and stance classification."""

import numpy as np
import pytest

from claimnet.categorize import Codebook
from claimnet.errors import ConfigError, ContractError, InputError
from claimnet.stance import (
    HypothesisPair,
    MockNliScorer,
    NliScores,
    RemoteNliScorer,
    StanceConfig,
    build_hypotheses,
    classify_stance,
    mock_nli,
)


@pytest.fixture
def codebook():
    return Codebook(
        labels={
            101: "Ausstieg (schnell)",
            102: "Ausstieg (sofort)",
            130: "Laufzeitverlängerung",
            400: "Verfahren",
            999: "other",
        },
        excluded=frozenset({400, 999}),
    )


class TestBuildHypotheses:
    def test_default_negation_template(self, codebook):
        pair = build_hypotheses(101, codebook, StanceConfig())
        assert pair.positive == "Ausstieg (schnell)"
        assert pair.negative == "warnt vor Ausstieg (schnell)"

    def test_override_wins(self, codebook):
        cfg = StanceConfig(overrides={130: "gegen {phrase}"})
        pair = build_hypotheses(130, codebook, cfg)
        assert pair.negative == "gegen Laufzeitverlängerung"
        # other codes keep the default
        assert build_hypotheses(101, codebook, cfg).negative == "warnt vor Ausstieg (schnell)"

    def test_template_without_slot_rejected(self, codebook):
        with pytest.raises(ConfigError):
            build_hypotheses(101, codebook, StanceConfig(negation_template="dagegen"))

    def test_unknown_code_rejected(self, codebook):
        with pytest.raises(InputError):
            build_hypotheses(555, codebook, StanceConfig())

    def test_excluded_code_rejected(self, codebook):
        with pytest.raises(InputError):
            build_hypotheses(400, codebook, StanceConfig())


class TestMockNli:
    def test_identity_pair_maximal(self):
        scores = mock_nli("genau derselbe Satz", "genau derselbe Satz")
        assert scores.entailment >= 0.9
        # no other pair can exceed the identity entailment
        other = mock_nli("ganz anderer Satz", "genau derselbe Satz")
        assert other.entailment <= scores.entailment

    def test_negation_penalty(self):
        plain = mock_nli("X fordert Y", "Y")
        negated = mock_nli("X fordert Y", "warnt vor Y")
        assert negated.entailment < plain.entailment

    def test_scores_sum_to_one_on_random_pairs(self):
        import random

        rng = random.Random(17)
        words = ["atom", "ausstieg", "gegen", "nicht", "warnt", "vor", "kein",
                 "plan", "energie", "netz", "kohle"]
        for _ in range(1000):
            premise = " ".join(rng.choices(words, k=rng.randint(1, 8)))
            hypothesis = " ".join(rng.choices(words, k=rng.randint(1, 8)))
            s = mock_nli(premise, hypothesis)
            assert abs(s.entailment + s.neutral + s.contradiction - 1.0) < 1e-9
            for v in (s.entailment, s.neutral, s.contradiction):
                assert 0.0 <= v <= 1.0

    def test_empty_input_rejected(self):
        with pytest.raises(InputError):
            mock_nli("", "x")
        with pytest.raises(InputError):
            mock_nli("x", "")

    def test_deterministic(self):
        a = mock_nli("Merkel fordert den Ausstieg", "Ausstieg")
        b = mock_nli("Merkel fordert den Ausstieg", "Ausstieg")
        assert (a.entailment, a.neutral, a.contradiction) == (
            b.entailment,
            b.neutral,
            b.contradiction,
        )


class TestClassifyStance:
    def test_supporting_sentence_is_positive(self):
        # claim sentence entailing the category phrase more than its negation
        pair = HypothesisPair(
            positive="schneller Atomausstieg", negative="warnt vor schneller Atomausstieg"
        )
        sentence = "Angela Merkel fordert die schnelle Abschaltung aller Atomkraftwerke und den schnellen Atomausstieg."
        polarity, margin = classify_stance(sentence, pair, MockNliScorer())
        assert polarity == 1
        assert margin > 0

    def test_sentence_equal_to_negative_hypothesis_is_negative(self):
        pair = HypothesisPair(positive="Ausstieg (sofort)", negative="warnt vor Ausstieg (sofort)")
        polarity, margin = classify_stance(
            "warnt vor Ausstieg (sofort)", pair, MockNliScorer()
        )
        assert polarity == -1
        assert margin < 0

    def test_tie_uses_policy_and_zero_margin(self):
        class ConstantScorer:
            def score(self, premise, hypothesis):
                return NliScores(entailment=0.4, neutral=0.5, contradiction=0.1)

        pair = HypothesisPair(positive="a b", negative="c d")
        polarity, margin = classify_stance("x", pair, ConstantScorer())
        assert (polarity, margin) == (1, 0.0)
        polarity, margin = classify_stance("x", pair, ConstantScorer(), tie_polarity=-1)
        assert (polarity, margin) == (-1, 0.0)

    def test_swapping_hypotheses_flips_polarity(self):
        pair = HypothesisPair(positive="Moratorium", negative="warnt vor Moratorium")
        swapped = HypothesisPair(positive=pair.negative, negative=pair.positive)
        sentence = "Der Kanzler fordert ein Moratorium"
        p1, m1 = classify_stance(sentence, pair, MockNliScorer())
        p2, m2 = classify_stance(sentence, swapped, MockNliScorer())
        assert m1 != 0
        assert p2 == -p1
        assert abs(m1 + m2) < 1e-12

    def test_only_ordering_matters(self):
        # any strictly monotone rescaling of both entailments keeps polarity
        class PairScorer:
            def __init__(self, e_pos, e_neg):
                self.values = {"POS": e_pos, "NEG": e_neg}

            def score(self, premise, hypothesis):
                e = self.values[hypothesis]
                return NliScores(entailment=e, neutral=1.0 - e, contradiction=0.0)

        rng = np.random.default_rng(21)
        pair = HypothesisPair(positive="POS", negative="NEG")
        for _ in range(50):
            e_pos, e_neg = rng.uniform(0.01, 0.99, size=2)
            p_raw, _ = classify_stance("x", pair, PairScorer(e_pos, e_neg))
            p_scaled, _ = classify_stance("x", pair, PairScorer(e_pos / 3, e_neg / 3))
            assert p_raw == p_scaled

    def test_invalid_scorer_response_rejected(self):
        class BrokenScorer:
            def score(self, premise, hypothesis):
                return NliScores(entailment=0.9, neutral=0.9, contradiction=0.9)

        pair = HypothesisPair(positive="a", negative="b")
        with pytest.raises(ContractError):
            classify_stance("x", pair, BrokenScorer())


class TestRemoteNliScorer:
    def test_scores_parsed(self, fake_http_server):
        url = fake_http_server(
            {"/nli": {"model_id": "m", "scores": [
                {"entailment": 0.7, "neutral": 0.2, "contradiction": 0.1}
            ]}}
        )
        scorer = RemoteNliScorer(url + "/nli", retries=1)
        s = scorer.score("premise", "hypothesis")
        assert s.entailment == 0.7

    def test_count_mismatch_is_contract_error(self, fake_http_server):
        url = fake_http_server({"/nli": {"model_id": "m", "scores": []}})
        scorer = RemoteNliScorer(url + "/nli", retries=1)
        with pytest.raises(ContractError):
            scorer.score("p", "h")

    def test_invalid_sum_from_remote_rejected_in_classify(self, fake_http_server):
        url = fake_http_server(
            {"/nli": {"model_id": "m", "scores": [
                {"entailment": 0.9, "neutral": 0.9, "contradiction": 0.1}
            ]}}
        )
        scorer = RemoteNliScorer(url + "/nli", retries=1)
        with pytest.raises(ContractError):
            classify_stance("x", HypothesisPair(positive="a", negative="b"), scorer)


class TestStanceConfig:
    def test_bad_tie_policy_rejected(self):
        with pytest.raises(ConfigError):
            StanceConfig(tie_polarity=0).validate()

    def test_override_template_validated(self):
        with pytest.raises(ConfigError):
            StanceConfig(overrides={101: "{phrase} und {phrase}"}).validate()
