from __future__ import annotations

import euaia_assurance as ea
from euaia_assurance.exemplar import (
    ATTACK,
    TOY_ADVERSARIAL,
    TOY_BENIGN,
    dynamic_filter_links,
    exemplar_links,
)
from euaia_assurance.gsn import GsnNodeKind
from euaia_assurance.triples import Store

from conftest import FIXTURES


def test_exemplar_argument_is_clean(argument):
    assert ea.validate(argument) == []
    assert argument.duty_link == "euaia:d9"
    kinds = [node.kind for node in argument.nodes]
    assert kinds.count(GsnNodeKind.GOAL) == 4
    assert kinds.count(GsnNodeKind.SOLUTION) == 2
    assert kinds.count(GsnNodeKind.COUNTERCLAIM) == 1


def test_gsn_fixture_matches_builder(argument):
    on_disk = (FIXTURES / "art15-5.gsn").read_text(encoding="utf-8")
    assert on_disk == ea.serialize_gsn(argument)
    assert ea.parse_gsn(on_disk) == argument


def test_knowledge_links_fixture_matches_builder():
    on_disk = (FIXTURES / "knowledge-links.ttl").read_text(encoding="utf-8")
    built = ea.export_triples(Store().assert_all(exemplar_links()))
    assert on_disk == built


def test_dynamic_links_fixture_matches_builder():
    on_disk = (FIXTURES / "dynamic-links.ttl").read_text(encoding="utf-8")
    built = ea.export_triples(Store().assert_all(dynamic_filter_links()))
    assert on_disk == built


def test_toy_corpus_fixtures_match_constants():
    adversarial = ea.parse_corpus((FIXTURES / "toy-adversarial.txt").read_text())
    benign = ea.parse_corpus((FIXTURES / "toy-benign.txt").read_text())
    assert tuple(adversarial) == TOY_ADVERSARIAL == ("!x!", "!!y")
    assert tuple(benign) == TOY_BENIGN == ("xy", "yy")


def test_toy_labeled_fixture():
    labeled = ea.parse_labeled_corpus((FIXTURES / "toy-labeled.txt").read_text())
    assert [(p, v.value) for p, v in labeled] == [
        ("!x!", "adversarial"),
        ("!!y", "adversarial"),
        ("xy", "benign"),
        ("yy", "benign"),
    ]


def test_attack_constant_is_wired_into_the_links():
    assert any(t.subject == ATTACK for t in exemplar_links())
    assert any(t.subject == ATTACK for t in dynamic_filter_links())


def test_big_corpora_fixtures_train_a_separating_model():
    adversarial = ea.parse_corpus((FIXTURES / "adversarial.txt").read_text())
    benign = ea.parse_corpus((FIXTURES / "benign.txt").read_text())
    assert len(adversarial) == len(benign) == 12
    model = ea.train_dynamic(adversarial, benign)
    labeled = [(p, ea.Verdict.ADVERSARIAL) for p in adversarial] + [
        (p, ea.Verdict.BENIGN) for p in benign
    ]
    metrics = ea.evaluate(model, labeled)
    assert metrics.auc is not None and metrics.auc > 0.95
    assert metrics.true_positive_rate >= 0.9
    assert metrics.false_positive_rate <= 0.1
