from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

import euaia_assurance as ea
from euaia_assurance.exemplar import TOY_ADVERSARIAL, TOY_BENIGN
from euaia_assurance.factsheet import FactsheetError, render_factsheet, render_html
from euaia_assurance.gsn import GsnArgument, GsnEdge, GsnNode, GsnNodeKind, GsnRelation
from euaia_assurance.triples import Store


@pytest.fixture(scope="module")
def toy_metrics(toy_model):
    labeled = [(p, ea.Verdict.ADVERSARIAL) for p in TOY_ADVERSARIAL] + [
        (p, ea.Verdict.BENIGN) for p in TOY_BENIGN
    ]
    return ea.evaluate(toy_model, labeled)


@pytest.fixture(scope="module")
def rendered(registry, argument, full_store, toy_model, toy_metrics):
    store = full_store.assert_all(ea.filter_to_triples(toy_model, toy_metrics))
    return render_factsheet(registry, argument, store, toy_metrics)


def test_sections_in_order(rendered):
    headings = [line for line in rendered.split("\n") if line.startswith("#")]
    assert headings == [
        "# Robustness Assurance Factsheet",
        "## 1. System identification",
        "## 2. Duty coverage",
        "## 3. Argument summary",
        "## 4. Defense metrics",
        "## 5. Open counterclaims",
        "## 6. Source provenance",
    ]


def test_duty_table_has_23_rows(rendered):
    rows = [
        line
        for line in rendered.split("\n")
        if line.startswith("|") and not line.startswith(("| #", "|--"))
    ]
    assert len(rows) == 23
    nine = next(row for row in rows if row.startswith("| 9 "))
    assert "| contested |" in nine
    assert "| 15.5 |" in nine
    assert sum("| uncovered |" in row for row in rows) == 22


def test_qualifiers_flag_human_judgment(rendered):
    assert "reasonably foreseeable (human judgment required)" in rendered
    nine = next(row for row in rendered.split("\n") if row.startswith("| 9 "))
    assert "| none |" in nine


def test_narrative_lines(rendered):
    assert (
        "- Duty 9 (15.5) is operationalized by a recorded argument and "
        "evidenced by 2 solutions; 1 counterclaim remains open." in rendered
    )
    assert "- 22 of 23 duties have no evidence-supported argument" in rendered


def test_argument_tree_names_evidence_and_challenges(rendered):
    assert "[evidence: def:staticFilter]" in rendered
    assert "[evidence: def:dynamicFilter]" in rendered
    assert "[challenged by CC1]" in rendered
    assert "[undeveloped]" in rendered
    assert "[context C1]" in rendered
    assert "[justification J1]" in rendered


def test_metrics_section(rendered):
    assert "- True positive rate: 1.0000" in rendered
    assert "- AUC: 1.0000" in rendered
    assert "- Dynamic filter trained on: src:toy-adversarial, src:toy-benign" in rendered


def test_counterclaims_section(rendered):
    assert "- CC1 challenges Sn1:" in rendered


def test_provenance_section(rendered):
    assert "- Sources: src:charComboStudy" in rendered
    assert "- atk:charCombo derives from src:charComboStudy" in rendered


def test_plain_punctuation(rendered):
    assert "—" not in rendered  # em dash
    assert "–" not in rendered  # en dash


def test_deterministic_output(registry, argument, full_store):
    first = render_factsheet(registry, argument, full_store)
    second = render_factsheet(registry, argument, full_store)
    assert first == second
    assert first.endswith("\n")


def test_metrics_optional(registry, argument, full_store):
    text = render_factsheet(registry, argument, full_store)
    section = text.split("## 4. Defense metrics")[1].split("##")[0]
    assert section.strip() == "None."


def test_empty_argument_renders(registry):
    store = Store().assert_all(ea.registry_to_triples(registry))
    text = render_factsheet(registry, GsnArgument(), store)
    assert "- Argument: empty" in text
    summary = text.split("## 3. Argument summary")[1].split("##")[0]
    assert summary.strip() == "None."
    counterclaims = text.split("## 5. Open counterclaims")[1].split("##")[0]
    assert counterclaims.strip() == "None."
    provenance = text.split("## 6. Source provenance")[1]
    assert provenance.strip() == "None."


# ----------------------------------------------------------------------
# refusals


def test_refuses_invalid_argument(registry, full_store):
    broken = GsnArgument(
        nodes=(GsnNode("G1", GsnNodeKind.GOAL, "g"),),
        edges=(GsnEdge("G1", "G9", GsnRelation.SUPPORTED_BY),),
    )
    with pytest.raises(FactsheetError):
        render_factsheet(registry, broken, full_store)


def test_refuses_unknown_duty_link(registry, argument, full_store):
    mislinked = argument.with_duty_link("euaia:d99")
    with pytest.raises(FactsheetError):
        render_factsheet(registry, mislinked, full_store)


def test_refuses_store_without_argument_triples(registry, argument):
    store = Store().assert_all(ea.registry_to_triples(registry))
    with pytest.raises(FactsheetError):
        render_factsheet(registry, argument, store)


def test_refuses_store_without_registry(registry, argument):
    store = Store().assert_all(ea.argument_to_triples(argument))
    with pytest.raises(ea.CoverageError):
        render_factsheet(registry, argument, store)


# ----------------------------------------------------------------------
# HTML


def test_html_is_standalone_and_well_formed(rendered):
    page = render_html(rendered)
    assert page.startswith("<!DOCTYPE html>\n")
    root = ET.fromstring(page.split("\n", 1)[1])
    assert root.tag == "html"
    assert "http://" not in page.replace("http://www.w3.org", "")
    assert "<script" not in page


def test_html_structure(rendered):
    page = render_html(rendered)
    assert page.count("<h1>") == 1
    assert page.count("<h2>") == 6
    assert page.count("<tr>") == 24  # header plus 23 duties
    assert "<pre><code>" in page
    assert "<title>Robustness Assurance Factsheet</title>" in page


def test_html_escapes_angle_brackets():
    page = render_html("# T\n\n- a < b and c > d\n")
    assert "a &lt; b" in page
    ET.fromstring(page.split("\n", 1)[1])
