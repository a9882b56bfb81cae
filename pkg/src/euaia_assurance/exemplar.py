"""Worked example: assuring the cybersecurity duty for an LLM-based system.

Builds the argument for duty 9 (Art. 15(5): cybersecurity measures against
adversarial and poisoning attacks) around character-combination prompt
attacks, with a static blocklist filter and a dynamic character-statistics
filter as deployed defenses and retraining kept as an undeveloped goal.
The matching DSL and triple fixtures under ``fixtures/`` are serializations
of these builders; tests keep them in sync.
"""

from __future__ import annotations

from . import vocab
from .gsn import GsnArgument, GsnEdge, GsnNode, GsnNodeKind, GsnRelation
from .triples import Iri, Triple

ATTACK = Iri("atk", "charCombo")
STATIC_FILTER = Iri("def", "staticFilter")
DYNAMIC_FILTER = Iri("def", "dynamicFilter")
ATTACK_SOURCE = Iri("src", "charComboStudy")

# Minimal corpora that still separate the classes perfectly; used by the
# worked examples and the hand-checked training tests.
TOY_ADVERSARIAL: tuple[str, ...] = ("!x!", "!!y")
TOY_BENIGN: tuple[str, ...] = ("xy", "yy")


def exemplar_argument() -> GsnArgument:
    """The duty-9 argument: one strategy, two evidenced defenses, one
    undeveloped retraining goal, one open counterclaim."""
    nodes = [
        GsnNode(
            "G1",
            GsnNodeKind.GOAL,
            "Cybersecurity measures against adversarial and poisoning attacks "
            "are established for the LLM-based system.",
        ),
        GsnNode(
            "G2",
            GsnNodeKind.GOAL,
            "Prompts carrying blocklisted characters or scripts are screened "
            "out before they reach the model.",
        ),
        GsnNode(
            "G3",
            GsnNodeKind.GOAL,
            "Adversarial prompts are distinguished from benign prompts by a "
            "calibrated per-character score.",
        ),
        GsnNode(
            "G4",
            GsnNodeKind.GOAL,
            "The model is retrained to reduce its vulnerability to "
            "character-level attacks.",
            undeveloped=True,
        ),
        GsnNode(
            "S1",
            GsnNodeKind.STRATEGY,
            "Argue over mitigation of prompt attacks that exploit unusual "
            "character combinations.",
        ),
        GsnNode(
            "Sn1",
            GsnNodeKind.SOLUTION,
            "Static blocklist filter deployed at the prompt gateway; screening "
            "verdicts are logged for audit.",
        ),
        GsnNode(
            "Sn2",
            GsnNodeKind.SOLUTION,
            "Dynamic character-statistics filter trained on labeled corpora; "
            "threshold calibrated and metrics recorded.",
        ),
        GsnNode(
            "C1",
            GsnNodeKind.CONTEXT,
            "Published red-team results show prompts built from unusual "
            "character combinations eliciting harmful output across scripts.",
        ),
        GsnNode(
            "J1",
            GsnNodeKind.JUSTIFICATION,
            "Screening at the character level targets the mechanism these "
            "attacks rely on, independent of the model internals.",
        ),
        GsnNode(
            "CC1",
            GsnNodeKind.COUNTERCLAIM,
            "Low-effort character attacks keep succeeding against deployed "
            "guardrails, so filtering alone may not hold.",
        ),
    ]
    edges = [
        GsnEdge("G1", "S1", GsnRelation.SUPPORTED_BY),
        GsnEdge("S1", "G2", GsnRelation.SUPPORTED_BY),
        GsnEdge("S1", "G3", GsnRelation.SUPPORTED_BY),
        GsnEdge("S1", "G4", GsnRelation.SUPPORTED_BY),
        GsnEdge("G2", "Sn1", GsnRelation.SUPPORTED_BY),
        GsnEdge("G3", "Sn2", GsnRelation.SUPPORTED_BY),
        GsnEdge("S1", "C1", GsnRelation.IN_CONTEXT_OF),
        GsnEdge("S1", "J1", GsnRelation.IN_CONTEXT_OF),
        GsnEdge("CC1", "Sn1", GsnRelation.CHALLENGES),
    ]
    argument = GsnArgument()
    for node in nodes:
        argument = argument.add_node(node)
    for edge in edges:
        argument = argument.add_edge(edge)
    return argument.with_duty_link("euaia:d9")


def exemplar_links() -> list[Triple]:
    """Knowledge-graph wiring for the base example: entity types, the
    attack's source, and the static filter as deployed, evidenced defense.

    The dynamic filter joins through :func:`dynamic_filter_links` plus the
    triples emitted by training, so the base store traces exactly one
    attack-to-duty chain.
    """
    return [
        Triple(ATTACK, vocab.RDF_TYPE, vocab.ATTACK),
        Triple(STATIC_FILTER, vocab.RDF_TYPE, vocab.DEFENSE),
        Triple(ATTACK_SOURCE, vocab.RDF_TYPE, vocab.SOURCE),
        Triple(ATTACK, vocab.DERIVED_FROM, ATTACK_SOURCE),
        Triple(STATIC_FILTER, vocab.MITIGATES, ATTACK),
        Triple(ATTACK, vocab.MITIGATED_BY, STATIC_FILTER),
        Triple(Iri("gsn", "Sn1"), vocab.EVIDENCED_BY, STATIC_FILTER),
    ]


def dynamic_filter_links() -> list[Triple]:
    """Wiring that connects the trained dynamic filter into the argument."""
    return [
        Triple(DYNAMIC_FILTER, vocab.RDF_TYPE, vocab.DEFENSE),
        Triple(ATTACK, vocab.MITIGATED_BY, DYNAMIC_FILTER),
        Triple(Iri("gsn", "Sn2"), vocab.EVIDENCED_BY, DYNAMIC_FILTER),
    ]
