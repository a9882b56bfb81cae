"""IRI vocabulary shared across the toolkit.

Classes and predicates are ordinary IRIs with no inference semantics
attached; consumers query them with plain pattern matching.
"""

from __future__ import annotations

from .triples import Iri

RDF_TYPE = Iri("rdf", "type")

# duty registry
DUTY = Iri("euaia", "Duty")
CITES_ARTICLE = Iri("euaia", "citesArticle")
OBLIGATES = Iri("euaia", "obligates")
HAS_QUALIFIER = Iri("euaia", "hasQualifier")

# argument structure
GSN_STATEMENT = Iri("gsn", "statement")
GSN_SUPPORTED_BY = Iri("gsn", "supportedBy")
GSN_IN_CONTEXT_OF = Iri("gsn", "inContextOf")
GSN_CHALLENGES = Iri("gsn", "challenges")

# cross-domain assurance links
OPERATIONALIZES = Iri("assures", "operationalizes")
EVIDENCED_BY = Iri("assures", "evidencedBy")
MITIGATES = Iri("assures", "mitigates")
# Inverse of MITIGATES, asserted alongside it so causal chains can start
# with the attack in subject position while staying verbatim store triples.
MITIGATED_BY = Iri("assures", "mitigatedBy")
DERIVED_FROM = Iri("assures", "derivedFrom")
REBUTTED_BY = Iri("assures", "rebuttedBy")
HAS_METRIC = Iri("assures", "hasMetric")
TRAINED_ON = Iri("assures", "trainedOn")

ATTACK = Iri("assures", "Attack")
DEFENSE = Iri("assures", "Defense")
SOURCE = Iri("assures", "Source")


def duty_iri(duty_id: int) -> Iri:
    return Iri("euaia", f"d{duty_id}")


def stakeholder_iri(code: str) -> Iri:
    return Iri("euaia", f"stakeholder{code}")


def gsn_node_iri(node_id: str) -> Iri:
    return Iri("gsn", node_id)
