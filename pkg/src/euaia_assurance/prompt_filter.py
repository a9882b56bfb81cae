"""Character-statistics filtering of adversarial prompts.

Two complementary mechanisms, mirroring a layered defense: a static
blocklist over characters and script classes, and a dynamic per-character
log-likelihood-ratio model trained on labeled corpora. Prompts are plain
strings; the unit of analysis is the Unicode code point.

The dynamic score of a prompt is the mean over its characters of

    llr(c) = ln((count_adv(c) + a) / (N_adv + a * V))
           - ln((count_ben(c) + a) / (N_ben + a * V))

with Laplace smoothing ``a`` and vocabulary size ``V`` equal to the number
of distinct characters across both corpora plus one shared bucket for
unseen characters. Training, scoring and evaluation are deterministic.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

from . import vocab
from .triples import Iri, Literal, Triple

MODEL_FORMAT = "charfilter/1"


class Verdict(Enum):
    BENIGN = "benign"
    ADVERSARIAL = "adversarial"


class CorpusFormatError(ValueError):
    """A corpus or model file that does not follow its line format."""


# ----------------------------------------------------------------------
# script classification

class ScriptClass(Enum):
    LATIN = "Latin"
    HAN = "Han"
    CYRILLIC = "Cyrillic"
    GREEK = "Greek"
    COMMON = "Common"
    OTHER = "Other"


# Coarse block table; whole blocks are assigned even where a block mixes in
# the odd symbol. Basic Latin splits into letters (Latin) and the rest
# (Common: digits, punctuation, whitespace, control).
_SCRIPT_RANGES: tuple[tuple[int, int, ScriptClass], ...] = (
    (0x0041, 0x005A, ScriptClass.LATIN),
    (0x0061, 0x007A, ScriptClass.LATIN),
    (0x0000, 0x007F, ScriptClass.COMMON),
    (0x00C0, 0x00FF, ScriptClass.LATIN),
    (0x0100, 0x017F, ScriptClass.LATIN),
    (0x0180, 0x024F, ScriptClass.LATIN),
    (0x1E00, 0x1EFF, ScriptClass.LATIN),
    (0x0370, 0x03FF, ScriptClass.GREEK),
    (0x0400, 0x04FF, ScriptClass.CYRILLIC),
    (0x3400, 0x4DBF, ScriptClass.HAN),
    (0x4E00, 0x9FFF, ScriptClass.HAN),
)


def script_of(char: str) -> ScriptClass:
    """Script class of a single character. First matching range wins."""
    if len(char) != 1:
        raise ValueError("script_of expects a single character")
    point = ord(char)
    for low, high, script in _SCRIPT_RANGES:
        if low <= point <= high:
            return script
    return ScriptClass.OTHER


# ----------------------------------------------------------------------
# corpus statistics

@dataclass(frozen=True)
class CharProfile:
    counts: Mapping[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def char_profile(corpus: Sequence[str]) -> CharProfile:
    """Character counts across all prompts in the corpus."""
    counts: Counter[str] = Counter()
    for prompt in corpus:
        counts.update(prompt)
    return CharProfile(dict(counts))


# ----------------------------------------------------------------------
# static blocklist

def classify_static(
    blocklist: Iterable[str | ScriptClass], prompt: str
) -> tuple[Verdict, list[str]]:
    """Blocklist check against characters and script classes.

    Returns the verdict and the offending characters, each reported once
    in first-occurrence order. The empty prompt is rejected as an error,
    not classified.
    """
    if not prompt:
        raise ValueError("cannot classify an empty prompt")
    blocked_chars: set[str] = set()
    blocked_scripts: set[ScriptClass] = set()
    for entry in blocklist:
        if isinstance(entry, ScriptClass):
            blocked_scripts.add(entry)
        elif isinstance(entry, str) and len(entry) == 1:
            blocked_chars.add(entry)
        else:
            raise ValueError(f"blocklist entries must be single characters or script classes: {entry!r}")
    offenders: list[str] = []
    seen: set[str] = set()
    for char in prompt:
        if char in seen:
            continue
        if char in blocked_chars or script_of(char) in blocked_scripts:
            offenders.append(char)
            seen.add(char)
    verdict = Verdict.ADVERSARIAL if offenders else Verdict.BENIGN
    return verdict, offenders


# ----------------------------------------------------------------------
# dynamic model

@dataclass(frozen=True)
class ModelProvenance:
    corpora: tuple[str, ...]
    trained_at: str | None = None


@dataclass(frozen=True)
class FilterModel:
    llr: Mapping[str, float]
    alpha: float
    vocab_size: int
    oov_score: float
    threshold: float
    provenance: ModelProvenance
    # Optional second feature channel over adjacent character pairs.
    bigram_llr: Mapping[str, float] | None = None
    bigram_vocab_size: int | None = None
    bigram_oov_score: float | None = None


def _llr_table(
    adv_counts: Mapping[str, int],
    ben_counts: Mapping[str, int],
    alpha: float,
) -> tuple[dict[str, float], int, float]:
    union = sorted(set(adv_counts) | set(ben_counts))
    v = len(union) + 1
    n_adv = sum(adv_counts.values())
    n_ben = sum(ben_counts.values())

    def llr(key: str) -> float:
        adv = math.log((adv_counts.get(key, 0) + alpha) / (n_adv + alpha * v))
        ben = math.log((ben_counts.get(key, 0) + alpha) / (n_ben + alpha * v))
        return adv - ben

    table = {key: llr(key) for key in union}
    oov = math.log(alpha / (n_adv + alpha * v)) - math.log(alpha / (n_ben + alpha * v))
    return table, v, oov


def _bigrams(prompt: str) -> list[str]:
    return [prompt[i : i + 2] for i in range(len(prompt) - 1)]


def train_dynamic(
    adversarial: Sequence[str],
    benign: Sequence[str],
    alpha: float = 1.0,
    *,
    bigrams: bool = False,
    corpus_ids: tuple[str, str] = ("adversarial", "benign"),
    trained_at: str | None = None,
) -> FilterModel:
    """Fit the per-character model and calibrate its decision threshold.

    The default threshold maximizes Youden's J (TPR - FPR) on the training
    prompts themselves; among equally good cut points the largest wins, so
    a useless model defaults toward benign. Pass ``trained_at`` to stamp
    the provenance; it is left unstamped by default so training is fully
    reproducible.
    """
    if not adversarial or not benign:
        raise ValueError("both corpora must be non-empty")
    if alpha <= 0:
        raise ValueError("smoothing alpha must be positive")

    table, v, oov = _llr_table(char_profile(adversarial).counts, char_profile(benign).counts, alpha)
    model = FilterModel(
        llr=table,
        alpha=alpha,
        vocab_size=v,
        oov_score=oov,
        threshold=0.0,
        provenance=ModelProvenance(tuple(corpus_ids), trained_at),
    )
    if bigrams:
        bi_table, bi_v, bi_oov = _llr_table(
            Counter(b for p in adversarial for b in _bigrams(p)),
            Counter(b for p in benign for b in _bigrams(p)),
            alpha,
        )
        model = replace(
            model, bigram_llr=bi_table, bigram_vocab_size=bi_v, bigram_oov_score=bi_oov
        )
    return replace(model, threshold=_youden_threshold(model, adversarial, benign))


def _youden_threshold(
    model: FilterModel, adversarial: Sequence[str], benign: Sequence[str]
) -> float:
    adv_scores = [score(model, p) for p in adversarial if p]
    ben_scores = [score(model, p) for p in benign if p]
    if not adv_scores and not ben_scores:
        return 0.0
    candidates = sorted(set(adv_scores + ben_scores))
    candidates.insert(0, candidates[0] - 1.0)
    best_t, best_j = candidates[0], -2.0
    for t in candidates:
        tpr = sum(1 for s in adv_scores if s > t) / len(adv_scores) if adv_scores else 0.0
        fpr = sum(1 for s in ben_scores if s > t) / len(ben_scores) if ben_scores else 0.0
        j = tpr - fpr
        if j >= best_j:
            best_t, best_j = t, j
    return best_t


def score(model: FilterModel, prompt: str) -> float:
    """Mean per-character log-likelihood ratio; higher means more adversarial.

    Unseen characters fall into the shared out-of-vocabulary bucket. With
    the bigram channel enabled, the unigram and bigram means are averaged
    at equal weight (single-character prompts have no bigrams and keep the
    unigram score).
    """
    if not prompt:
        raise ValueError("score is undefined for an empty prompt")
    unigram = math.fsum(model.llr.get(c, model.oov_score) for c in prompt) / len(prompt)
    if model.bigram_llr is None or len(prompt) < 2:
        return unigram
    pairs = _bigrams(prompt)
    bigram = math.fsum(model.bigram_llr.get(b, model.bigram_oov_score) for b in pairs) / len(pairs)
    return (unigram + bigram) / 2.0


def classify_dynamic(model: FilterModel, prompt: str) -> Verdict:
    """Adversarial iff the score strictly exceeds the threshold; ties are benign."""
    return Verdict.ADVERSARIAL if score(model, prompt) > model.threshold else Verdict.BENIGN


# ----------------------------------------------------------------------
# evaluation

@dataclass(frozen=True)
class FilterMetrics:
    true_positive_rate: float
    false_positive_rate: float
    precision: float
    auc: float | None
    corpus_sizes: tuple[int, int]


def evaluate(model: FilterModel, labeled: Sequence[tuple[str, Verdict]]) -> FilterMetrics:
    """Confusion rates at the model threshold plus ROC AUC.

    The positive class is adversarial. AUC comes from a trapezoid sweep
    over the distinct scores, which equals the pairwise rank statistic
    with ties counted one half. With a single-class input the AUC is
    undefined and reported as ``None``; the rates are still computed.
    """
    if not labeled:
        raise ValueError("evaluate requires a non-empty labeled corpus")
    scored = [(score(model, prompt), verdict) for prompt, verdict in labeled]
    adv_total = sum(1 for _, v in scored if v is Verdict.ADVERSARIAL)
    ben_total = len(scored) - adv_total

    tp = sum(1 for s, v in scored if v is Verdict.ADVERSARIAL and s > model.threshold)
    fp = sum(1 for s, v in scored if v is Verdict.BENIGN and s > model.threshold)
    tpr = tp / adv_total if adv_total else 0.0
    fpr = fp / ben_total if ben_total else 0.0
    precision = tp / (tp + fp) if (tp + fp) else 0.0

    auc = _trapezoid_auc(scored, adv_total, ben_total) if adv_total and ben_total else None
    return FilterMetrics(tpr, fpr, precision, auc, (adv_total, ben_total))


def _trapezoid_auc(
    scored: Sequence[tuple[float, Verdict]], adv_total: int, ben_total: int
) -> float:
    ordered = sorted(scored, key=lambda pair: pair[0], reverse=True)
    points = [(0.0, 0.0)]
    tp = fp = 0
    index = 0
    while index < len(ordered):
        cut = ordered[index][0]
        while index < len(ordered) and ordered[index][0] == cut:
            if ordered[index][1] is Verdict.ADVERSARIAL:
                tp += 1
            else:
                fp += 1
            index += 1
        points.append((fp / ben_total, tp / adv_total))
    return math.fsum(
        (x1 - x0) * (y1 + y0) / 2.0 for (x0, y0), (x1, y1) in zip(points, points[1:])
    )


# ----------------------------------------------------------------------
# triple view

def filter_to_triples(model: FilterModel, metrics: FilterMetrics) -> list[Triple]:
    """Evidence triples for the dynamic filter: metrics, training corpora
    and exactly one mitigates link to the character-combination attack.
    """
    defense = Iri("def", "dynamicFilter")
    triples = [
        Triple(defense, vocab.HAS_METRIC, Literal(f"tpr={metrics.true_positive_rate:.4f}")),
        Triple(defense, vocab.HAS_METRIC, Literal(f"fpr={metrics.false_positive_rate:.4f}")),
        Triple(defense, vocab.HAS_METRIC, Literal(f"precision={metrics.precision:.4f}")),
    ]
    if metrics.auc is not None:
        triples.append(Triple(defense, vocab.HAS_METRIC, Literal(f"auc={metrics.auc:.4f}")))
    for corpus_id in model.provenance.corpora:
        triples.append(Triple(defense, vocab.TRAINED_ON, Iri("src", _iri_safe(corpus_id))))
    triples.append(Triple(defense, vocab.MITIGATES, Iri("atk", "charCombo")))
    return triples


def _iri_safe(corpus_id: str) -> str:
    local = re.sub(r"[^A-Za-z0-9_.-]", "-", corpus_id)
    if not re.match(r"^[A-Za-z0-9_]", local):
        local = "corpus-" + local
    return local or "corpus"


# ----------------------------------------------------------------------
# file formats

def save_model(model: FilterModel) -> str:
    """Versioned JSON Lines: a header record, then one record per character
    (code point and llr, 6 decimal places, sorted by code point).
    """
    provenance = {"corpora": list(model.provenance.corpora), "trained_at": model.provenance.trained_at}
    header: dict = {
        "format": MODEL_FORMAT,
        "alpha": model.alpha,
        "vocab_size": model.vocab_size,
        "threshold": round(model.threshold, 6),
        "oov_score": round(model.oov_score, 6),
        "provenance": provenance,
    }
    if model.bigram_llr is not None:
        header["bigram_vocab_size"] = model.bigram_vocab_size
        header["bigram_oov_score"] = round(model.bigram_oov_score or 0.0, 6)
    lines = [json.dumps(header, ensure_ascii=False)]
    for char in sorted(model.llr, key=ord):
        lines.append(f'{{"char": {ord(char)}, "llr": {model.llr[char]:.6f}}}')
    if model.bigram_llr is not None:
        for pair in sorted(model.bigram_llr, key=lambda p: (ord(p[0]), ord(p[1]))):
            lines.append(
                f'{{"chars": [{ord(pair[0])}, {ord(pair[1])}], "llr": {model.bigram_llr[pair]:.6f}}}'
            )
    return "\n".join(lines) + "\n"


def load_model(text: str) -> FilterModel:
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines:
        raise CorpusFormatError("empty model file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"model header is not valid JSON: {exc}") from None
    if header.get("format") != MODEL_FORMAT:
        raise CorpusFormatError(f"unsupported model format {header.get('format')!r}")
    llr: dict[str, float] = {}
    bigram_llr: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], 2):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {lineno}: invalid JSON: {exc}") from None
        if "char" in record:
            llr[chr(record["char"])] = float(record["llr"])
        elif "chars" in record:
            bigram_llr[chr(record["chars"][0]) + chr(record["chars"][1])] = float(record["llr"])
        else:
            raise CorpusFormatError(f"line {lineno}: expected a char or chars record")
    provenance = header.get("provenance", {})
    has_bigrams = "bigram_vocab_size" in header
    return FilterModel(
        llr=llr,
        alpha=float(header["alpha"]),
        vocab_size=int(header["vocab_size"]),
        oov_score=float(header["oov_score"]),
        threshold=float(header["threshold"]),
        provenance=ModelProvenance(
            tuple(provenance.get("corpora", ())), provenance.get("trained_at")
        ),
        bigram_llr=bigram_llr if has_bigrams else None,
        bigram_vocab_size=header.get("bigram_vocab_size"),
        bigram_oov_score=header.get("bigram_oov_score"),
    )


def parse_corpus(text: str) -> list[str]:
    """One prompt per line, kept verbatim; whitespace-only lines are skipped."""
    return [line for line in text.split("\n") if line.strip()]


_LABELS = {"A": Verdict.ADVERSARIAL, "B": Verdict.BENIGN}


def parse_labeled_corpus(text: str) -> list[tuple[str, Verdict]]:
    """Labeled corpus lines: ``A<TAB>prompt`` or ``B<TAB>prompt``."""
    labeled: list[tuple[str, Verdict]] = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line:
            continue
        label, sep, prompt = line.partition("\t")
        if not sep or label not in _LABELS:
            raise CorpusFormatError(f"line {lineno}: expected 'A<TAB>prompt' or 'B<TAB>prompt'")
        labeled.append((prompt, _LABELS[label]))
    return labeled
