"""Synthetic corpus generator built on low-level style transforms.

Base sentences come from a small template grammar (subject + "is" +
optional adverb + verb phrase + object + optional adjunct). Each
requested transform becomes one style, alongside the untouched
"original" style. Every transform plants at least one marker token that
never occurs in base sentences, so the styles are separable by
construction and end-to-end tests have a real signal to find.

Transform names may be composed with "+", e.g.
``to_future_tense+formal_marker`` applies both in order.
"""

import re
from dataclasses import dataclass

import numpy as np

from .corpus import corpus_from_records
from .errors import ConfigError, ValidationError

_SUBJECTS = ("it", "she", "he", "the committee", "the network",
             "the author", "the studio", "the council")
_ADVERBS = ("", "also", "now", "currently", "still")
_VERBS = ("planning", "reviewing", "producing", "drafting",
          "hosting", "organizing")
_OBJECTS = ("another night of original series", "a new proposal",
            "the annual report", "a second season",
            "the budget meeting", "an outreach program")
_ADJUNCTS = ("", "this year", "next month", "for the board",
             "despite the delays")

_AUXILIARIES = ("is", "are", "was", "were", "am",
                "did", "does", "do", "has", "have", "had")


def to_future_tense(text):
    """Rewrite the main verb group to its "will be" form ("is" -> "will be")."""
    words = text.split()
    for i, w in enumerate(words):
        if w.lower() in ("is", "are", "am"):
            words[i] = "will be"
            break
    return " ".join(words)


def info_addition(text):
    """Insert an emphasis token between the auxiliary and the verb phrase."""
    words = text.split()
    at = 1
    for i, w in enumerate(words):
        if w.lower() in _AUXILIARIES:
            at = i + 1
            break
    return " ".join(words[:at] + ["really"] + words[at:])


def formal_marker(text):
    """Append a fixed politeness clause before the final period."""
    stripped = text.rstrip()
    if stripped.endswith("."):
        stripped = stripped[:-1].rstrip()
    return stripped + " , if you please ."


def contraction(text):
    """Contract "<word> is" to "<word>'s" (first occurrence)."""
    return re.sub(r"\b([A-Za-z]+) is\b", r"\1's", text, count=1)


@dataclass(frozen=True)
class Transform:
    name: str
    apply: callable
    # tokens that appear in 100% of transformed sentences and never in
    # base sentences; the separability invariant is checked against this
    marker: callable


TRANSFORMS = {
    "to_future_tense": Transform("to_future_tense", to_future_tense,
                                 marker=lambda t: t == "will"),
    "info_addition": Transform("info_addition", info_addition,
                               marker=lambda t: t == "really"),
    "formal_marker": Transform("formal_marker", formal_marker,
                               marker=lambda t: t == "please"),
    "contraction": Transform("contraction", contraction,
                             marker=lambda t: "'" in t),
}

ORIGINAL_STYLE = "original"


@dataclass(frozen=True)
class SynthConfig:
    n_base_sentences: int = 200
    styles_requested: tuple = ("to_future_tense",)
    sentences_per_style: int = 200
    seed: int = 0


def resolve_transform(name):
    """Look up a transform, resolving "+"-composed names left to right."""
    parts = name.split("+")
    steps = []
    for part in parts:
        if part not in TRANSFORMS:
            raise ConfigError(
                f"unknown transform {part!r}; known: {sorted(TRANSFORMS)}")
        steps.append(TRANSFORMS[part])
    if len(steps) == 1:
        return steps[0]

    def apply(text, steps=tuple(steps)):
        for step in steps:
            text = step.apply(text)
        return text

    markers = tuple(s.marker for s in steps)
    return Transform(name, apply, marker=lambda t: any(m(t) for m in markers))


def _base_sentence(rng):
    subject = _SUBJECTS[rng.integers(len(_SUBJECTS))]
    adverb = _ADVERBS[rng.integers(len(_ADVERBS))]
    verb = _VERBS[rng.integers(len(_VERBS))]
    obj = _OBJECTS[rng.integers(len(_OBJECTS))]
    adjunct = _ADJUNCTS[rng.integers(len(_ADJUNCTS))]
    words = [subject, "is"]
    if adverb:
        words.append(adverb)
    words.append(verb)
    words.append(obj)
    if adjunct:
        words.append(adjunct)
    text = " ".join(words) + " ."
    return text[0].upper() + text[1:]


def generate_synthetic(config, ratios=(0.8, 0.1, 0.1)):
    """Generate a deterministic synthetic corpus per ``config``.

    Styles draw base sentences independently (non-parallel corpus);
    splits are stratified with the same seed.
    """
    if config.sentences_per_style < 2:
        raise ValidationError("sentences_per_style must be >= 2")
    if config.n_base_sentences < 1:
        raise ValidationError("n_base_sentences must be >= 1")
    transforms = [resolve_transform(name) for name in config.styles_requested]

    rng = np.random.default_rng(config.seed)
    base = [_base_sentence(rng) for _ in range(config.n_base_sentences)]

    def draw_texts():
        replace = config.sentences_per_style > len(base)
        picks = rng.choice(len(base), size=config.sentences_per_style,
                           replace=replace)
        return [base[int(i)] for i in picks]

    records = [(text, ORIGINAL_STYLE, None) for text in draw_texts()]
    for transform in transforms:
        records.extend((transform.apply(text), transform.name, None)
                       for text in draw_texts())
    return corpus_from_records(records, default_ratios=ratios,
                               split_seed=config.seed)
