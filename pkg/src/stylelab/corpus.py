"""Corpus data model: sentences, style labels, vocab, splits, file I/O.

Corpora are immutable after construction and always satisfy the
invariants enforced by :meth:`StyleCorpus.validate`: splits partition
the sentence ids and every style keeps at least two sentences in every
split (two are needed to form a positive pair).
"""

import json
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParseError, ValidationError

SPLITS = ("train", "dev", "test")

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*|[^\sa-z0-9']")


class Vocab:
    """Dense token-to-id mapping with PAD and UNK specials."""

    def __init__(self, tokens):
        self.id_to_token = [PAD_TOKEN, UNK_TOKEN] + list(tokens)
        self.token_to_id = {t: i for i, t in enumerate(self.id_to_token)}
        if len(self.token_to_id) != len(self.id_to_token):
            raise ValidationError("duplicate token in vocabulary")

    @property
    def pad_id(self):
        return 0

    @property
    def unk_id(self):
        return 1

    def __len__(self):
        return len(self.id_to_token)

    def __eq__(self, other):
        return isinstance(other, Vocab) and self.id_to_token == other.id_to_token

    def __repr__(self):
        return f"Vocab({len(self)} tokens)"


def split_text(text):
    """Lowercased word/punctuation tokens; apostrophes stay word-internal."""
    return _TOKEN_RE.findall(text.lower())


def tokenize(text, vocab):
    """Map text to vocab ids, falling back to UNK for unknown tokens."""
    if not text or not text.strip():
        raise DegenerateInputError("cannot tokenize empty text")
    return [vocab.token_to_id.get(t, vocab.unk_id) for t in split_text(text)]


def build_vocab(texts, min_freq=1):
    """Deterministic vocab over ``texts``: frequency >= min_freq, ordered
    by (-frequency, token)."""
    if min_freq < 1:
        raise ValidationError("min_freq must be >= 1")
    counts = Counter()
    for text in texts:
        counts.update(split_text(text))
    kept = sorted((t for t, c in counts.items() if c >= min_freq),
                  key=lambda t: (-counts[t], t))
    if not kept:
        raise ValidationError(f"no token reaches min_freq={min_freq}")
    return Vocab(kept)


@dataclass(frozen=True)
class StyleLabel:
    index: int
    name: str


@dataclass(frozen=True)
class Sentence:
    id: int
    tokens: tuple
    raw_text: str
    style: StyleLabel


class StyleCorpus:
    """Immutable set of style-labeled sentences with train/dev/test splits."""

    def __init__(self, sentences, styles, splits, vocab):
        self.sentences = tuple(sentences)
        self.styles = tuple(styles)
        self.splits = {name: frozenset(ids) for name, ids in splits.items()}
        self.vocab = vocab
        self._by_id = {s.id: s for s in self.sentences}
        self.validate()

    def validate(self):
        if not self.sentences:
            raise ValidationError("corpus has no sentences")
        if len(self._by_id) != len(self.sentences):
            raise ValidationError("duplicate sentence ids")
        for s in self.sentences:
            if not s.tokens:
                raise ValidationError(f"sentence {s.id} has no tokens")
            if s.style not in self.styles:
                raise ValidationError(f"sentence {s.id} carries a foreign style")
        for i, label in enumerate(self.styles):
            if label.index != i:
                raise ValidationError("style indices must be dense 0..C-1")
        if set(self.splits) != set(SPLITS):
            raise ValidationError(f"splits must be exactly {SPLITS}")
        all_ids = set(self._by_id)
        seen = set()
        for name in SPLITS:
            ids = self.splits[name]
            if ids & seen:
                raise ValidationError(f"split {name} overlaps another split")
            seen |= ids
        if seen != all_ids:
            raise ValidationError("splits do not partition the sentence ids")
        for name in SPLITS:
            per_style = Counter(self._by_id[i].style.index
                                for i in self.splits[name])
            for label in self.styles:
                if per_style[label.index] < 2:
                    raise ValidationError(
                        f"style {label.name!r} has {per_style[label.index]} "
                        f"sentence(s) in split {name!r}; need >= 2")

    @property
    def n_styles(self):
        return len(self.styles)

    def by_id(self, sentence_id):
        return self._by_id[sentence_id]

    def split_sentences(self, split):
        """Sentences of one split, ordered by id."""
        if split not in SPLITS:
            raise ValidationError(f"unknown split {split!r}")
        return [self._by_id[i] for i in sorted(self.splits[split])]

    def style_ids(self, split):
        """Mapping style index -> sorted sentence ids within ``split``."""
        out = {label.index: [] for label in self.styles}
        for s in self.split_sentences(split):
            out[s.style.index].append(s.id)
        return out

    def __eq__(self, other):
        return (isinstance(other, StyleCorpus)
                and self.sentences == other.sentences
                and self.styles == other.styles
                and self.splits == other.splits
                and self.vocab == other.vocab)

    def __repr__(self):
        sizes = {k: len(v) for k, v in self.splits.items()}
        return (f"StyleCorpus({len(self.sentences)} sentences, "
                f"{self.n_styles} styles, splits={sizes})")


def corpus_from_records(records, default_ratios=(0.8, 0.1, 0.1),
                        split_seed=0, min_freq=1):
    """Assemble a corpus from (text, style_name, split_or_None) triples.

    Records either all carry an explicit split or none do; in the latter
    case a stratified split with ``default_ratios`` is assigned.
    """
    if not records:
        raise ValidationError("empty corpus")
    style_names = []
    for _, name, _ in records:
        if name not in style_names:
            style_names.append(name)
    styles = tuple(StyleLabel(i, n) for i, n in enumerate(style_names))
    by_name = {label.name: label for label in styles}

    vocab = build_vocab([text for text, _, _ in records], min_freq=min_freq)
    sentences = [Sentence(i, tuple(tokenize(text, vocab)), text, by_name[name])
                 for i, (text, name, _) in enumerate(records)]

    with_split = [r for r in records if r[2] is not None]
    if with_split and len(with_split) != len(records):
        raise ValidationError("records mix explicit and missing split fields")
    if with_split:
        splits = {name: set() for name in SPLITS}
        for i, (_, _, split) in enumerate(records):
            splits[split].add(i)
    else:
        splits = _stratified_splits(sentences, default_ratios, split_seed)
    return StyleCorpus(sentences, styles, splits, vocab)


def _allocate(n, ratios):
    """Largest-remainder split of ``n`` items into len(ratios) parts."""
    quotas = [n * r for r in ratios]
    counts = [int(q) for q in quotas]
    for _ in range(n - sum(counts)):
        fracs = [q - c for q, c in zip(quotas, counts)]
        counts[fracs.index(max(fracs))] += 1
    return counts


def _stratified_splits(sentences, ratios, seed):
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValidationError("ratios must be three positive numbers")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationError("ratios must sum to 1")
    rng = np.random.default_rng(seed)
    by_style = {}
    for s in sentences:
        by_style.setdefault(s.style.index, []).append(s.id)
    splits = {name: set() for name in SPLITS}
    for style_index in sorted(by_style):
        ids = sorted(by_style[style_index])
        counts = _allocate(len(ids), ratios)
        if min(counts) < 2:
            raise ValidationError(
                f"style index {style_index} has {len(ids)} sentences; too few "
                f"to keep >= 2 in every split at ratios {tuple(ratios)}")
        order = rng.permutation(len(ids))
        cursor = 0
        for name, count in zip(SPLITS, counts):
            for k in order[cursor:cursor + count]:
                splits[name].add(ids[int(k)])
            cursor += count
    return splits


def split_corpus(corpus, ratios, seed):
    """Reassign splits by a per-style stratified shuffle-split."""
    splits = _stratified_splits(corpus.sentences, ratios, seed)
    return StyleCorpus(corpus.sentences, corpus.styles, splits, corpus.vocab)


def load_corpus(path, format="jsonl", default_ratios=(0.8, 0.1, 0.1),
                split_seed=0, min_freq=1):
    """Load a corpus file; see the README for the JSONL/TSV schemas."""
    if format == "jsonl":
        records = _parse_jsonl(path)
    elif format == "tsv":
        records = _parse_tsv(path)
    else:
        raise ValidationError(f"unknown corpus format {format!r}")
    return corpus_from_records(records, default_ratios=default_ratios,
                               split_seed=split_seed, min_freq=min_freq)


def save_corpus(corpus, path):
    """Serialize to the JSONL interchange format (text, style, split)."""
    split_of = {}
    for name in SPLITS:
        for i in corpus.splits[name]:
            split_of[i] = name
    with open(path, "w", encoding="utf-8") as fh:
        for s in corpus.sentences:
            rec = {"text": s.raw_text, "style": s.style.name,
                   "split": split_of[s.id]}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _check_split_value(value, line_number):
    if value not in SPLITS:
        raise ParseError(f"split must be one of {SPLITS}, got {value!r}",
                         line_number)


def _parse_jsonl(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line_number) from exc
            if not isinstance(obj, dict):
                raise ParseError("record must be a JSON object", line_number)
            text, style = obj.get("text"), obj.get("style")
            if not isinstance(text, str) or not text.strip():
                raise ParseError("missing or empty 'text'", line_number)
            if not isinstance(style, str) or not style:
                raise ParseError("missing or empty 'style'", line_number)
            split = obj.get("split")
            if split is not None:
                _check_split_value(split, line_number)
            records.append((text, style, split))
    return records


def _parse_tsv(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return []
    header = lines[0].split("\t")
    required = {"text", "style"}
    if not required.issubset(header) or not set(header).issubset(
            required | {"split"}):
        raise ParseError("header must name columns text, style[, split]", 1)
    col = {name: header.index(name) for name in header}
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(cells)}",
                             line_number)
        text, style = cells[col["text"]], cells[col["style"]]
        if not text.strip():
            raise ParseError("empty 'text' cell", line_number)
        if not style:
            raise ParseError("empty 'style' cell", line_number)
        split = cells[col["split"]] if "split" in col else None
        if split is not None:
            _check_split_value(split, line_number)
        records.append((text, style, split))
    return records
