"""OCR-failure simulation: keyboard typos and adjacent-character swaps.

Per sample, round-half-up(wer * W) words are corrupted, where W counts the
whitespace tokens of the marked text excluding the entity marker tokens.
Each chosen word gets exactly one edit: a character replaced by a QWERTY
neighbor, or an adjacent character pair transposed. Both operators preserve
word length, and markers are never touched, so entity spans keep
delimiting the (possibly corrupted) entity surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import NoMappableCharacter, Unswappable
from .rng import keyed_rng
from .samples import Dataset, Sample, marked_token_view
from .splitting import round_half_up, to_fraction
from .text import OffsetMap
from .validation import check_samples

# Staggered QWERTY geometry: x advances by key, each lower row shifts right,
# and the digit row sits above the top letter row. Two keys are adjacent when
# they differ by at most one key width in both axes, giving the usual
# 8-neighborhood ('o' touches '9' and '0'; 'a' touches only q, w, s, z).
_ROWS = (
    ("1234567890", 0.0),
    ("qwertyuiop", 0.5),
    ("asdfghjkl", 0.75),
    ("zxcvbnm", 1.25),
)


def _build_adjacency() -> dict[str, str]:
    coords = {}
    for y, (row, x0) in enumerate(_ROWS):
        for i, ch in enumerate(row):
            coords[ch] = (x0 + i, float(y))
    neighbors: dict[str, str] = {}
    for ch, (x, y) in coords.items():
        if not ch.isalpha():
            continue
        near = [
            other
            for other, (ox, oy) in coords.items()
            if other != ch and abs(ox - x) <= 1.0 and abs(oy - y) <= 1.0
        ]
        neighbors[ch] = "".join(sorted(near))
    return neighbors


QWERTY_NEIGHBORS: dict[str, str] = _build_adjacency()


@dataclass(frozen=True)
class OcrNoiseConfig:
    wer: Fraction
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "wer", to_fraction(self.wer))
        if not (0 < self.wer <= 1):
            raise ValueError(f"wer {self.wer} outside (0, 1]")

    @property
    def tag(self) -> str:
        return f"ocr@{float(self.wer):g}"


@dataclass(frozen=True)
class WordEdit:
    """One corrupted word; word_index counts whitespace tokens of the marked text."""

    word_index: int
    kind: str  # keyboard_typo | swap
    char_position: int
    original: str
    replaced: str


def _typo_at(word: str, rng: np.random.Generator) -> tuple[str, int]:
    positions = [i for i, ch in enumerate(word) if ch.lower() in QWERTY_NEIGHBORS]
    if not positions:
        raise NoMappableCharacter(f"no keyboard-mappable character in {word!r}")
    i = positions[int(rng.integers(len(positions)))]
    options = QWERTY_NEIGHBORS[word[i].lower()]
    picked = options[int(rng.integers(len(options)))]
    if word[i].isupper():
        picked = picked.upper()
    return word[:i] + picked + word[i + 1 :], i


def _swap_at(word: str, rng: np.random.Generator) -> tuple[str, int]:
    pairs = [i for i in range(len(word) - 1) if word[i] != word[i + 1]]
    if not pairs:
        raise Unswappable(f"no adjacent distinct pair in {word!r}")
    i = pairs[int(rng.integers(len(pairs)))]
    return word[:i] + word[i + 1] + word[i] + word[i + 2 :], i


def keyboard_typo(word: str, rng: np.random.Generator) -> str:
    """Replace one character with a uniformly chosen QWERTY neighbor.

    Only letters are replaced; case is preserved by mapping through
    lowercase. Raises NoMappableCharacter when the word has no letter.
    """
    return _typo_at(word, rng)[0]


def swap_noise(word: str, rng: np.random.Generator) -> str:
    """Transpose one adjacent pair of distinct characters."""
    return _swap_at(word, rng)[0]


_OPERATORS = {
    "keyboard_typo": _typo_at,
    "swap": _swap_at,
}
_FALLBACK = {"keyboard_typo": "swap", "swap": "keyboard_typo"}


def _edit_word(word: str, rng: np.random.Generator) -> tuple[str, str, int] | None:
    """Apply a uniformly drawn operator with fallback; None if neither fits."""
    kind = "keyboard_typo" if int(rng.integers(2)) == 0 else "swap"
    for attempt in (kind, _FALLBACK[kind]):
        try:
            new_word, pos = _OPERATORS[attempt](word, rng)
            return new_word, attempt, pos
        except (NoMappableCharacter, Unswappable):
            continue
    return None


def perturb_sample(sample: Sample, cfg: OcrNoiseConfig) -> tuple[Sample, list[WordEdit], list[str]]:
    """Corrupt one sample under its keyed RNG stream; pure in (sample, cfg)."""
    rng = keyed_rng(cfg.seed, "ocr", sample.sample_id)
    tokens = marked_token_view(sample)
    eligible = [t for t in tokens if t.eligible]
    if not eligible:
        return sample, [], [f"{sample.sample_id}: no eligible word, sample left unmodified"]
    w = len(eligible)
    n = min(max(round_half_up(cfg.wer * w), 1), w)

    order = rng.permutation(w)
    chars = list(sample.text)
    edits: list[WordEdit] = []
    replacements: list[tuple[int, int, int]] = []
    for k in order:
        if len(edits) == n:
            break
        token = eligible[int(k)]
        outcome = _edit_word(token.token, rng)
        if outcome is None:
            continue
        new_word, kind, pos = outcome
        rs, re_ = token.raw_span
        # Length-preserving edits keep every later token's raw offsets valid.
        chars[rs:re_] = new_word
        replacements.append((rs, re_ - rs, len(new_word)))
        edits.append(WordEdit(token.index, kind, pos, token.token, new_word))

    warnings = []
    if len(edits) < n:
        warnings.append(
            f"{sample.sample_id}: only {len(edits)} of {n} requested word edits "
            "were feasible"
        )
    if not edits:
        return sample, [], warnings

    offset_map = OffsetMap(replacements)
    noisy = replace(
        sample,
        text="".join(chars),
        e1_span=offset_map.map_span(sample.e1_span),
        e2_span=offset_map.map_span(sample.e2_span),
        noise_tag=cfg.tag,
    )
    return noisy, edits, warnings


def perturb_ocr(dataset: Dataset, cfg: OcrNoiseConfig) -> tuple[Dataset, list[list[WordEdit]]]:
    """Corrupt every sample of a dataset; returns the per-sample edit log."""
    out = Dataset(
        name=f"{dataset.name}.{cfg.tag}",
        provenance=f"{cfg.tag} seed={cfg.seed}",
    )
    log: list[list[WordEdit]] = []
    for sample in dataset.samples:
        noisy, edits, warnings = perturb_sample(sample, cfg)
        out.samples.append(noisy)
        out.warnings.extend(warnings)
        log.append(edits)
    return out, log


class OcrNoiser(BaseEstimator, TransformerMixin):
    """Estimator wrapper over perturb_ocr; transform works on sample lists."""

    def __init__(self, wer: float = 0.25, seed: int = 0):
        self.wer = wer
        self.seed = seed

    def _config(self) -> OcrNoiseConfig:
        return OcrNoiseConfig(wer=to_fraction(self.wer), seed=self.seed)

    def fit(self, X, y=None):
        check_samples(X)
        return self

    def transform(self, X: list[Sample]) -> list[Sample]:
        noisy, log = perturb_ocr(Dataset("input", check_samples(X)), self._config())
        self.edit_log_ = log
        return noisy.samples
