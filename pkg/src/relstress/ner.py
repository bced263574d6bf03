"""NER span-boundary noise: marker moves by one word, and entity splits.

A configured fraction of samples receives exactly one mutation each. The
mutated span always overlaps the original and never starts or ends
mid-word, mirroring the overlapping-span boundary mistakes a mention
extractor makes when the label itself is right.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import InfeasibleMutation
from .rng import keyed_rng, keyed_u64
from .samples import Dataset, Sample
from .splitting import round_half_up, to_fraction
from .text import token_spans
from .validation import check_samples

KINDS = ("start_left", "start_right", "end_left", "end_right", "split")
TARGETS = ("e1", "e2")


@dataclass(frozen=True)
class NerNoiseConfig:
    fraction: Fraction
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "fraction", to_fraction(self.fraction))
        if not (0 < self.fraction <= 1):
            raise ValueError(f"fraction {self.fraction} outside (0, 1]")

    @property
    def tag(self) -> str:
        return f"ner@{float(self.fraction):g}"


@dataclass(frozen=True)
class SpanMutation:
    sample_id: str
    target: str  # e1 | e2
    kind: str
    old_span: tuple[int, int]
    new_span: tuple[int, int]


def _token_context(text: str, span: tuple[int, int]):
    """Tokens overlapping the span, plus the ones just before and after."""
    tokens = token_spans(text)
    inside = [t for t in tokens if t[0] < span[1] and t[1] > span[0]]
    if not inside:
        raise InfeasibleMutation(f"span {span} covers no word")
    first_idx = tokens.index(inside[0])
    last_idx = tokens.index(inside[-1])
    before = tokens[first_idx - 1] if first_idx > 0 else None
    after = tokens[last_idx + 1] if last_idx + 1 < len(tokens) else None
    return inside, before, after


def feasible_kinds(text: str, span: tuple[int, int]) -> list[str]:
    try:
        inside, before, after = _token_context(text, span)
    except InfeasibleMutation:
        return []
    kinds = []
    if before is not None:
        kinds.append("start_left")
    if len(inside) >= 2:
        kinds.extend(["start_right", "end_left", "split"])
    if after is not None:
        kinds.append("end_right")
    return [k for k in KINDS if k in kinds]


def mutate_span(
    text: str,
    span: tuple[int, int],
    kind: str,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Move one span boundary across a single word, or keep one side of a split.

    The moved boundary lands on word boundaries; the untouched boundary is
    preserved. Raises InfeasibleMutation when the kind's precondition fails
    (no word before/after the span, or fewer than two words inside it).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown mutation kind {kind!r}")
    inside, before, after = _token_context(text, span)
    start, end = span
    if kind == "start_left":
        if before is None:
            raise InfeasibleMutation("no word before span")
        new = (before[0], end)
    elif kind == "start_right":
        if len(inside) < 2:
            raise InfeasibleMutation("span has fewer than two words")
        new = (inside[1][0], end)
    elif kind == "end_left":
        if len(inside) < 2:
            raise InfeasibleMutation("span has fewer than two words")
        new = (start, inside[-2][1])
    elif kind == "end_right":
        if after is None:
            raise InfeasibleMutation("no word after span")
        new = (start, after[1])
    else:  # split
        if len(inside) < 2:
            raise InfeasibleMutation("span has fewer than two words")
        cut = 1 + int(rng.integers(len(inside) - 1))
        keep_left = int(rng.integers(2)) == 0
        if keep_left:
            new = (start, inside[cut - 1][1])
        else:
            new = (inside[cut][0], end)
    ns, ne = new
    while ns < ne and text[ns].isspace():
        ns += 1
    while ne > ns and text[ne - 1].isspace():
        ne -= 1
    if ns >= ne:
        raise InfeasibleMutation(f"mutation {kind} produced an empty span")
    return ns, ne


def mutate_sample(sample: Sample, cfg: NerNoiseConfig) -> tuple[Sample, SpanMutation] | None:
    """Apply one uniformly drawn (entity, kind) mutation; None if none feasible.

    An infeasible first draw is redrawn uniformly from the remaining
    feasible combinations of the same sample.
    """
    rng = keyed_rng(cfg.seed, "ner", sample.sample_id)
    target = TARGETS[int(rng.integers(2))]
    kind = KINDS[int(rng.integers(5))]
    if kind not in feasible_kinds(sample.text, sample.span_of(target)):
        combos = [
            (t, k) for t in TARGETS for k in feasible_kinds(sample.text, sample.span_of(t))
        ]
        if not combos:
            return None
        target, kind = combos[int(rng.integers(len(combos)))]
    old_span = sample.span_of(target)
    new_span = mutate_span(sample.text, old_span, kind, rng)
    mutated = replace(
        sample,
        e1_span=new_span if target == "e1" else sample.e1_span,
        e2_span=new_span if target == "e2" else sample.e2_span,
        noise_tag=cfg.tag,
    )
    return mutated, SpanMutation(sample.sample_id, target, kind, old_span, new_span)


def perturb_ner(dataset: Dataset, cfg: NerNoiseConfig) -> tuple[Dataset, list[SpanMutation]]:
    """Mutate round-half-up(fraction * n) samples, one mutation each.

    Samples are selected without replacement by seeded priority over
    sample_ids; a sample with no feasible mutation is skipped and the next
    priority takes its place. Untouched samples pass through unchanged, so
    any shortfall is reported in the dataset warnings.
    """
    n_target = round_half_up(cfg.fraction * Fraction(len(dataset.samples)))
    by_priority = sorted(
        dataset.samples,
        key=lambda s: (keyed_u64(cfg.seed, "ner-select", s.sample_id), s.sample_id),
    )
    mutated: dict[str, Sample] = {}
    log: list[SpanMutation] = []
    warnings: list[str] = []
    for sample in by_priority:
        if len(mutated) == n_target:
            break
        outcome = mutate_sample(sample, cfg)
        if outcome is None:
            warnings.append(f"{sample.sample_id}: no feasible mutation, redrew another sample")
            continue
        new_sample, mutation = outcome
        mutated[sample.sample_id] = new_sample
        log.append(mutation)
    if len(mutated) < n_target:
        warnings.append(
            f"shortfall: only {len(mutated)} of {n_target} samples could be mutated"
        )

    out = Dataset(
        name=f"{dataset.name}.{cfg.tag}",
        provenance=f"{cfg.tag} seed={cfg.seed}",
    )
    out.samples = [mutated.get(s.sample_id, s) for s in dataset.samples]
    out.warnings.extend(warnings)
    # Keep the log in dataset order for a stable audit trail.
    order = {s.sample_id: i for i, s in enumerate(dataset.samples)}
    log.sort(key=lambda m: order[m.sample_id])
    return out, log


class NerNoiser(BaseEstimator, TransformerMixin):
    """Estimator wrapper over perturb_ner; transform works on sample lists."""

    def __init__(self, fraction: float = 0.5, seed: int = 0):
        self.fraction = fraction
        self.seed = seed

    def _config(self) -> NerNoiseConfig:
        return NerNoiseConfig(fraction=to_fraction(self.fraction), seed=self.seed)

    def fit(self, X, y=None):
        check_samples(X)
        return self

    def transform(self, X: list[Sample]) -> list[Sample]:
        noisy, log = perturb_ner(Dataset("input", check_samples(X)), self._config())
        self.mutation_log_ = log
        return noisy.samples
