"""Marked-text to model-input conversion.

The dataset export wraps the first entity in ``<e1> .. </e1>`` and the
second in ``<e2> .. </e2>``. The classifier input replaces the first pair
with ``$`` and the second with ``#``; the tokenizer prepends the classifier
start token itself. Pure text transform, testable without any model.
"""

from __future__ import annotations

MARKER_MAP = {"<e1>": "$", "</e1>": "$", "<e2>": "#", "</e2>": "#"}


class MarkersMissing(ValueError):
    """Input does not contain each of the four entity markers exactly once."""


def to_model_text(marked_text: str) -> str:
    """Replace entity markers with $/# sentinels."""
    out = marked_text
    for marker, sentinel in MARKER_MAP.items():
        first = out.find(marker)
        if first < 0 or out.find(marker, first + 1) >= 0:
            raise MarkersMissing(f"marker {marker} must occur exactly once")
        out = out.replace(marker, sentinel)
    return out


def truncate_around_entities(
    tokens: list[str], max_tokens: int
) -> tuple[list[str], bool]:
    """Keep at most max_tokens, preferring a window covering both entities.

    Returns (window, fits) where fits is False when even a re-centered
    window cannot contain the full $..# region; such samples should be
    flagged by the caller.
    """
    if len(tokens) <= max_tokens:
        return tokens, True
    sentinel_positions = [i for i, t in enumerate(tokens) if t in ("$", "#")]
    if not sentinel_positions:
        return tokens[:max_tokens], False
    first, last = sentinel_positions[0], sentinel_positions[-1]
    region = last - first + 1
    slack = max_tokens - region
    if slack < 0:
        # Entities cannot both survive: center on the region and flag.
        start = max(0, min(first, len(tokens) - max_tokens))
        return tokens[start : start + max_tokens], False
    start = max(0, min(first - slack // 2, len(tokens) - max_tokens))
    return tokens[start : start + max_tokens], True
