"""Shared text utilities: tokenization, sentence segmentation, offset maps."""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"\S+")
_SENT_PUNCT = ".?!"


def token_spans(text: str) -> list[tuple[int, int]]:
    """[start, end) spans of whitespace-delimited tokens, left to right."""
    return [m.span() for m in _TOKEN_RE.finditer(text)]


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Partition text into sentence spans.

    A boundary occurs after a newline, or after a run of [.?!] followed by
    whitespace and an uppercase letter or digit. No boundary is ever placed
    inside a parenthesized group, so abbreviated quantities like
    "(0.815 g, 1.30 mmol)" never split a sentence. Spans cover the whole
    text; trailing whitespace belongs to the preceding sentence.
    """
    if not text:
        return [(0, 0)]
    boundaries: list[int] = []
    depth = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch == "\n" and depth == 0:
            boundaries.append(i + 1)
        elif ch in _SENT_PUNCT and depth == 0:
            j = i + 1
            while j < n and text[j] in _SENT_PUNCT:
                j += 1
            k = j
            while k < n and text[k] in " \t":
                k += 1
            if k > j and k < n and (text[k].isupper() or text[k].isdigit()):
                boundaries.append(k)
                i = k
                continue
            i = j
            continue
        i += 1
    spans = []
    start = 0
    for b in boundaries:
        if b > start:
            spans.append((start, b))
            start = b
    if start < n or not spans:
        spans.append((start, n))
    return spans


class OffsetMap:
    """Maps character offsets across a set of in-place replacements.

    Replacements are (start, old_len, new_len) triples over the original
    text, non-overlapping. The current edit operators are length-preserving,
    so this map is usually the identity; it stays general so future
    length-changing operators keep entity spans correct.
    """

    def __init__(self, edits: list[tuple[int, int, int]]):
        self._edits = sorted(edits)
        prev_end = -1
        for start, old_len, _ in self._edits:
            if start < prev_end:
                raise ValueError("overlapping edits")
            prev_end = start + old_len

    def map(self, offset: int) -> int:
        delta = 0
        for start, old_len, new_len in self._edits:
            if offset <= start:
                break
            if offset < start + old_len:
                # Inside a replaced region: clamp to its new extent.
                return min(start + delta + (offset - start), start + delta + new_len)
            delta += new_len - old_len
        return offset + delta

    def map_span(self, span: tuple[int, int]) -> tuple[int, int]:
        return (self.map(span[0]), self.map(span[1]))
