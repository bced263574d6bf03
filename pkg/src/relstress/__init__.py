"""relstress: stress-testing toolkit for anaphora relation classification.

Parses Brat standoff corpora of chemical patent snippets, extracts
entity-marked relation samples, builds stratified splits, generates
OCR-failure and NER-boundary noise variants, and scores prediction files.
"""

__version__ = "0.1.0"

from .brat import (
    Document,
    EntityMention,
    RelationInstance,
    RelationLabel,
    parse_document,
    serialize_document,
)
from .metrics import (
    AggregateStats,
    MetricsReport,
    PredictionSet,
    aggregate,
    confusion_render,
    normalize_confusion,
    score,
)
from .ner import NerNoiseConfig, NerNoiser, SpanMutation, mutate_span, perturb_ner
from .ocr import (
    OcrNoiseConfig,
    OcrNoiser,
    QWERTY_NEIGHBORS,
    WordEdit,
    keyboard_typo,
    perturb_ocr,
    swap_noise,
)
from .samples import (
    Dataset,
    Sample,
    SampleExtractor,
    clean_corpus,
    dataset_stats,
    extract_samples,
    render_marked_text,
)
from .splitting import SplitSpec, SplitResult, StratifiedSplitter, stratified_split

__all__ = [
    "__version__",
    "AggregateStats",
    "Dataset",
    "Document",
    "EntityMention",
    "MetricsReport",
    "NerNoiseConfig",
    "NerNoiser",
    "OcrNoiseConfig",
    "OcrNoiser",
    "PredictionSet",
    "QWERTY_NEIGHBORS",
    "RelationInstance",
    "RelationLabel",
    "Sample",
    "SampleExtractor",
    "SpanMutation",
    "SplitResult",
    "SplitSpec",
    "StratifiedSplitter",
    "WordEdit",
    "aggregate",
    "clean_corpus",
    "confusion_render",
    "dataset_stats",
    "extract_samples",
    "keyboard_typo",
    "mutate_span",
    "normalize_confusion",
    "parse_document",
    "perturb_ner",
    "perturb_ocr",
    "render_marked_text",
    "score",
    "serialize_document",
    "stratified_split",
    "swap_noise",
]
