"""The closed label set shared with the dataset toolkit's wire format."""

LABELS = (
    "CONTAINED",
    "COREFERENCE",
    "REACTION_ASSOCIATED",
    "TRANSFORMED",
    "WORK_UP",
)

LABEL2ID = {label: i for i, label in enumerate(LABELS)}
ID2LABEL = {i: label for i, label in enumerate(LABELS)}
