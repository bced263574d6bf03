import random

import pytest

from reltrainer.preprocess import MarkersMissing, to_model_text, truncate_around_entities

FIG_MARKED = (
    "<e1> To the solution of Compound (4) (0.815 g, 1.30 mmol) in THF (4.9 ml) </e1> "
    "in <e2> a flask </e2> were added acetic acid (9.8 ml) and water (4.9 ml)."
)


class TestToModelText:
    def test_marked_sample_maps_to_sentinels(self):
        out = to_model_text(FIG_MARKED)
        assert out == (
            "$ To the solution of Compound (4) (0.815 g, 1.30 mmol) in THF (4.9 ml) $ "
            "in # a flask # were added acetic acid (9.8 ml) and water (4.9 ml)."
        )

    def test_markers_at_string_extremes(self):
        assert to_model_text("<e1> a </e1> x <e2> b </e2>") == "$ a $ x # b #"

    def test_random_samples_have_exactly_two_of_each_sentinel(self):
        rng = random.Random(2)
        words = ["alpha", "beta", "gamma", "delta"]
        for _ in range(100):
            tokens = [rng.choice(words) for _ in range(rng.randint(4, 10))]
            i1, i2 = sorted(rng.sample(range(len(tokens)), 2))
            marked_tokens = (
                tokens[: i1] + ["<e1>", tokens[i1], "</e1>"]
                + tokens[i1 + 1 : i2] + ["<e2>", tokens[i2], "</e2>"]
                + tokens[i2 + 1 :]
            )
            out = to_model_text(" ".join(marked_tokens)).split()
            assert out.count("$") == 2
            assert out.count("#") == 2

    def test_missing_marker_raises(self):
        with pytest.raises(MarkersMissing):
            to_model_text("<e1> a </e1> no second entity")

    def test_duplicate_marker_raises(self):
        with pytest.raises(MarkersMissing):
            to_model_text("<e1> a </e1> <e1> b </e1> <e2> c </e2>")


class TestTruncation:
    def tokens(self, before, between, after):
        return (
            [f"b{i}" for i in range(before)] + ["$", "w", "$"]
            + [f"m{i}" for i in range(between)] + ["#", "v", "#"]
            + [f"a{i}" for i in range(after)]
        )

    def test_short_input_untouched(self):
        tokens = self.tokens(2, 2, 2)
        window, fits = truncate_around_entities(tokens, 50)
        assert window == tokens and fits

    def test_recentering_keeps_both_entities(self):
        tokens = self.tokens(100, 4, 100)
        window, fits = truncate_around_entities(tokens, 20)
        assert fits and len(window) == 20
        assert window.count("$") == 2 and window.count("#") == 2

    def test_front_loaded_entities_without_recentering_would_be_cut(self):
        tokens = self.tokens(100, 4, 0)
        window, fits = truncate_around_entities(tokens, 15)
        assert fits
        assert window.count("$") == 2 and window.count("#") == 2

    def test_oversized_entity_region_flagged(self):
        tokens = self.tokens(5, 80, 5)
        window, fits = truncate_around_entities(tokens, 20)
        assert not fits and len(window) == 20
