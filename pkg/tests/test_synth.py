"""Synthetic corpus generator: determinism, profiles, class signal."""

import dataclasses
import itertools

import numpy as np
import pytest

from styloboost.corpus import MULTICLASS_CLASSES
from styloboost.stylometry import extract
from styloboost.synth import (
    DEFAULT_PROFILES,
    SplitMix,
    StyleProfile,
    generate,
    mix64,
    synth_embeddings,
)


class TestSplitMix:
    def test_mix64_reference_values(self):
        # first three outputs of the canonical splitmix64 sequence with seed 0:
        # state += golden gamma, then finalize
        golden = 0x9E3779B97F4A7C15
        outs = [mix64((i + 1) * golden & ((1 << 64) - 1)) for i in range(3)]
        assert outs == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_streams_reproducible(self):
        a = SplitMix(7, 1, 2, 3)
        b = SplitMix(7, 1, 2, 3)
        assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]

    def test_distinct_keys_give_distinct_streams(self):
        a = SplitMix(7, 1, 2, 3)
        b = SplitMix(7, 1, 2, 4)
        assert [a.next_u64() for _ in range(5)] != [b.next_u64() for _ in range(5)]

    def test_floats_in_unit_interval(self):
        s = SplitMix(123, 9)
        for _ in range(1000):
            u = s.next_float()
            assert 0.0 <= u < 1.0


class TestProfiles:
    def test_one_profile_per_class(self):
        assert set(DEFAULT_PROFILES) == set(MULTICLASS_CLASSES)

    def test_profiles_differ_in_three_params(self):
        fields = [f.name for f in dataclasses.fields(StyleProfile)]
        for a, b in itertools.combinations(MULTICLASS_CLASSES, 2):
            pa, pb = DEFAULT_PROFILES[a], DEFAULT_PROFILES[b]
            diffs = sum(getattr(pa, f) != getattr(pb, f) for f in fields)
            assert diffs >= 3, (a, b)

    def test_profile_bounds_enforced(self):
        with pytest.raises(ValueError, match="vocab"):
            StyleProfile(5, 0.1, 10.0, 0.1, 0.1, 0.1, 0.1)
        with pytest.raises(ValueError, match="stopword_rate"):
            StyleProfile(100, 1.5, 10.0, 0.1, 0.1, 0.1, 0.1)


class TestGenerate:
    def test_counts_and_balance(self):
        docs = generate(7, 10)
        assert len(docs) == 70
        for name in MULTICLASS_CLASSES:
            assert sum(1 for d in docs if d.label == name) == 10

    def test_same_seed_identical(self):
        a = generate(7, 5)
        b = generate(7, 5)
        assert a == b

    def test_different_seed_differs(self):
        a = generate(7, 5)
        b = generate(8, 5)
        diff = [i for i, (x, y) in enumerate(zip(a, b)) if x.text != y.text]
        assert diff, "different seeds produced identical corpora"

    def test_ids_unique(self):
        docs = generate(1, 20)
        assert len({d.id for d in docs}) == len(docs)

    def test_docs_per_class_validated(self):
        with pytest.raises(ValueError):
            generate(1, 0)

    def test_stump_on_sentence_length_beats_chance(self):
        docs = generate(7, 30)
        feature = np.array([extract(d.text).avg_sentence_length for d in docs])
        labels = np.array([MULTICLASS_CLASSES.index(d.label) for d in docs])
        # best single-threshold stump predicting the majority class per side
        best_acc = 0.0
        for t in np.unique(feature):
            left, right = labels[feature <= t], labels[feature > t]
            acc = 0
            for side in (left, right):
                if len(side):
                    acc += np.bincount(side, minlength=7).max()
            best_acc = max(best_acc, acc / len(labels))
        assert best_acc > 1 / 7 + 0.05


class TestSynthEmbeddings:
    def test_shape_and_determinism(self):
        docs = generate(3, 4)
        t1 = synth_embeddings(docs, 3)
        t2 = synth_embeddings(docs, 3)
        assert t1.dim == 32
        assert set(t1.entries) == {d.id for d in docs}
        for k in t1.entries:
            assert t1.entries[k].tobytes() == t2.entries[k].tobytes()

    def test_within_class_cosine_exceeds_cross_class(self):
        docs = generate(7, 12)
        table = synth_embeddings(docs, 7)
        by_class: dict[str, list[np.ndarray]] = {}
        for d in docs:
            v = table.vector(d.id).astype(np.float64)
            by_class.setdefault(d.label, []).append(v / np.linalg.norm(v))
        within, cross = [], []
        names = list(by_class)
        for i, a in enumerate(names):
            for u, v in itertools.combinations(by_class[a], 2):
                within.append(float(u @ v))
            for b in names[i + 1 :]:
                for u in by_class[a]:
                    for v in by_class[b]:
                        cross.append(float(u @ v))
        assert np.mean(within) > np.mean(cross)

    def test_rejects_foreign_labels(self):
        docs = generate(1, 1)
        bad = [dataclasses.replace(docs[0], label="gpt-5")]
        with pytest.raises(ValueError, match="gpt-5"):
            synth_embeddings(bad, 1)
