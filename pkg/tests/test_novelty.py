import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from novascout.colorspace import Pattern, pattern_from_bins
from novascout.errors import MissingVerdictError
from novascout.novelty import (HopfieldMemory, NoveltyVerdict, closed_form_energy,
                               novelty_threshold, render_novelty_map,
                               weights_from_patterns)
from novascout.segmentation import SegmentLabelMap

N = 18


def random_pattern(rng) -> Pattern:
    return Pattern(tuple(int(s) for s in rng.choice([-1, 1], size=N)))


def oracle_energy(x: Pattern, stored: list[Pattern]) -> float:
    """Inline restatement of the closed form, kept separate from the package."""
    total = 0.0
    xv = np.array(x.spins, dtype=float)
    for p in stored:
        ov = float(xv @ np.array(p.spins, dtype=float))
        total -= (ov * ov - N) / (2 * N)
    return total


class TestEnergy:
    def test_empty_memory_energy_zero(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(10, 20, 30)
        assert mem.energy(p) == 0.0

    def test_single_store_self_energy(self):
        # Hebbian substitution gives -(n-1)/2 = -8.5 exactly.
        mem = HopfieldMemory()
        p = pattern_from_bins(10, 20, 30)
        mem.store(p)
        assert mem.energy(p) == pytest.approx(-8.5, abs=1e-9)
        assert oracle_energy(p, [p]) == pytest.approx(-8.5, abs=1e-12)

    def test_complement_has_same_energy(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(10, 20, 30)
        mem.store(p)
        assert mem.energy(p.complement()) == pytest.approx(-8.5, abs=1e-9)

    def test_hamming1_neighbor_energy(self):
        # Overlap 16 of 18: -((16)^2 - 18)/36 = -238/36.
        mem = HopfieldMemory()
        p = pattern_from_bins(10, 20, 30)
        mem.store(p)
        flipped = list(p.spins)
        flipped[7] = -flipped[7]
        q = Pattern(tuple(flipped))
        assert mem.energy(q) == pytest.approx(-238 / 36, abs=1e-9)
        assert oracle_energy(q, [p]) == pytest.approx(-238 / 36, abs=1e-12)

    @settings(max_examples=60)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 20))
    def test_incremental_matches_closed_form(self, seed, stores):
        rng = np.random.default_rng(seed)
        mem = HopfieldMemory()
        stored = []
        for _ in range(stores):
            p = random_pattern(rng)
            mem.store(p)
            stored.append(p)
        q = random_pattern(rng)
        e = mem.energy(q)
        assert e == pytest.approx(closed_form_energy(q, stored), abs=1e-9)
        assert e == pytest.approx(oracle_energy(q, stored), abs=1e-9)

    @settings(max_examples=30)
    @given(st.integers(0, 2**32 - 1))
    def test_energy_parity(self, seed):
        rng = np.random.default_rng(seed)
        mem = HopfieldMemory()
        for _ in range(8):
            mem.store(random_pattern(rng))
        q = random_pattern(rng)
        assert mem.energy(q) == pytest.approx(mem.energy(q.complement()), abs=1e-9)


class TestClassifyAndStore:
    def test_fresh_memory_everything_novel(self):
        mem = HopfieldMemory()
        v = mem.classify_and_store(pattern_from_bins(1, 2, 3), segment_id=0)
        assert v.novel and v.stored
        assert v.energy == 0.0
        assert mem.stored_count == 1

    def test_immediate_repeat_is_familiar(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(1, 2, 3)
        mem.classify_and_store(p)
        v = mem.classify_and_store(p)
        assert not v.novel and not v.stored
        assert v.energy == pytest.approx(-8.5, abs=1e-9)
        assert mem.stored_count == 1

    def test_hamming1_neighbor_is_familiar(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(1, 2, 3)
        mem.classify_and_store(p)
        flipped = list(p.spins)
        flipped[0] = -flipped[0]
        v = mem.classify_and_store(Pattern(tuple(flipped)))
        assert not v.novel
        assert v.energy == pytest.approx(-238 / 36, abs=1e-9)

    def test_threshold_is_strict_less_than(self):
        mem = HopfieldMemory()
        assert novelty_threshold() == -4.5
        # Energy exactly at the threshold classifies as novel per the rule
        # "familiar iff energy < -n/4". Exercise via a handcrafted memory.
        p = pattern_from_bins(0, 0, 0)
        mem.weights = np.zeros((N, N))
        x = p.as_array()
        w = np.outer(x, x)
        np.fill_diagonal(w, 0.0)
        # Scale so that -1/2 x^T W x == -4.5 exactly: x^T w x = 306.
        mem.weights = w * (9.0 / 306.0)
        assert mem.energy(p) == pytest.approx(-4.5, abs=1e-12)
        v = mem.classify_and_store(p)
        assert v.novel

    def test_weight_invariants_after_operations(self):
        rng = np.random.default_rng(7)
        mem = HopfieldMemory()
        for _ in range(12):
            mem.classify_and_store(random_pattern(rng))
            assert np.array_equal(mem.weights, mem.weights.T)
            assert np.all(np.diag(mem.weights) == 0)
            assert np.max(np.abs(mem.weights)) <= mem.stored_count / N + 1e-12

    def test_store_delta_bounds(self):
        rng = np.random.default_rng(11)
        mem = HopfieldMemory()
        for _ in range(6):
            mem.store(random_pattern(rng))
        q = random_pattern(rng)
        before = mem.energy(q)
        p = random_pattern(rng)
        mem.store(p)
        delta = mem.energy(q) - before
        assert -8.5 - 1e-9 <= delta <= 0.5 + 1e-9

    def test_repeated_presentation_energy_ladder(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(9, 18, 27)
        energies = [mem.classify_and_store(p).energy for _ in range(3)]
        assert energies[0] == 0.0
        assert energies[1] == pytest.approx(-8.5, abs=1e-9)
        # Familiar from the second presentation on: no further stores.
        assert energies[2] == pytest.approx(-8.5, abs=1e-9)
        assert mem.stored_count == 1


class TestReset:
    def test_reset_zeroes_everything(self):
        rng = np.random.default_rng(3)
        mem = HopfieldMemory()
        for _ in range(5):
            mem.classify_and_store(random_pattern(rng))
        mem.reset()
        assert mem.stored_count == 0
        assert not mem.stored_patterns
        assert np.all(mem.weights == 0)

    def test_reset_idempotent_and_renovelizes(self):
        mem = HopfieldMemory()
        p = pattern_from_bins(4, 5, 6)
        mem.classify_and_store(p)
        mem.reset()
        mem.reset()
        v = mem.classify_and_store(p)
        assert v.novel and v.energy == 0.0


class TestSnapshot:
    def test_snapshot_roundtrip(self):
        rng = np.random.default_rng(5)
        mem = HopfieldMemory()
        for _ in range(4):
            mem.classify_and_store(random_pattern(rng))
        doc = mem.to_snapshot()
        back = HopfieldMemory.from_snapshot(doc)
        assert back.stored_count == mem.stored_count
        assert np.array_equal(back.weights, mem.weights)
        assert back.stored_patterns == mem.stored_patterns

    def test_snapshot_without_patterns(self):
        mem = HopfieldMemory(retain_patterns=False)
        mem.classify_and_store(pattern_from_bins(1, 1, 1))
        doc = mem.to_snapshot()
        assert "patterns" not in doc
        back = HopfieldMemory.from_snapshot(doc)
        assert back.stored_count == 1

    def test_weights_from_patterns_matches_memory(self):
        rng = np.random.default_rng(9)
        mem = HopfieldMemory()
        pats = [random_pattern(rng) for _ in range(7)]
        for p in pats:
            mem.store(p)
        assert np.allclose(weights_from_patterns(pats), mem.weights, atol=1e-12)


class TestRenderNoveltyMap:
    def _label_map(self):
        labels = np.zeros((4, 6), dtype=np.int32)
        labels[:, 3:] = 1
        return SegmentLabelMap(labels=labels, segment_count=2)

    def test_all_familiar_is_black(self):
        lm = self._label_map()
        verdicts = [
            NoveltyVerdict(i, pattern_from_bins(i, i, i), -9.0, False, False)
            for i in range(2)
        ]
        out = render_novelty_map(lm, verdicts)
        assert out.shape == (4, 6, 3)
        assert np.all(out == 0)

    def test_all_novel_keeps_segment_colors(self):
        from novascout.render import render_segmentation

        lm = self._label_map()
        verdicts = [
            NoveltyVerdict(i, pattern_from_bins(i, i, i), 0.0, True, True)
            for i in range(2)
        ]
        assert np.array_equal(render_novelty_map(lm, verdicts), render_segmentation(lm))

    def test_single_novel_region(self):
        lm = self._label_map()
        verdicts = [
            NoveltyVerdict(0, pattern_from_bins(0, 0, 0), -9.0, False, False),
            NoveltyVerdict(1, pattern_from_bins(1, 1, 1), 0.0, True, True),
        ]
        out = render_novelty_map(lm, verdicts)
        assert np.all(out[:, :3] == 0)
        assert np.all(out[:, 3:].sum(axis=2) > 0)

    def test_missing_verdict_raises(self):
        lm = self._label_map()
        verdicts = [NoveltyVerdict(0, pattern_from_bins(0, 0, 0), 0.0, True, True)]
        with pytest.raises(MissingVerdictError):
            render_novelty_map(lm, verdicts)
