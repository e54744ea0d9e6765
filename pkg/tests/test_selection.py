import itertools
from collections import Counter

import numpy as np
import pytest

from moea_lab.problems import pareto_front_3omm
from moea_lab.refpoints import generate_reference_points, perpendicular_distance
from moea_lab.selection import (
    associate,
    crowding_distance,
    crowding_distance_select,
    niching_select,
)


class TestAssociate:
    def test_lattice_point_maps_to_itself(self, rng):
        refs = generate_reference_points(3, 4)
        target = refs.points[7]
        assoc = associate(target[None, :], refs, rng)
        assert assoc.ref_index[0] == 7
        assert assoc.distance[0] == pytest.approx(0.0, abs=1e-15)

    def test_scaling_invariance(self, rng):
        refs = generate_reference_points(3, 4)
        target = 2.0 * refs.points[5]
        assoc = associate(target[None, :], refs, rng)
        assert assoc.ref_index[0] == 5
        assert assoc.distance[0] == pytest.approx(0.0, abs=1e-15)

    def test_matches_brute_force(self, rng):
        refs = generate_reference_points(3, 2)
        v = np.array([0.4, 0.4, 0.2])
        expected = min(
            range(len(refs)),
            key=lambda i: perpendicular_distance(v, refs.points[i]),
        )
        assoc = associate(v[None, :], refs, rng)
        assert assoc.ref_index[0] == expected

    def test_positive_scaling_keeps_association(self, rng):
        refs = generate_reference_points(3, 6)
        v = rng.random((20, 3)) + 0.05
        base = associate(v, refs, np.random.default_rng(0))
        scaled = associate(v * 7.3, refs, np.random.default_rng(0))
        assert np.array_equal(base.ref_index, scaled.ref_index)

    def test_non_finite_rejected(self, rng):
        refs = generate_reference_points(3, 2)
        with pytest.raises(ValueError):
            associate(np.array([[np.nan, 0.0, 0.0]]), refs, rng)

    def test_identical_vectors_share_reference_point(self, rng):
        # exact ties are broken once per distinct vector, so duplicates
        # can never split across reference points
        refs = generate_reference_points(2, 2)
        v = np.tile([0.5, 0.5], (40, 1))  # equidistant rows stay together
        assoc = associate(v, refs, rng)
        assert len(set(assoc.ref_index.tolist())) == 1

    @pytest.mark.parametrize("n", [4, 8, 12])
    def test_unique_association_at_21n(self, n, rng):
        # distinct 3-OMM values get distinct reference points at p = 21n
        front = pareto_front_3omm(n).astype(float)
        normalized = front / np.array([n, n / 2, n / 2])
        refs = generate_reference_points(3, 21 * n)
        assoc = associate(normalized, refs, rng)
        assert len(np.unique(assoc.ref_index)) == len(front)


class TestNichingSelect:
    def test_whole_front_when_k_equals_size(self, rng):
        refs = generate_reference_points(3, 2)
        cand_refs = np.array([0, 1, 2, 3])
        cand_dists = np.array([0.1, 0.2, 0.3, 0.4])
        sel = niching_select(np.array([], dtype=int), cand_refs, cand_dists, 4, refs, rng)
        assert sorted(sel.tolist()) == [0, 1, 2, 3]

    def test_hand_simulation_two_slots(self):
        # a, b on r1 (distances 0.1, 0.2), c on r2 (0.3); k=2 -> {a, c}
        refs = generate_reference_points(3, 1)
        cand_refs = np.array([1, 1, 2])
        cand_dists = np.array([0.1, 0.2, 0.3])
        for seed in range(50):
            rng = np.random.default_rng(seed)
            sel = niching_select(
                np.array([], dtype=int), cand_refs, cand_dists, 2, refs, rng
            )
            assert sorted(sel.tolist()) == [0, 2]

    def test_single_point_distance_then_random(self):
        # one reference point holds everything: first pick is the closest,
        # the remaining picks are uniform among the rest
        refs = generate_reference_points(3, 1)
        cand_refs = np.array([0, 0, 0, 0, 0])
        cand_dists = np.array([0.5, 0.1, 0.4, 0.3, 0.2])
        first = Counter()
        rest = Counter()
        for seed in range(600):
            rng = np.random.default_rng(seed)
            sel = niching_select(
                np.array([], dtype=int), cand_refs, cand_dists, 3, refs, rng
            )
            first[sel[0]] += 1
            rest.update(sel[1:].tolist())
        assert set(first) == {1}  # index of the 0.1 distance
        # remaining two drawn from the other four candidates
        assert set(rest) <= {0, 2, 3, 4}
        counts = np.array([rest[i] for i in (0, 2, 3, 4)])
        assert counts.min() > 0.5 * counts.max()  # roughly uniform

    def test_k_too_large_rejected(self, rng):
        refs = generate_reference_points(3, 1)
        with pytest.raises(ValueError):
            niching_select(
                np.array([], dtype=int), np.array([0]), np.array([0.1]), 2, refs, rng
            )

    def test_exactly_k_without_exceeding_multiplicity(self, rng):
        refs = generate_reference_points(3, 3)
        cand_refs = rng.integers(0, len(refs), 30)
        cand_dists = rng.random(30)
        sel = niching_select(np.array([], dtype=int), cand_refs, cand_dists, 12, refs, rng)
        assert len(sel) == 12
        assert len(set(sel.tolist())) == 12

    def test_every_occupied_point_keeps_a_survivor(self, rng):
        # when the occupied reference points number at most |Z_t| + k, each
        # keeps at least one associated individual among Z_t + selected
        refs = generate_reference_points(3, 4)
        for trial in range(30):
            cand_refs = rng.integers(0, 10, 20)
            selected_refs = rng.permutation(15)[:5]  # distinct Z_t niches
            occupied = set(cand_refs.tolist()) | set(selected_refs.tolist())
            k = len(set(cand_refs.tolist()) - set(selected_refs.tolist()))
            if k == 0:
                continue
            sel = niching_select(selected_refs, cand_refs, rng.random(20), k, refs, rng)
            survivors = {int(cand_refs[i]) for i in sel} | set(selected_refs.tolist())
            assert occupied <= survivors

    def test_niche_counts_steer_selection(self, rng):
        # r0 already holds two selected individuals, r1 none: the single
        # slot must go to r1's candidate
        refs = generate_reference_points(3, 1)
        sel = niching_select(
            selected_refs=np.array([0, 0]),
            cand_refs=np.array([0, 1]),
            cand_dists=np.array([0.0, 0.9]),
            k=1,
            refs=refs,
            rng=rng,
        )
        assert sel.tolist() == [1]


class TestCrowdingDistance:
    def test_whole_front_when_k_equals_size(self, rng):
        values = np.array([[1, 3], [2, 2], [3, 1]])
        sel = crowding_distance_select(values, 3, rng)
        assert sorted(sel.tolist()) == [0, 1, 2]

    def test_boundaries_selected_first(self):
        values = np.array([[1, 3], [2, 2], [3, 1]])
        for seed in range(30):
            rng = np.random.default_rng(seed)
            sel = crowding_distance_select(values, 2, rng)
            assert sorted(sel.tolist()) == [0, 2]

    def test_boundary_distances_infinite(self, rng):
        values = np.array([[1.0, 5.0], [2.0, 4.0], [3.0, 3.0], [4.0, 2.0], [5.0, 1.0]])
        dist = crowding_distance(values, rng)
        assert np.isinf(dist[0]) and np.isinf(dist[4])
        assert np.all(np.isfinite(dist[1:4]))
        assert dist[1] == pytest.approx(1.0)  # (3-1)/4 + (4-2)/4

    def test_k_too_large_rejected(self, rng):
        with pytest.raises(ValueError):
            crowding_distance_select(np.array([[1, 2]]), 2, rng)

    def test_uniform_selection_over_identical_values(self):
        # fully duplicated objective values: every k-subset equally likely
        values = np.tile([2.0, 2.0], (6, 1))
        counts = Counter()
        trials = 6000
        for seed in range(trials):
            rng = np.random.default_rng(seed)
            sel = crowding_distance_select(values, 3, rng)
            counts.update(sel.tolist())
        expected = trials * 3 / 6
        for i in range(6):
            assert abs(counts[i] - expected) < 5 * np.sqrt(trials * 0.5 * 0.5)
