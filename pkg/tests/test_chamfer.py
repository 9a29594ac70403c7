import numpy as np
import pytest

from inkeval.errors import EmptyCloudError
from inkeval.metrics import GridConfig, chamfer, chamfer_offset
from oracles import cdo_candidates, dense_chamfer, exhaustive_cdo, random_cloud


class TestChamfer:
    def test_identical_clouds(self, rng):
        p = random_cloud(rng, 12)
        assert chamfer(p, p) == 0.0

    def test_hand_value_two_points(self):
        p = np.array([[0.0, 0.0], [2.0, 0.0]])
        q = np.array([[0.0, 0.0], [3.0, 0.0]])
        # term1 = (0 + 1)/2, term2 = (0 + 1)/2
        assert chamfer(p, q) == pytest.approx(1.0)

    def test_hand_value_singletons(self):
        assert chamfer(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]])) == pytest.approx(10.0)

    def test_symmetry_exact(self, rng):
        for _ in range(25):
            p = random_cloud(rng, int(rng.integers(1, 30)))
            q = random_cloud(rng, int(rng.integers(1, 30)))
            assert chamfer(p, q) == chamfer(q, p)

    def test_non_negative_and_matches_dense_oracle(self, rng):
        for _ in range(25):
            p = random_cloud(rng, int(rng.integers(1, 20)))
            q = random_cloud(rng, int(rng.integers(1, 20)))
            val = chamfer(p, q)
            assert val >= 0.0
            assert val == pytest.approx(dense_chamfer(p, q), abs=1e-12)

    def test_empty_cloud_rejected(self):
        with pytest.raises(EmptyCloudError):
            chamfer(np.zeros((0, 2)), np.zeros((3, 2)))
        with pytest.raises(EmptyCloudError):
            chamfer(np.zeros((3, 2)), np.zeros((0, 2)))

    def test_kdtree_path_matches_dense(self, rng):
        # big enough to cross the dense/KD switch
        p = random_cloud(rng, 700)
        q = random_cloud(rng, 700)
        assert chamfer(p, q) == pytest.approx(dense_chamfer(p, q), rel=1e-12)


class TestChamferOffset:
    def test_identical_clouds_report_zero_offset(self, rng):
        p = random_cloud(rng, 15)
        val, off = chamfer_offset(p, p)
        assert val == 0.0
        assert off == (0.0, 0.0)

    def test_pure_translation_recovered(self, rng):
        p = random_cloud(rng, 20)
        q = p + np.array([5.0, 3.0])
        val, off = chamfer_offset(p, q)
        assert val <= 1e-9  # centroid difference is an explicit candidate
        assert off.dx == pytest.approx(5.0, abs=1e-9)
        assert off.dy == pytest.approx(3.0, abs=1e-9)

    def test_never_worse_than_plain_chamfer(self, rng):
        for _ in range(30):
            p = random_cloud(rng, int(rng.integers(1, 25)))
            q = random_cloud(rng, int(rng.integers(1, 25)))
            assert chamfer_offset(p, q)[0] <= chamfer(p, q)

    def test_equals_exhaustive_enumeration_without_refinement(self, rng):
        cfg = GridConfig(coarse_steps=7, refine_levels=0)
        for _ in range(15):
            p = random_cloud(rng, 5)
            q = random_cloud(rng, 5)
            val, _ = chamfer_offset(p, q, cfg)
            assert val == pytest.approx(exhaustive_cdo(p, q, cfg), abs=1e-12)

    def test_best_offset_is_an_evaluated_candidate(self, rng):
        cfg = GridConfig(coarse_steps=5, refine_levels=0)
        p = random_cloud(rng, 8)
        q = random_cloud(rng, 9)
        val, off = chamfer_offset(p, q, cfg)
        cands = cdo_candidates(p, q, cfg)
        assert min(np.abs(cands - np.array(off)).sum(axis=1)) < 1e-12
        assert val == pytest.approx(dense_chamfer(p + np.array(off), q), abs=1e-12)

    def test_joint_translation_invariance(self, rng):
        shift = np.array([137.25, -41.5])
        for _ in range(10):
            p = random_cloud(rng, int(rng.integers(2, 20)))
            q = random_cloud(rng, int(rng.integers(2, 20)))
            base_cd = chamfer(p, q)
            base_cdo = chamfer_offset(p, q)[0]
            assert abs(chamfer(p + shift, q + shift) - base_cd) <= 1e-9
            assert abs(chamfer_offset(p + shift, q + shift)[0] - base_cdo) <= 1e-9


class TestGridConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridConfig(coarse_steps=0)
        with pytest.raises(ValueError):
            GridConfig(refine_shrink=1.5)
        with pytest.raises(ValueError):
            GridConfig(refine_levels=-1)
        with pytest.raises(ValueError):
            GridConfig(range_factor=0.0)
