import numpy as np
import pytest

from galinv import (
    ConstantInvariants, InvalidInvariants, StepTooLarge, embed, frame, integrate_frame, pullback,
    random_special, recover_transformation, roundtrip, signature,
)
from galinv.reconstruct import algebra_matrix, initial_frame

HELIX_11 = ConstantInvariants(0.5, 1 / (2 * np.sqrt(2)))


def terminal_error(inv, length, h):
    hel = inv.helix()
    res = integrate_frame(inv, frame(hel.jet(0.0)).m, length, h)
    return float(np.max(np.abs(res.frames[-1] - frame(hel.jet(length)).m)))


class TestConstantInvariants:
    def test_helix_parameters(self):
        assert HELIX_11.kappa == pytest.approx(0.5)
        assert HELIX_11.tau == pytest.approx(0.5)
        inv = ConstantInvariants(0.4, 0.4 * np.sqrt(0.2))
        assert inv.tau == pytest.approx(0.2)

    def test_planar_rejected(self):
        with pytest.raises(InvalidInvariants):
            ConstantInvariants(1.0, 0.9)
        with pytest.raises(InvalidInvariants):
            ConstantInvariants(1.0, 1.0)
        with pytest.raises(InvalidInvariants):
            ConstantInvariants(-1.0, 2.0)


class TestAlgebraMatrix:
    def test_helix_entries(self):
        b = algebra_matrix(HELIX_11).m
        assert b[1, 0] == pytest.approx(0.5)
        assert b[3, 1] == pytest.approx(-np.sqrt(2) / 2)

    def test_matches_helix_pullback(self):
        # oracle: pullback of the analytic unit-speed helix
        for inv in (HELIX_11, ConstantInvariants(0.4, 0.4 * np.sqrt(0.2)), ConstantInvariants(1, 1.01)):
            np.testing.assert_allclose(algebra_matrix(inv).m, pullback(inv.helix().jet(0.7)).m, atol=1e-12)

    def test_structure(self):
        for w1, w2 in ((0.5, 0.36), (2.0, 4.5), (0.1, 0.02)):
            b = algebra_matrix(ConstantInvariants(w1, w2))
            assert b.is_valid(0.0)
            np.testing.assert_array_equal(b.m[2, 1:4], 0)
            np.testing.assert_array_equal(b.m[1:4, 2], 0)


class TestIntegrateFrame:
    def test_initial_frame_is_helix_like(self):
        a = initial_frame(HELIX_11)
        assert np.linalg.norm(a[1:4, 0]) == pytest.approx(1.0)
        assert np.linalg.det(a) == pytest.approx(1.0)

    def test_zero_generator_keeps_frame(self):
        a0 = embed(random_special(1))
        res = integrate_frame(HELIX_11, a0, 1.0, 1e-2, b=np.zeros((5, 5)))
        assert np.all(res.frames == a0)
        assert res.reorthonormalizations == 0

    def test_signature_of_reconstruction(self):
        hel = HELIX_11.helix()
        length = 4 * np.pi * np.sqrt(2)                     # two turns
        res = integrate_frame(HELIX_11, frame(hel.jet(0.0)).m, length, 1e-3)
        sig = signature(res.samples.downsample(10))
        np.testing.assert_allclose(sig.w1, 0.5, atol=1e-6)
        np.testing.assert_allclose(sig.w2, 1 / (2 * np.sqrt(2)), atol=1e-6)
        dets = np.linalg.det(res.frames)
        np.testing.assert_allclose(dets, 1.0, atol=1e-6)

    def test_fourth_order(self):
        errs = [terminal_error(HELIX_11, 50.0, h) for h in (4e-3, 2e-3)]
        assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.1)

    def test_halving_at_the_rounding_floor(self):
        # from h = 1e-3 on, the truncation error is at double-precision level
        errs = [terminal_error(HELIX_11, 50.0, h) for h in (1e-3, 5e-4)]
        assert errs[1] < errs[0] < 1e-12

    def test_step_bounds(self):
        with pytest.raises(ValueError):
            integrate_frame(HELIX_11, initial_frame(HELIX_11), 1.0, 0.05)
        with pytest.raises(ValueError):
            integrate_frame(HELIX_11, initial_frame(HELIX_11), 1.0, 0.0)

    def test_large_step_detected(self):
        b = algebra_matrix(HELIX_11).m * 200.0
        with pytest.raises(StepTooLarge):
            integrate_frame(HELIX_11, initial_frame(HELIX_11), 1.0, 1e-2, b=b)

    def test_uniqueness_up_to_group(self):
        # starting from g . alpha0 yields g . (curve): recovery returns g
        g = random_special(8)
        a0 = frame(HELIX_11.helix().jet(0.0)).m
        res_a = integrate_frame(HELIX_11, a0, 10.0, 1e-3)
        res_b = integrate_frame(HELIX_11, embed(g) @ a0, 10.0, 1e-3)
        np.testing.assert_allclose(res_b.frames, embed(g) @ res_a.frames, atol=1e-9)
        ca, cb = res_a.samples.downsample(10), res_b.samples.downsample(10)
        r = recover_transformation(ca, cb, ca.t0 + 40 * ca.dt)
        np.testing.assert_allclose(embed(r.g), embed(g), atol=1e-6)


class TestRoundtrip:
    @pytest.mark.parametrize("w1,w2", [(0.5, 0.353553), (0.4, 0.178885), (1.0, 1.01)])
    def test_equivalent(self, w1, w2):
        inv = ConstantInvariants(w1, w2)
        report = roundtrip(inv)
        assert report.equivalent, report
        assert report.tol == 1e-5

    def test_near_planar_torsion(self):
        assert ConstantInvariants(1.0, 1.01).tau == pytest.approx(np.sqrt(1.01**2 - 1))
