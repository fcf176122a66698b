import os

import numpy as np
import pytest

import helpers
from aolearn import oblique
from aolearn.global_op import (BlurDecimate, GlobalOperatorConfig, Identity,
                               PixelMask, apply_global, apply_global_adjoint,
                               gaussian_kernel, measure, measure_adjoint,
                               pad_constant, pad_constant_adjoint, read_mask,
                               write_mask)


def brute_force_global(omega, img, cfg):
    # explicit window-loop construction of the stacked coefficients
    padded = pad_constant(img, cfg.pad)
    side = cfg.patch_side
    out = []
    for r in range(0, padded.shape[0] - side + 1, cfg.d_v):
        for c in range(0, padded.shape[1] - side + 1, cfg.d_h):
            patch = padded[r:r + side, c:c + side].reshape(-1, order="F")
            out.append(omega @ patch)
    return np.concatenate(out)


class TestPadding:
    def test_single_pixel(self):
        out = pad_constant(np.array([[5.0]]), 1)
        assert np.array_equal(out, np.full((3, 3), 5.0))

    def test_zero_amount_identity(self):
        img = np.arange(6.0).reshape(2, 3)
        assert np.array_equal(pad_constant(img, 0), img)

    def test_matches_clipped_index_oracle(self):
        rng = np.random.default_rng(0)
        img = rng.standard_normal((2, 3))
        a = 2
        out = pad_constant(img, a)
        for i in range(out.shape[0]):
            for j in range(out.shape[1]):
                src = img[min(max(i - a, 0), 1), min(max(j - a, 0), 2)]
                assert out[i, j] == src

    def test_adjoint_identity(self):
        rng = np.random.default_rng(1)
        for a, (h, w) in ((1, (5, 7)), (4, (6, 6)), (0, (3, 3))):
            gap = helpers.dot_product_adjoint_gap(
                lambda x: pad_constant(x, a).reshape(-1),
                lambda z: pad_constant_adjoint(
                    z.reshape(h + 2 * a, w + 2 * a), a, (h, w)),
                (h, w), (h + 2 * a) * (w + 2 * a), rng)
            assert gap < 1e-12


class TestGlobalOperator:
    def test_difference_atoms_kill_constant_images(self):
        side = 3
        row = np.zeros(9)
        row[0], row[1] = 1.0, -1.0  # vertical difference
        omega = np.vstack([row / np.sqrt(2)])
        cfg = GlobalOperatorConfig(patch_side=side, h=10, w=12)
        z = apply_global(omega, np.full((10, 12), 3.7), cfg)
        assert np.abs(z).max() < 1e-12

    def test_identity_operator_tiles_are_pixel_samples(self):
        # with stride = patch side and the identity patch operator the
        # windows tile the padded image exactly, so the coefficients are
        # a permutation of its pixels
        side = 4
        cfg = GlobalOperatorConfig(patch_side=side, h=8, w=8,
                                   d_v=side, d_h=side)
        rng = np.random.default_rng(2)
        img = rng.standard_normal((8, 8))
        z = apply_global(np.eye(side * side), img, cfg)
        padded = pad_constant(img, cfg.pad)
        assert z.size == padded.size
        assert np.array_equal(np.sort(z), np.sort(padded.reshape(-1)))

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        omega = oblique.random_point(4, 9, seed=4).T
        for strides in ((1, 1), (2, 2), (1, 2)):
            cfg = GlobalOperatorConfig(patch_side=2, h=6, w=7,
                                       d_v=strides[0], d_h=strides[1])
            img = rng.standard_normal((6, 7))
            assert np.allclose(apply_global(omega, img, cfg),
                               brute_force_global(omega, img, cfg), atol=1e-12)

    def test_larger_brute_force_case(self):
        rng = np.random.default_rng(4)
        omega = oblique.random_point(64, 128, seed=5).T
        cfg = GlobalOperatorConfig(patch_side=8, h=16, w=16)
        img = rng.standard_normal((16, 16))
        assert np.allclose(apply_global(omega, img, cfg),
                           brute_force_global(omega, img, cfg), atol=1e-10)

    def test_adjoint_identity(self):
        rng = np.random.default_rng(5)
        omega = oblique.random_point(9, 18, seed=6).T
        for strides in ((1, 1), (3, 3)):
            cfg = GlobalOperatorConfig(patch_side=3, h=11, w=13,
                                       d_v=strides[0], d_h=strides[1])
            n_r, n_c = cfg.grid_shape()
            gap = helpers.dot_product_adjoint_gap(
                lambda x: apply_global(omega, x, cfg),
                lambda z: apply_global_adjoint(omega, z, cfg),
                (11, 13), omega.shape[0] * n_r * n_c, rng)
            assert gap < 1e-10

    def test_zero_coefficients_give_zero_image(self):
        omega = oblique.random_point(4, 8, seed=7).T
        cfg = GlobalOperatorConfig(patch_side=2, h=5, w=5)
        n_r, n_c = cfg.grid_shape()
        out = apply_global_adjoint(omega, np.zeros(8 * n_r * n_c), cfg)
        assert np.array_equal(out, np.zeros((5, 5)))

    def test_single_coefficient_footprint(self):
        # one nonzero coefficient can only touch the pixels of its window
        omega = oblique.random_point(9, 12, seed=8).T
        side = 3
        cfg = GlobalOperatorConfig(patch_side=side, h=9, w=9)
        n_r, n_c = cfg.grid_shape()
        k = omega.shape[0]
        grid_r, grid_c = 4, 5  # interior window
        z = np.zeros(k * n_r * n_c)
        z[(grid_r * n_c + grid_c) * k + 2] = 1.0
        out = apply_global_adjoint(omega, z, cfg)
        rows = np.nonzero(np.abs(out).sum(axis=1))[0]
        cols = np.nonzero(np.abs(out).sum(axis=0))[0]
        # window top-left in padded coords is (grid_r, grid_c); original
        # pixel r maps to padded r + pad
        r0, c0 = grid_r - cfg.pad, grid_c - cfg.pad
        assert rows.min() >= max(r0, 0) and rows.max() <= r0 + side - 1
        assert cols.min() >= max(c0, 0) and cols.max() <= c0 + side - 1

    def test_shift_permutes_interior_blocks(self):
        # full-overlap expansion is translation consistent: the same window
        # content appears at a shifted grid position
        rng = np.random.default_rng(6)
        omega = oblique.random_point(9, 18, seed=9).T
        img = rng.standard_normal((12, 12))
        up, down = img[:-1, :], img[1:, :]
        cfg = GlobalOperatorConfig(patch_side=3, h=11, w=12)
        n_r, n_c = cfg.grid_shape()
        k = omega.shape[0]
        z_up = apply_global(omega, up, cfg).reshape(n_r, n_c, k)
        z_down = apply_global(omega, down, cfg).reshape(n_r, n_c, k)
        # windows fully inside the shared region: rows 4 .. n_r-5 are safe
        assert np.allclose(z_up[4:n_r - 4], z_down[3:n_r - 5], atol=1e-12)

    def test_dim_mismatch_rejected(self):
        omega = oblique.random_point(4, 8, seed=10).T
        cfg = GlobalOperatorConfig(patch_side=2, h=5, w=5)
        with pytest.raises(ValueError):
            apply_global(omega, np.zeros((4, 5)), cfg)
        with pytest.raises(ValueError):
            apply_global_adjoint(omega, np.zeros(7), cfg)

    def test_stride_bounds_validated(self):
        with pytest.raises(ValueError):
            GlobalOperatorConfig(patch_side=3, h=5, w=5, d_v=4)
        with pytest.raises(ValueError):
            GlobalOperatorConfig(patch_side=3, h=5, w=5, d_h=0)


class TestMeasurementOperators:
    def test_identity_round_trip(self):
        rng = np.random.default_rng(7)
        img = rng.standard_normal((5, 6))
        A = Identity(img.shape)
        assert np.array_equal(A.adjoint(A.apply(img)), img)
        assert A.m == 30

    def test_mask_keeping_all_pixels_equals_identity(self):
        rng = np.random.default_rng(8)
        img = rng.standard_normal((5, 6))
        A = PixelMask(np.ones(img.shape, dtype=bool))
        I = Identity(img.shape)
        assert np.array_equal(measure(A, img), measure(I, img))

    def test_mask_gathers_and_scatters(self):
        img = np.arange(12.0).reshape(3, 4)
        mask = np.zeros((3, 4), dtype=bool)
        mask[1, 2] = True
        A = PixelMask(mask)
        y = A.apply(img)
        assert y.shape == (1,) and y[0] == img[1, 2]
        back = A.adjoint(y)
        assert back[1, 2] == img[1, 2] and np.count_nonzero(back) == 1

    def test_gaussian_kernel_d3(self):
        K = gaussian_kernel(3)
        assert K.shape == (5, 5)
        assert abs(K.sum() - 1.0) < 1e-12
        # sigma = 1: the one-off center ratio is exp(-1/2)
        assert np.isclose(K[2, 3] / K[2, 2], np.exp(-0.5))

    def test_blur_decimate_dims(self):
        A = BlurDecimate(3, (96, 96))
        assert A.low_shape == (32, 32)
        assert A.kernel.shape == (5, 5)

    def test_factor_one_is_identity(self):
        rng = np.random.default_rng(9)
        img = rng.standard_normal((6, 7))
        A = BlurDecimate(1, img.shape)
        assert np.allclose(A.adjoint(A.apply(img)), img, atol=1e-15)

    def test_adjoints(self):
        rng = np.random.default_rng(10)
        ops = [Identity((8, 9)),
               PixelMask(rng.random((8, 9)) < 0.5),
               BlurDecimate(3, (9, 12)),
               BlurDecimate(2, (8, 10))]
        for A in ops:
            for _ in range(20):
                gap = helpers.dot_product_adjoint_gap(
                    A.apply, A.adjoint, A.shape, A.m, rng)
                assert gap < 1e-10

    def test_measure_wrappers(self):
        rng = np.random.default_rng(11)
        img = rng.standard_normal((4, 4))
        A = Identity(img.shape)
        assert np.array_equal(measure_adjoint(A, measure(A, img)), img)


class TestMaskFile:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(12)
        mask = rng.random((7, 5)) < 0.4
        path = os.path.join(tmp_path, "m.txt")
        write_mask(path, mask)
        assert np.array_equal(read_mask(path), mask)

    def test_format_is_row_major_text(self, tmp_path):
        path = os.path.join(tmp_path, "m.txt")
        with open(path, "w") as fh:
            fh.write("2 3\n1 0 1\n0 1 0\n")
        mask = read_mask(path)
        assert mask.shape == (2, 3)
        assert np.array_equal(mask, [[True, False, True],
                                     [False, True, False]])

    def test_bad_flag_count(self, tmp_path):
        path = os.path.join(tmp_path, "m.txt")
        with open(path, "w") as fh:
            fh.write("2 2\n1 0 1\n")
        with pytest.raises(ValueError):
            read_mask(path)

    def test_non_binary_flag(self, tmp_path):
        path = os.path.join(tmp_path, "m.txt")
        with open(path, "w") as fh:
            fh.write("1 2\n1 2\n")
        with pytest.raises(ValueError):
            read_mask(path)
