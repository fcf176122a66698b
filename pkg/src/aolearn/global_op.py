"""Global analysis operator and measurement operators with exact adjoints.

The patch operator is expanded to a whole image by applying it to every
(strided) square window of the edge-replicated padded image and stacking the
per-window coefficients.  The expansion is never formed as a matrix; forward
and adjoint use sliding windows and strided scatter-adds.

Measurement operators cover the three reconstruction tasks: identity
(denoising), pixel mask (inpainting) and Gaussian blur + decimation
(super-resolution).  Every operator here passes a randomized adjoint

    <Op x, z> == <x, Op^T z>

test to ~1e-10, which the reconstruction gradients rely on.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import convolve2d, correlate2d


@dataclass
class GlobalOperatorConfig:
    """Patch size, strides and image dimensions for the global operator."""

    patch_side: int
    h: int
    w: int
    d_v: int = 1
    d_h: int = 1

    def __post_init__(self):
        if self.patch_side < 1:
            raise ValueError("patch_side must be positive")
        if not (1 <= self.d_v <= self.patch_side
                and 1 <= self.d_h <= self.patch_side):
            raise ValueError("strides must lie in [1, patch_side]")
        if self.h < 1 or self.w < 1:
            raise ValueError("image dimensions must be positive")

    @property
    def pad(self):
        return self.patch_side // 2

    def grid_shape(self):
        """Number of window positions (rows, cols) over the padded image."""
        side = self.patch_side
        hp, wp = self.h + 2 * self.pad, self.w + 2 * self.pad
        return ((hp - side) // self.d_v + 1, (wp - side) // self.d_h + 1)


def pad_constant(img, amount):
    """Replicate the boundary values `amount` pixels on all four sides."""
    img = np.asarray(img, dtype=float)
    if amount == 0:
        return img.copy()
    return np.pad(img, amount, mode="edge")


def pad_constant_adjoint(G, amount, shape):
    """Adjoint of pad_constant: fold border contributions onto edge pixels."""
    h, w = shape
    G = np.asarray(G, dtype=float)
    if G.shape != (h + 2 * amount, w + 2 * amount):
        raise ValueError("padded gradient has inconsistent shape")
    if amount == 0:
        return G.copy()
    a = amount
    R = G[a:a + h, :].copy()
    R[0] += G[:a, :].sum(axis=0)
    R[-1] += G[a + h:, :].sum(axis=0)
    out = R[:, a:a + w].copy()
    out[:, 0] += R[:, :a].sum(axis=1)
    out[:, -1] += R[:, a + w:].sum(axis=1)
    return out


def _windows(img, cfg):
    padded = pad_constant(img, cfg.pad)
    side = cfg.patch_side
    win = sliding_window_view(padded, (side, side))[::cfg.d_v, ::cfg.d_h]
    n_r, n_c = win.shape[:2]
    # column-major vectorization of each window, one window per row
    return win.transpose(0, 1, 3, 2).reshape(n_r * n_c, side * side)


def apply_global(omega, img, cfg):
    """Stacked coefficients of every window: k entries per grid position.

    Windows are visited row-major over the grid; the output has length
    k * n_r * n_c.
    """
    omega = np.asarray(omega, dtype=float)
    img = np.asarray(img, dtype=float)
    if img.shape != (cfg.h, cfg.w):
        raise ValueError(f"image shape {img.shape} does not match config "
                         f"({cfg.h}, {cfg.w})")
    if omega.shape[1] != cfg.patch_side ** 2:
        raise ValueError("operator width does not match the patch size")
    V = _windows(img, cfg)
    return (V @ omega.T).reshape(-1)


def apply_global_adjoint(omega, z, cfg):
    """Exact adjoint of apply_global, including the padding fold-back."""
    omega = np.asarray(omega, dtype=float)
    z = np.asarray(z, dtype=float)
    side = cfg.patch_side
    n_r, n_c = cfg.grid_shape()
    k = omega.shape[0]
    if z.shape != (k * n_r * n_c,):
        raise ValueError(f"coefficient vector has length {z.size}, "
                         f"expected {k * n_r * n_c}")
    V = z.reshape(n_r * n_c, k) @ omega  # one window per row, n entries
    T = V.reshape(n_r, n_c, side, side).transpose(0, 1, 3, 2)
    buf = np.zeros((cfg.h + 2 * cfg.pad, cfg.w + 2 * cfg.pad))
    for u in range(side):
        for v in range(side):
            buf[u:u + n_r * cfg.d_v:cfg.d_v,
                v:v + n_c * cfg.d_h:cfg.d_h] += T[:, :, u, v]
    return pad_constant_adjoint(buf, cfg.pad, (cfg.h, cfg.w))


def gaussian_kernel(factor):
    """Normalized (2d-1) x (2d-1) Gaussian with sigma = d/3."""
    if factor < 1:
        raise ValueError("decimation factor must be >= 1")
    sigma = factor / 3.0
    x = np.arange(2 * factor - 1, dtype=float) - (factor - 1)
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    K = np.outer(g, g)
    return K / K.sum()


class Identity:
    """Full sampling: the observation is the vectorized image itself."""

    kind = "identity"

    def __init__(self, shape):
        self.shape = tuple(shape)
        self.m = self.shape[0] * self.shape[1]

    def apply(self, img):
        img = np.asarray(img, dtype=float)
        if img.shape != self.shape:
            raise ValueError("image shape mismatch")
        return img.reshape(-1, order="F").copy()

    def adjoint(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValueError("observation length mismatch")
        return y.reshape(self.shape, order="F").copy()


class PixelMask:
    """Keep the pixels flagged True in a boolean mask, drop the rest."""

    kind = "mask"

    def __init__(self, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 2:
            raise ValueError("mask must be 2-d")
        self.mask = mask
        self.shape = mask.shape
        # kept pixels as indices into the column-stacked image
        self.indices = np.flatnonzero(mask.reshape(-1, order="F"))
        self.m = int(self.indices.size)
        if self.m == 0:
            raise ValueError("mask keeps no pixels")

    def apply(self, img):
        img = np.asarray(img, dtype=float)
        if img.shape != self.shape:
            raise ValueError("image shape mismatch")
        return img.reshape(-1, order="F")[self.indices].copy()

    def adjoint(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValueError("observation length mismatch")
        flat = np.zeros(self.shape[0] * self.shape[1])
        flat[self.indices] = y
        return flat.reshape(self.shape, order="F")


class BlurDecimate:
    """Gaussian blur followed by decimation by an integer factor.

    The blur uses edge replication at the boundary; decimation samples
    every factor-th pixel starting at offset floor(factor / 2).
    """

    kind = "blur_decimate"

    def __init__(self, factor, shape):
        self.factor = int(factor)
        self.shape = tuple(shape)
        self.kernel = gaussian_kernel(self.factor)
        self.offset = self.factor // 2
        h, w = self.shape
        self.low_shape = (len(range(self.offset, h, self.factor)),
                          len(range(self.offset, w, self.factor)))
        self.m = self.low_shape[0] * self.low_shape[1]

    def _blur(self, img):
        rad = self.factor - 1
        if rad == 0:
            return np.asarray(img, dtype=float).copy()
        padded = pad_constant(img, rad)
        return correlate2d(padded, self.kernel, mode="valid")

    def _blur_adjoint(self, u):
        rad = self.factor - 1
        if rad == 0:
            return np.asarray(u, dtype=float).copy()
        return pad_constant_adjoint(convolve2d(u, self.kernel, mode="full"),
                                    rad, self.shape)

    def apply(self, img):
        img = np.asarray(img, dtype=float)
        if img.shape != self.shape:
            raise ValueError("image shape mismatch")
        low = self._blur(img)[self.offset::self.factor, self.offset::self.factor]
        return low.reshape(-1, order="F")

    def adjoint(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValueError("observation length mismatch")
        up = np.zeros(self.shape)
        up[self.offset::self.factor, self.offset::self.factor] = \
            y.reshape(self.low_shape, order="F")
        return self._blur_adjoint(up)


def measure(A, img):
    """Apply a measurement operator to an image, giving the observation."""
    return A.apply(img)


def measure_adjoint(A, y):
    """Apply the adjoint of a measurement operator to an observation."""
    return A.adjoint(y)


def read_mask(path):
    """Read the text mask format: header line 'h w', then h*w 0/1 flags."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing mask header")
    h, w = int(tokens[0]), int(tokens[1])
    flags = tokens[2:]
    if len(flags) != h * w:
        raise ValueError(f"{path}: expected {h * w} flags, found {len(flags)}")
    values = np.array([int(t) for t in flags])
    if not np.all((values == 0) | (values == 1)):
        raise ValueError(f"{path}: mask flags must be 0 or 1")
    return values.reshape(h, w).astype(bool)  # row-major flags


def write_mask(path, mask):
    """Write a boolean mask in the text format read_mask expects."""
    mask = np.asarray(mask, dtype=bool)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{mask.shape[0]} {mask.shape[1]}\n")
        for row in mask.astype(int):
            fh.write(" ".join(str(v) for v in row) + "\n")
