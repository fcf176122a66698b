"""Shared test utilities: synthetic grayscale images and common oracles.

The synthetic images stand in for natural photographs: piecewise-smooth
cartoons with soft gradients, overlapping shapes, lines and a little
texture.  They give the learning problem realistic statistics (edges in
many orientations plus flat regions) while keeping the repository free of
binary assets.
"""

import numpy as np
from scipy.ndimage import gaussian_filter


def synthetic_image(seed, h=256, w=256):
    """Deterministic cartoon-style test image with values in [0, 255]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:h, 0:w].astype(float)

    # smooth background gradient
    gx, gy = rng.uniform(-1, 1, 2)
    img = 120.0 + 60.0 * (gx * xx / w + gy * yy / h)

    # filled ellipses and rectangles with sharp edges
    for _ in range(10):
        cy, cx = rng.uniform(0, h), rng.uniform(0, w)
        ry, rx = rng.uniform(h / 16, h / 3), rng.uniform(w / 16, w / 3)
        val = rng.uniform(10, 245)
        if rng.random() < 0.5:
            mask = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
        else:
            ang = rng.uniform(0, np.pi)
            u = (yy - cy) * np.cos(ang) - (xx - cx) * np.sin(ang)
            v = (yy - cy) * np.sin(ang) + (xx - cx) * np.cos(ang)
            mask = (np.abs(u) <= ry / 2) & (np.abs(v) <= rx / 2)
        img[mask] = 0.6 * img[mask] + 0.4 * val + (val - 128.0) * 0.6

    # a few dark or bright lines
    for _ in range(4):
        ang = rng.uniform(0, np.pi)
        off = rng.uniform(-0.5, 0.5) * (h + w) / 2
        d = (yy - h / 2) * np.cos(ang) + (xx - w / 2) * np.sin(ang) - off
        img[np.abs(d) < rng.uniform(1.0, 2.5)] = rng.uniform(0, 255)

    # soften edges slightly and add mild texture
    img = gaussian_filter(img, 0.7)
    img += gaussian_filter(rng.standard_normal((h, w)), 1.5) * 6.0
    return np.clip(img, 0.0, 255.0)


def dot_product_adjoint_gap(forward, adjoint, x_shape, y_len, rng):
    """Relative gap of <Op x, z> - <x, Op^T z> for random x, z."""
    x = rng.standard_normal(x_shape)
    z = rng.standard_normal(y_len)
    lhs = float(np.dot(forward(x), z))
    rhs = float(np.sum(x * adjoint(z)))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)
