"""Training-set construction from grayscale images.

Patches are square, column-stacked (column-major / Fortran order, fixed for
the whole package) and normalized to unit Euclidean norm.  No mean removal
is performed: flat patches are kept, normalized to constant unit vectors.
"""

import numpy as np


def vectorize_patch(P):
    """Column-stack a patch into a vector."""
    P = np.asarray(P, dtype=float)
    return P.reshape(-1, order="F")


def devectorize(v, side):
    """Inverse of vectorize_patch for a side x side patch."""
    v = np.asarray(v, dtype=float)
    if v.size != side * side:
        raise ValueError(f"vector of length {v.size} is not a {side}x{side} patch")
    return v.reshape(side, side, order="F")


def extract_training_set(images, patch_side, M, seed=None):
    """Draw M random unit-norm vectorized patches from a list of images.

    Image choice and patch position are uniform; zero-norm patches are
    rejected and redrawn.  Deterministic for a fixed seed.
    """
    if M < 1:
        raise ValueError("need at least one sample")
    imgs = [np.asarray(im, dtype=float) for im in images]
    if not imgs:
        raise ValueError("need at least one image")
    for im in imgs:
        if im.ndim != 2 or im.shape[0] < patch_side or im.shape[1] < patch_side:
            raise ValueError(f"every image must be at least {patch_side} pixels in "
                             "both dimensions")

    rng = np.random.default_rng(seed)
    n = patch_side * patch_side
    S = np.empty((n, M))
    rejects = 0
    j = 0
    while j < M:
        im = imgs[rng.integers(len(imgs))]
        r = rng.integers(im.shape[0] - patch_side + 1)
        c = rng.integers(im.shape[1] - patch_side + 1)
        v = im[r:r + patch_side, c:c + patch_side].reshape(-1, order="F")
        norm = np.linalg.norm(v)
        if norm == 0.0:
            rejects += 1
            if rejects > 1000 * max(M, 10):
                raise RuntimeError("could not draw nonzero patches; "
                                   "are all images constant zero?")
            continue
        S[:, j] = v / norm
        j += 1
    return S
