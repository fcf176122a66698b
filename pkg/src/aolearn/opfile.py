"""Binary operator file format.

Layout: 7-byte magic "GOALOP1", then n, k and patch_side as little-endian
32-bit unsigned integers, then the k x n payload as little-endian float64,
row-major (row i is atom i).
"""

import struct

import numpy as np

MAGIC = b"GOALOP1"
_HEADER = struct.Struct("<III")


def write_operator(path, omega, patch_side):
    """Serialize a k x n operator with unit-norm rows."""
    omega = np.ascontiguousarray(omega, dtype="<f8")
    if omega.ndim != 2:
        raise ValueError("operator must be a 2-d array")
    k, n = omega.shape
    if k < n:
        raise ValueError(f"operator must have k >= n rows, got {k} x {n}")
    if n != patch_side * patch_side:
        raise ValueError(f"operator width {n} does not match patch side "
                         f"{patch_side}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(n, k, patch_side))
        fh.write(omega.tobytes())


def read_operator(path):
    """Read and validate an operator file; returns (omega, patch_side)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: bad magic, not an operator file")
    off = len(MAGIC)
    if len(data) < off + _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    n, k, patch_side = _HEADER.unpack_from(data, off)
    if k < n:
        raise ValueError(f"{path}: invalid dimensions k={k} < n={n}")
    if n != patch_side * patch_side:
        raise ValueError(f"{path}: n={n} inconsistent with patch side "
                         f"{patch_side}")
    payload = data[off + _HEADER.size:]
    if len(payload) != 8 * n * k:
        raise ValueError(f"{path}: payload has {len(payload)} bytes, "
                         f"expected {8 * n * k}")
    omega = np.frombuffer(payload, dtype="<f8").reshape(k, n).astype(float)
    norms = np.linalg.norm(omega, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise ValueError(f"{path}: operator rows are not unit norm")
    return omega, patch_side
