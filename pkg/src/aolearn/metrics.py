"""Image quality metrics: PSNR and mean structural similarity (MSSIM).

Both assume 8-bit intensity conventions (peak 255) on real-valued arrays.
MSSIM uses the customary parameters: 11 x 11 Gaussian window with sigma 1.5,
K1 = 0.01, K2 = 0.03, and statistics taken only where the window fits
entirely inside the image.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

_K1 = 0.01
_K2 = 0.03
_L = 255.0
_WIN_SIZE = 11
_WIN_SIGMA = 1.5


@dataclass
class QualityReport:
    psnr: float  # decibels; inf for identical images
    mssim: float  # in [0, 1] for nonnegative-intensity inputs


def psnr(ref, test):
    """10 log10(255^2 N / sum of squared differences); inf when identical."""
    ref = np.asarray(ref, dtype=float)
    test = np.asarray(test, dtype=float)
    if ref.shape != test.shape:
        raise ValueError("images must have the same shape")
    diff = ref - test
    sse = float(np.sum(diff * diff))
    if sse == 0.0:
        return np.inf
    return 10.0 * np.log10(_L * _L * ref.size / sse)


def _window():
    x = np.arange(_WIN_SIZE, dtype=float) - (_WIN_SIZE - 1) / 2.0
    g = np.exp(-(x * x) / (2.0 * _WIN_SIGMA ** 2))
    w = np.outer(g, g)
    return w / w.sum()


def mssim(ref, test):
    """Mean SSIM over all fully interior window positions."""
    x = np.asarray(ref, dtype=float)
    y = np.asarray(test, dtype=float)
    if x.shape != y.shape:
        raise ValueError("images must have the same shape")
    if min(x.shape) < _WIN_SIZE:
        raise ValueError(f"images must be at least {_WIN_SIZE} pixels per side")

    w = _window()
    filt = lambda im: convolve2d(im, w, mode="valid")
    mu_x = filt(x)
    mu_y = filt(y)
    sigma_x = filt(x * x) - mu_x * mu_x
    sigma_y = filt(y * y) - mu_y * mu_y
    sigma_xy = filt(x * y) - mu_x * mu_y

    c1 = (_K1 * _L) ** 2
    c2 = (_K2 * _L) ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * sigma_xy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (sigma_x + sigma_y + c2)
    return float(np.mean(num / den))


def quality_report(ref, test):
    """Both metrics for an image pair."""
    return QualityReport(psnr=psnr(ref, test), mssim=mssim(ref, test))
