"""Analysis operator learning on the oblique manifold and its application
to image denoising, inpainting and single-image super-resolution."""

from . import (bicubic, cg, global_op, imageio, metrics, objective, oblique,
               opfile, patches, reconstruct)
from .cg import SolverConfig, learn_operator
from .global_op import BlurDecimate, GlobalOperatorConfig, Identity, PixelMask
from .objective import LearnParams
from .reconstruct import ReconstructionProblem, solve

__all__ = [
    "bicubic", "cg", "global_op", "imageio", "metrics", "objective",
    "oblique", "opfile", "patches", "reconstruct",
    "SolverConfig", "learn_operator", "LearnParams",
    "GlobalOperatorConfig", "Identity", "PixelMask", "BlurDecimate",
    "ReconstructionProblem", "solve",
]

__version__ = "0.1.0"
