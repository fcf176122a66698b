"""Command-line front end.

Subcommands: learn, denoise, inpaint, superres, eval.  Exit codes are 0 on
success, 2 for usage errors, 1 for runtime failures.  Every command is
deterministic given its flags (learning additionally takes a seed).
"""

import argparse
import os
import sys

import numpy as np

from . import cg, imageio, metrics, oblique, opfile, patches, reconstruct
from .global_op import (BlurDecimate, GlobalOperatorConfig, Identity,
                        PixelMask, read_mask)
from .objective import LearnParams


class UsageError(ValueError):
    pass


def _list_images(directory):
    exts = (".pgm", ".png")
    try:
        names = sorted(os.listdir(directory))
    except OSError as exc:
        raise UsageError(f"cannot read image directory: {exc}") from exc
    paths = [os.path.join(directory, f) for f in names
             if f.lower().endswith(exts)]
    if not paths:
        raise UsageError(f"no .pgm/.png images found in {directory}")
    return [imageio.read_image(p) for p in paths]


def cmd_learn(args):
    n = args.patch * args.patch
    k = args.k if args.k is not None else 2 * n
    if k < n:
        raise UsageError(f"--k must be at least patch^2 = {n}, got {k}")

    images = _list_images(args.images)
    S = patches.extract_training_set(images, args.patch, args.samples,
                                     seed=args.seed)
    params = LearnParams(p=args.p, nu=args.nu, kappa=args.kappa, mu=args.mu)
    cfg = cg.SolverConfig(max_iters=args.max_iters, tol=args.tol,
                          beta_rule=args.beta)
    init = oblique.random_point(n, k, seed=args.seed)

    trace = []

    def progress(state):
        trace.append((state.iteration, state.f, state.grad_norm, state.alpha))
        print(f"iter {state.iteration:4d}  f={state.f:.6e}  "
              f"grad={state.grad_norm:.4e}  alpha={state.alpha:.4e}")

    result = cg.learn_operator(S, params, cfg, init, callback=progress)
    if not result.converged:
        print(f"stopped: {result.status}", file=sys.stderr)
    opfile.write_operator(args.out, result.operator, args.patch)
    print(f"wrote {args.out} ({k} x {n}, status {result.status})")

    if args.report:
        from . import report
        report.save_learning_report(args.report, trace, result.operator,
                                    args.patch)
        print(f"report written to {args.report}")
    return 0


def _load_operator(path):
    omega, patch_side = opfile.read_operator(path)
    return omega, patch_side


def _run_reconstruction(prob, observed_img, args, title):
    trace = []

    def progress(state):
        trace.append((state.iteration, state.f, state.grad_norm, state.alpha))
        print(f"iter {state.iteration:4d}  cost={state.f:.6e}")

    out = reconstruct.solve(prob, max_iters=args.iters, callback=progress)
    imageio.write_image(args.out, out)
    print(f"wrote {args.out}")

    if getattr(args, "report", None):
        from . import report
        report.save_reconstruction_report(args.report, observed_img, out,
                                          trace, title)
        print(f"report written to {args.report}")
    return 0


def cmd_denoise(args):
    omega, side = _load_operator(args.op)
    img = imageio.read_image(args.infile)
    lam = args.lam if args.lam is not None else reconstruct.denoise_lambda(args.sigma)
    cfg = GlobalOperatorConfig(patch_side=side, h=img.shape[0], w=img.shape[1])
    A = Identity(img.shape)
    prob = reconstruct.ReconstructionProblem(A=A, y=A.apply(img), lam=lam,
                                             omega=omega, cfg=cfg)
    return _run_reconstruction(prob, img, args, "denoising")


def cmd_inpaint(args):
    omega, side = _load_operator(args.op)
    img = imageio.read_image(args.infile)
    mask = read_mask(args.mask)
    if mask.shape != img.shape:
        raise ValueError(f"mask {mask.shape} does not match image {img.shape}")
    cfg = GlobalOperatorConfig(patch_side=side, h=img.shape[0], w=img.shape[1])
    A = PixelMask(mask)
    prob = reconstruct.ReconstructionProblem(A=A, y=A.apply(img), lam=args.lam,
                                             omega=omega, cfg=cfg)
    return _run_reconstruction(prob, img, args, "inpainting")


def cmd_superres(args):
    omega, side = _load_operator(args.op)
    low = imageio.read_image(args.infile)
    if args.factor < 1:
        raise UsageError("--factor must be a positive integer")
    hr_shape = (low.shape[0] * args.factor, low.shape[1] * args.factor)
    A = BlurDecimate(args.factor, hr_shape)
    cfg = GlobalOperatorConfig(patch_side=side, h=hr_shape[0], w=hr_shape[1])
    prob = reconstruct.ReconstructionProblem(A=A, y=low.reshape(-1, order="F"),
                                             lam=args.lam, omega=omega, cfg=cfg)
    return _run_reconstruction(prob, low, args, f"super-resolution x{args.factor}")


def cmd_eval(args):
    ref = imageio.read_image(args.ref)
    test = imageio.read_image(args.test)
    rep = metrics.quality_report(ref, test)
    p_str = "inf" if np.isinf(rep.psnr) else f"{rep.psnr:.2f}"
    print(f"PSNR: {p_str}, MSSIM: {rep.mssim:.3f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aolearn",
        description="Learn sparsifying analysis operators from image patches "
                    "and apply them to denoising, inpainting and "
                    "super-resolution.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn an operator from training images")
    p.add_argument("--images", required=True,
                   help="directory of grayscale training images (.pgm/.png)")
    p.add_argument("--patch", type=int, default=8, help="patch side length")
    p.add_argument("--k", type=int, default=None,
                   help="number of atoms (default: 2 * patch^2)")
    p.add_argument("--samples", type=int, default=200000,
                   help="number of training patches")
    p.add_argument("--p", type=float, default=0.4, help="sparsity exponent")
    p.add_argument("--nu", type=float, default=1e-6, help="smoothing parameter")
    p.add_argument("--kappa", type=float, default=9000.0,
                   help="rank penalty weight")
    p.add_argument("--mu", type=float, default=0.01,
                   help="row coherence penalty weight")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-4,
                   help="step-norm stopping tolerance")
    p.add_argument("--beta", choices=("hybrid", "fr"), default="hybrid",
                   help="conjugate direction update rule")
    p.add_argument("--out", required=True, help="output operator file")
    p.add_argument("--report", default=None,
                   help="directory for trace CSV and figures")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("denoise", help="remove additive Gaussian noise")
    p.add_argument("--op", required=True, help="operator file")
    p.add_argument("--in", dest="infile", required=True, help="noisy image")
    p.add_argument("--out", required=True, help="output image")
    p.add_argument("--sigma", type=float, required=True,
                   help="noise standard deviation")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="sparsity weight (default: sigma / 16)")
    p.add_argument("--iters", type=int, default=30)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("inpaint", help="fill in missing pixels")
    p.add_argument("--op", required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="image with missing pixels")
    p.add_argument("--mask", required=True,
                   help="text mask file (1 = pixel known)")
    p.add_argument("--out", required=True)
    p.add_argument("--lambda", dest="lam", type=float,
                   default=reconstruct.INPAINT_LAMBDA)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_inpaint)

    p = sub.add_parser("superres", help="single-image super-resolution")
    p.add_argument("--op", required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="low-resolution image")
    p.add_argument("--factor", type=int, required=True,
                   help="integer magnification factor")
    p.add_argument("--out", required=True)
    p.add_argument("--lambda", dest="lam", type=float,
                   default=reconstruct.SUPERRES_LAMBDA)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_superres)

    p = sub.add_parser("eval", help="print PSNR and MSSIM of two images")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures: bad files, dim mismatches
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
