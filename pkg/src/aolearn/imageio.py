"""Grayscale image file I/O.

Binary PGM (P5, maxval 255) is the bit-exact native format; PNG is
supported when Pillow is installed.  Images are held as float arrays in
memory and only clamped to [0, 255] and rounded when written.
"""

import os

import numpy as np


def _tokens(data):
    # PGM header tokenizer: whitespace separated, '#' comments run to EOL
    i = 0
    n = len(data)
    while i < n:
        c = data[i:i + 1]
        if c.isspace():
            i += 1
            continue
        if c == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < n and not data[j:j + 1].isspace():
            j += 1
        yield data[i:j], j
        i = j


def read_pgm(path):
    """Read a binary (P5) PGM file into a float array."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields = []
    end = 0
    for tok, pos in _tokens(data):
        fields.append(tok)
        end = pos
        if len(fields) == 4:
            break
    if len(fields) < 4:
        raise ValueError(f"{path}: truncated PGM header")
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    w, h, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 is supported, got {maxval}")
    pixels = data[end + 1:end + 1 + w * h]  # single whitespace after maxval
    if len(pixels) != w * h:
        raise ValueError(f"{path}: expected {w * h} pixel bytes, "
                         f"found {len(pixels)}")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w).astype(float)


def to_uint8(img):
    """Clamp to [0, 255] and round to the nearest integer."""
    return np.clip(np.rint(np.asarray(img, dtype=float)), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    """Write a float image as binary PGM, clamping and rounding."""
    data = to_uint8(img)
    if data.ndim != 2:
        raise ValueError("expected a 2-d grayscale image")
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def _pil_image():
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise RuntimeError("PNG support requires the optional Pillow "
                           "dependency (pip install aolearn[png])") from exc
    return Image


def read_png(path):
    Image = _pil_image()
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=float)


def write_png(path, img):
    Image = _pil_image()
    Image.fromarray(to_uint8(img), mode="L").save(path)


def read_image(path):
    """Read a grayscale image, dispatching on the file extension."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pgm":
        return read_pgm(path)
    if ext == ".png":
        return read_png(path)
    raise ValueError(f"unsupported image format {ext!r} (use .pgm or .png)")


def write_image(path, img):
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pgm":
        write_pgm(path, img)
    elif ext == ".png":
        write_png(path, img)
    else:
        raise ValueError(f"unsupported image format {ext!r} (use .pgm or .png)")
