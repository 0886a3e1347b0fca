#!/usr/bin/env python3
"""Regenerate the grayscale reference images under tests/data/refs.

The images come from the sample data bundled with scikit-image (public
domain / CC0). Each one is converted to 8-bit gray, center-cropped to a
square and resampled to 256x256, then written as binary PGM (P5).
"""
import argparse
import pathlib

import numpy as np
from skimage import color, data, transform, util

SOURCES = ["camera", "astronaut", "coffee", "chelsea", "coins", "rocket"]


def to_gray_square(img, size):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
    img = util.img_as_float(img)
    h, w = img.shape
    side = min(h, w)
    top, left = (h - side) // 2, (w - side) // 2
    img = img[top:top + side, left:left + side]
    img = transform.resize(img, (size, size), anti_aliasing=True)
    return np.clip(np.round(img * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(img.tobytes())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="tests/data/refs")
    parser.add_argument("--size", type=int, default=256)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in SOURCES:
        write_pgm(out / f"{name}.pgm", to_gray_square(getattr(data, name)(), args.size))


if __name__ == "__main__":
    main()
