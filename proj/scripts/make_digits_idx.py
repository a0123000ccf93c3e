#!/usr/bin/env python3
"""Export the UCI handwritten-digits dataset (bundled with scikit-learn) to
IDX files under data/digits/, using the standard MNIST file names so the
simulator's IDX loader can consume either dataset from a directory.

Pixel values (0..16) are rescaled to 0..255 to match the loader's /255
normalization. Split: first 1500 samples train, remaining 297 test.
"""
import struct
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits


def write_idx_images(path: Path, images: np.ndarray) -> None:
    n, rows, cols = images.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, n, rows, cols))
        f.write(images.astype(np.uint8).tobytes())


def write_idx_labels(path: Path, labels: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(labels.astype(np.uint8).tobytes())


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/digits")
    out.mkdir(parents=True, exist_ok=True)
    digits = load_digits()
    images = np.round(digits.images * (255.0 / 16.0)).astype(np.uint8)
    labels = digits.target.astype(np.uint8)
    n_train = 1500
    write_idx_images(out / "train-images-idx3-ubyte", images[:n_train])
    write_idx_labels(out / "train-labels-idx1-ubyte", labels[:n_train])
    write_idx_images(out / "t10k-images-idx3-ubyte", images[n_train:])
    write_idx_labels(out / "t10k-labels-idx1-ubyte", labels[n_train:])
    print(f"wrote {n_train} train / {len(labels) - n_train} test samples to {out}")


if __name__ == "__main__":
    main()
