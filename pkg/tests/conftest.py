"""Shared fixtures: synthetic digit-style IDX corpora and the acceptance
summary hook that echoes one line per gate check at the end of a run."""

import struct

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_acceptance(num, ok, detail):
    """Log a gate check result; returns ok so callers can assert on it."""
    status = "PASS" if ok else "FAIL"
    line = f"acceptance {num} {status}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def write_idx_images(path, images: np.ndarray) -> None:
    """images: (n, rows, cols) uint8."""
    n, rows, cols = images.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">iiii", 2051, n, rows, cols))
        fh.write(np.ascontiguousarray(images, dtype=np.uint8).tobytes())


def write_idx_labels(path, labels: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(struct.pack(">ii", 2049, labels.shape[0]))
        fh.write(np.ascontiguousarray(labels, dtype=np.uint8).tobytes())


def make_digit_corpus(n, seed=0, n_classes=10, noise=18.0):
    """Synthetic stand-in for a handwritten-digit set: one random template
    per class plus pixel noise, quantized to uint8. Classes are well
    separated in pixel space, which is all the pipeline tests need."""
    rng = np.random.default_rng(seed)
    templates = rng.integers(0, 256, size=(n_classes, 28, 28)).astype(np.float64)
    labels = rng.integers(0, n_classes, size=n)
    imgs = templates[labels] + rng.normal(0.0, noise, size=(n, 28, 28))
    imgs = np.clip(imgs, 0, 255).astype(np.uint8)
    return imgs, labels.astype(np.uint8)


@pytest.fixture(scope="session")
def digit_idx_pair(tmp_path_factory):
    """(images_path, labels_path) for a 640-image synthetic digit corpus."""
    root = tmp_path_factory.mktemp("idx")
    imgs, labels = make_digit_corpus(640, seed=41)
    ip = root / "digits-images.idx"
    lp = root / "digits-labels.idx"
    write_idx_images(ip, imgs)
    write_idx_labels(lp, labels)
    return str(ip), str(lp)
