"""Independent brute-force oracles the library tests check against.

Everything here evaluates definitions directly (explicit sums and index
arithmetic) and never calls the library's transform or convolution paths.
"""

import numpy as np


def dft2_direct(x: np.ndarray) -> np.ndarray:
    """Direct double-sum 2D transform with the 1/(M*N) forward factor."""
    m, n = x.shape
    em = np.exp(-2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m)
    en = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    return em @ x @ en.T / (m * n)


def conv2_circular_direct(x: np.ndarray, grid: np.ndarray, center: tuple[int, int]) -> np.ndarray:
    """Triple-loop cyclic convolution with the kernel origin at ``center``."""
    h, w = x.shape
    kh, kw = grid.shape
    cy, cx = center
    out = np.zeros_like(x)
    for y in range(h):
        for xx in range(w):
            acc = 0.0
            for m in range(kh):
                for n in range(kw):
                    acc += grid[m, n] * x[(y - (m - cy)) % h, (xx - (n - cx)) % w]
            out[y, xx] = acc
    return out


def conv2_same_direct(x: np.ndarray, grid: np.ndarray, center: tuple[int, int]) -> np.ndarray:
    """Triple-loop zero-extended convolution keeping the input extents."""
    h, w = x.shape
    kh, kw = grid.shape
    cy, cx = center
    out = np.zeros_like(x)
    for y in range(h):
        for xx in range(w):
            acc = 0.0
            for m in range(kh):
                for n in range(kw):
                    sy = y - (m - cy)
                    sx = xx - (n - cx)
                    if 0 <= sy < h and 0 <= sx < w:
                        acc += grid[m, n] * x[sy, sx]
            out[y, xx] = acc
    return out


def patch_sum_direct(spectrum: np.ndarray, s_h: int, s_w: int) -> np.ndarray:
    """Plain sum of the s_h x s_w equal blocks of an origin-layout spectrum."""
    h, w = spectrum.shape
    bh, bw = h // s_h, w // s_w
    out = np.zeros((bh, bw), dtype=complex)
    for i in range(s_h):
        for j in range(s_w):
            out += spectrum[i * bh : (i + 1) * bh, j * bw : (j + 1) * bw]
    return out
