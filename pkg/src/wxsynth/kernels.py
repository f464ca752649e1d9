"""Hot per-pixel loops, compiled with numba when available.

Every kernel exists twice: a vectorized/looping numpy reference
(``*_numpy``) and a numba ``@njit`` version. The public names dispatch to
the compiled versions unless numba is missing or the environment variable
``WXSYNTH_NO_NUMBA`` is set to a truthy value. Randomness never lives in
here: callers draw all random positions/offsets up front and pass plain
arrays, so both backends are deterministic given the same inputs.

``fastmath`` is deliberately off: the numpy fallback applies the same
floating-point operations in the same order, so the two backends agree to
within ordinary float32 rounding.
"""

import math
import os

import numpy as np

_NO_NUMBA = os.environ.get("WXSYNTH_NO_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _NO_NUMBA:
        raise ImportError("numba disabled via WXSYNTH_NO_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False
    njit = None

BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


# ---------------------------------------------------------------------------
# Separable convolution (edge replication)

def convolve_sep2d_numpy(plane, kernel):
    """Separable 2D convolution of a float32 plane with a 1D kernel.

    Border handling is edge replication. Taps are accumulated in ascending
    order so the result is bit-compatible with the jit version.
    """
    radius = len(kernel) // 2
    height, width = plane.shape

    padded = np.pad(plane, ((0, 0), (radius, radius)), mode="edge")
    tmp = np.zeros_like(plane)
    for t in range(len(kernel)):
        tmp += kernel[t] * padded[:, t:t + width]

    padded = np.pad(tmp, ((radius, radius), (0, 0)), mode="edge")
    out = np.zeros_like(plane)
    for t in range(len(kernel)):
        out += kernel[t] * padded[t:t + height, :]
    return out


def _convolve_sep2d_loop(plane, kernel):
    radius = len(kernel) // 2
    height, width = plane.shape
    tmp = np.zeros_like(plane)
    for y in range(height):
        for x in range(width):
            acc = np.float32(0.0)
            for t in range(len(kernel)):
                xx = x + t - radius
                if xx < 0:
                    xx = 0
                elif xx >= width:
                    xx = width - 1
                acc += kernel[t] * plane[y, xx]
            tmp[y, x] = acc
    out = np.zeros_like(plane)
    for y in range(height):
        for x in range(width):
            acc = np.float32(0.0)
            for t in range(len(kernel)):
                yy = y + t - radius
                if yy < 0:
                    yy = 0
                elif yy >= height:
                    yy = height - 1
                acc += kernel[t] * tmp[yy, x]
            out[y, x] = acc
    return out


# ---------------------------------------------------------------------------
# Glass blur (seeded pixel displacement)

def glass_shuffle_numpy(img, dy, dx):
    """Each output pixel copies the input pixel at its precomputed offset.

    dy/dx are per-pixel integer displacements; coordinates are clamped to
    the image bounds.
    """
    height, width = img.shape[:2]
    ys = np.clip(np.arange(height)[:, None] + dy, 0, height - 1)
    xs = np.clip(np.arange(width)[None, :] + dx, 0, width - 1)
    return img[ys, xs]


def _glass_shuffle_loop(img, dy, dx):
    height, width, channels = img.shape
    out = np.empty_like(img)
    for y in range(height):
        for x in range(width):
            yy = y + dy[y, x]
            xx = x + dx[y, x]
            if yy < 0:
                yy = 0
            elif yy >= height:
                yy = height - 1
            if xx < 0:
                xx = 0
            elif xx >= width:
                xx = width - 1
            for c in range(channels):
                out[y, x, c] = img[yy, xx, c]
    return out


# ---------------------------------------------------------------------------
# Gaussian blob compositing

def composite_blobs_numpy(img, xs, ys, radii, alphas, color, sharpness):
    """Over-composite Gaussian blobs onto img, in order.

    Each blob contributes weight alpha*exp(-0.5*sharpness*d^2/r^2), so the
    peak weight is exactly alpha. img is modified in place and returned.
    """
    height, width = img.shape[:2]
    sharp = np.float32(sharpness)
    for i in range(len(xs)):
        r = radii[i]
        wr = int(math.ceil(3.0 * r))
        x0 = max(int(xs[i]) - wr, 0)
        x1 = min(int(xs[i]) + wr + 1, width)
        y0 = max(int(ys[i]) - wr, 0)
        y1 = min(int(ys[i]) + wr + 1, height)
        if x0 >= x1 or y0 >= y1:
            continue
        gy = (np.arange(y0, y1, dtype=np.float32) - ys[i]) ** 2
        gx = (np.arange(x0, x1, dtype=np.float32) - xs[i]) ** 2
        d2 = gy[:, None] + gx[None, :]
        w = alphas[i] * np.exp(np.float32(-0.5) * sharp * d2 / np.float32(r * r))
        patch = img[y0:y1, x0:x1]
        patch += w[:, :, None] * (color[None, None, :] - patch)
    return img


def _composite_blobs_loop(img, xs, ys, radii, alphas, color, sharpness):
    height, width, channels = img.shape
    sharp = np.float32(sharpness)
    for i in range(len(xs)):
        r = radii[i]
        wr = int(math.ceil(3.0 * r))
        cx = int(xs[i])
        cy = int(ys[i])
        x0 = max(cx - wr, 0)
        x1 = min(cx + wr + 1, width)
        y0 = max(cy - wr, 0)
        y1 = min(cy + wr + 1, height)
        inv = np.float32(1.0) / np.float32(r * r)
        for y in range(y0, y1):
            dy2 = (np.float32(y) - ys[i]) ** 2
            for x in range(x0, x1):
                dx2 = (np.float32(x) - xs[i]) ** 2
                w = alphas[i] * np.exp(np.float32(-0.5) * sharp * (dy2 + dx2) * inv)
                for c in range(channels):
                    img[y, x, c] += w * (color[c] - img[y, x, c])
    return img


# ---------------------------------------------------------------------------
# Line streak rasterization

def draw_lines_numpy(img, x0s, y0s, x1s, y1s, alphas, color):
    # Small element counts; a python loop over segments is the reference.
    return _draw_lines_loop_impl(img, x0s, y0s, x1s, y1s, alphas, color)


def _draw_lines_loop_impl(img, x0s, y0s, x1s, y1s, alphas, color):
    height, width, channels = img.shape
    for i in range(len(x0s)):
        dx = x1s[i] - x0s[i]
        dy = y1s[i] - y0s[i]
        steps = int(max(abs(dx), abs(dy))) + 1
        px = -1
        py = -1
        for s in range(steps + 1):
            t = np.float32(s) / np.float32(steps)
            x = int(round(x0s[i] + t * dx))
            y = int(round(y0s[i] + t * dy))
            if x == px and y == py:
                continue
            px = x
            py = y
            if x < 0 or x >= width or y < 0 or y >= height:
                continue
            for c in range(channels):
                img[y, x, c] += alphas[i] * (color[c] - img[y, x, c])
    return img


# ---------------------------------------------------------------------------
# Dispatch

if NUMBA_AVAILABLE:
    _convolve_sep2d_jit = njit(cache=True)(_convolve_sep2d_loop)
    _glass_shuffle_jit = njit(cache=True)(_glass_shuffle_loop)
    _composite_blobs_jit = njit(cache=True)(_composite_blobs_loop)
    _draw_lines_jit = njit(cache=True)(_draw_lines_loop_impl)

    convolve_sep2d = _convolve_sep2d_jit
    glass_shuffle = _glass_shuffle_jit
    composite_blobs = _composite_blobs_jit
    draw_lines = _draw_lines_jit
else:
    convolve_sep2d = convolve_sep2d_numpy
    glass_shuffle = glass_shuffle_numpy
    composite_blobs = composite_blobs_numpy
    draw_lines = draw_lines_numpy
