"""Raster IO, sRGB<->CIELAB conversion, and Gaussian smoothing.

Color images are float32 HxWx3 arrays in [0,1]; single-plane maps
(labels, instances, depth, blend weights) are 2D arrays. Quantization to
8 bits happens only at file write. Lab math runs in float64 so channel
statistics downstream stay accurate.
"""

import numpy as np
from PIL import Image

from . import kernels

# sRGB primaries with D65 white point
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_SRGB = np.linalg.inv(_SRGB_TO_XYZ)
_D65_WHITE = np.array([0.95047, 1.0, 1.08883])

# Rec. 709 luma coefficients, applied to the stored (gamma-encoded) samples
LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722], dtype=np.float32)


def to_uint8(img):
    """Quantize a [0,1] float raster to 8 bits (round half away handled by np.rint)."""
    return np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def from_uint8(arr):
    return arr.astype(np.float32) / np.float32(255.0)


def load_rgb(path):
    """Load an 8-bit RGB PNG as float32 HxWx3 in [0,1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"))
    return from_uint8(arr)


def save_rgb(path, img):
    Image.fromarray(to_uint8(img), mode="RGB").save(path)


def load_plane(path):
    """Load a single-plane PNG (8 or 16 bit) as a 2D array, native dtype."""
    with Image.open(path) as im:
        arr = np.asarray(im)
    if arr.ndim != 2:
        raise ValueError(f"expected single-plane image, got shape {arr.shape}: {path}")
    return arr.copy()


def save_plane8(path, plane):
    Image.fromarray(plane.astype(np.uint8), mode="L").save(path)


def save_plane16(path, plane):
    Image.fromarray(plane.astype(np.uint16)).save(path)


def luma(img):
    """Rec. 709 luma of an RGB raster (on the stored samples)."""
    return img @ LUMA_WEIGHTS


def srgb_to_linear(v):
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(v):
    v = np.asarray(v, dtype=np.float64)
    v = np.clip(v, 0.0, None)
    return np.where(v <= 0.0031308, v * 12.92, 1.055 * v ** (1.0 / 2.4) - 0.055)


def _lab_f(t):
    delta = 6.0 / 29.0
    return np.where(t > delta**3, np.cbrt(t), t / (3.0 * delta**2) + 4.0 / 29.0)


def _lab_f_inv(t):
    delta = 6.0 / 29.0
    return np.where(t > delta, t**3, 3.0 * delta**2 * (t - 4.0 / 29.0))


def rgb_to_lab(img):
    """sRGB [0,1] raster -> CIE L*a*b* (D65), float64.

    L in [0,100]; a/b roughly in [-128,127]. Inverse of lab_to_rgb up to
    quantization.
    """
    linear = srgb_to_linear(img)
    xyz = linear @ _SRGB_TO_XYZ.T
    f = _lab_f(xyz / _D65_WHITE)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def lab_to_rgb(lab):
    """CIE L*a*b* (D65) -> sRGB float32 raster, clamped to [0,1]."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    xyz = np.stack([_lab_f_inv(fx), _lab_f_inv(fy), _lab_f_inv(fz)], axis=-1)
    xyz *= _D65_WHITE
    linear = xyz @ _XYZ_TO_SRGB.T
    return np.clip(linear_to_srgb(linear), 0.0, 1.0).astype(np.float32)


def gaussian_kernel1d(sigma):
    """Normalized 1D Gaussian taps truncated at radius ceil(3*sigma)."""
    radius = int(np.ceil(3.0 * sigma))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (xs / sigma) ** 2)
    return (k / k.sum()).astype(np.float32)


def gaussian_blur(arr, sigma):
    """Separable Gaussian blur with edge replication; sigma=0 is the identity."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return arr.copy()
    kernel = gaussian_kernel1d(sigma)
    arr32 = np.ascontiguousarray(arr, dtype=np.float32)
    if arr32.ndim == 2:
        return kernels.convolve_sep2d(arr32, kernel)
    if arr32.ndim == 3:
        out = np.empty_like(arr32)
        for c in range(arr32.shape[2]):
            out[:, :, c] = kernels.convolve_sep2d(
                np.ascontiguousarray(arr32[:, :, c]), kernel
            )
        return out
    raise ValueError(f"expected 2D or 3D array, got ndim={arr.ndim}")
