"""wxsynth: deterministic batch toolkit for adverse-weather synthetic driving data.

Library layout:
  imgcore    - raster IO, sRGB<->Lab conversion, Gaussian blur
  kernels    - hot pixel loops (numba-accelerated with a numpy fallback)
  blend      - class-weighted pixel-wise image blending
  colormatch - Reinhard-style statistics color transfer
  weatheraug - procedural fog / rain / snow / night recipes
  auxprep    - depth normalization, one-hot labels, instance graph coloring
  weathercfg - simulator weather parameter sampling
  manifest   - training manifest construction with real/synthetic mixing
  datastats  - annotation size and category statistics
  pipeline   - batch driver behind the `run` subcommand
"""

__version__ = "0.1.0"
