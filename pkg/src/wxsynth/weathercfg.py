"""Simulator weather parameter sampling and serialization.

Each condition has closed uniform sampling intervals per parameter; the
three scattering constants are shared and fixed. Snow is absent by
design: the simulator has no native snow, so snow imagery comes from the
diffusion/augmentation stages instead.
"""

import dataclasses
import json
from dataclasses import dataclass

from .seeds import derive_rng

WEATHER_CONDITIONS = ("clear", "fog", "rain", "night")

MIE_SCATTERING_SCALE = 0.03
RAYLEIGH_SCATTERING_SCALE = 0.0331
SCATTERING_INTENSITY = 1.0

# {parameter: {condition: (lo, hi)}}
PARAMETER_RANGES = {
    "cloudiness": {
        "clear": (0.0, 30.0), "fog": (10.0, 60.0),
        "rain": (30.0, 90.0), "night": (0.0, 40.0),
    },
    "dust_storm": {
        "clear": (10.0, 50.0), "fog": (0.0, 20.0),
        "rain": (0.0, 20.0), "night": (10.0, 50.0),
    },
    "fog_density": {
        "clear": (0.0, 0.1), "fog": (20.0, 40.0),
        "rain": (0.0, 7.0), "night": (5.0, 15.0),
    },
    "fog_distance": {
        "clear": (300.0, 1000.0), "fog": (7.0, 20.0),
        "rain": (6.0, 10.0), "night": (3.0, 100.0),
    },
    "fog_falloff": {
        "clear": (0.1, 0.2), "fog": (1.0, 4.0),
        "rain": (0.1, 0.5), "night": (0.1, 1.0),
    },
    "precipitation": {
        "clear": (0.0, 0.1), "fog": (0.0, 7.0),
        "rain": (60.0, 100.0), "night": (0.0, 0.1),
    },
    "precipitation_deposits": {
        "clear": (0.0, 0.1), "fog": (10.0, 30.0),
        "rain": (50.0, 90.0), "night": (0.0, 20.0),
    },
    "sun_altitude_angle": {
        "clear": (30.0, 90.0), "fog": (30.0, 90.0),
        "rain": (30.0, 90.0), "night": (-90.0, -45.0),
    },
    "sun_azimuth_angle": {
        "clear": (0.0, 360.0), "fog": (0.0, 360.0),
        "rain": (0.0, 360.0), "night": (0.0, 360.0),
    },
    "wetness": {
        "clear": (0.0, 10.0), "fog": (60.0, 100.0),
        "rain": (0.0, 40.0), "night": (0.0, 60.0),
    },
    "wind_intensity": {
        "clear": (0.0, 20.0), "fog": (0.0, 10.0),
        "rain": (30.0, 100.0), "night": (0.0, 20.0),
    },
}


@dataclass
class WeatherParams:
    cloudiness: float
    dust_storm: float
    fog_density: float
    fog_distance: float
    fog_falloff: float
    precipitation: float
    precipitation_deposits: float
    sun_altitude_angle: float
    sun_azimuth_angle: float
    wetness: float
    wind_intensity: float
    mie_scattering_scale: float = MIE_SCATTERING_SCALE
    rayleigh_scattering_scale: float = RAYLEIGH_SCATTERING_SCALE
    scattering_intensity: float = SCATTERING_INTENSITY


def sample_weather(condition, seed=0, record_index=0, rng=None):
    """Draw one parameter record for the given condition.

    Each variable field is independent uniform over its interval; the RNG
    stream is derived from (seed, record_index) for reproducible suites.
    """
    if condition not in WEATHER_CONDITIONS:
        raise ValueError(
            f"unknown condition {condition!r}, expected one of {WEATHER_CONDITIONS}"
        )
    if rng is None:
        rng = derive_rng(seed, "weather", condition, record_index)
    values = {
        name: float(rng.uniform(*ranges[condition]))
        for name, ranges in PARAMETER_RANGES.items()
    }
    return WeatherParams(**values)


def emit_config(params):
    """Serialize a record to a JSON document (snake_case keys)."""
    return json.dumps(dataclasses.asdict(params), indent=2) + "\n"


def parse_config(text):
    return WeatherParams(**json.loads(text))
