"""Training manifest construction with real/synthetic clear-image mixing.

A manifest is an ordered entry list; building one replaces each synthetic
clear entry with probability ratio/100 by a uniformly drawn real clear
entry (with replacement). Non-clear entries are never touched and the
entry count is preserved.
"""

import dataclasses
import json
from dataclasses import dataclass, field

from .seeds import derive_rng

CONDITION_TAGS = ("clear", "fog", "rain", "snow", "night")


@dataclass
class ManifestEntry:
    image_path: str
    label_path: str
    condition: str
    origin: str  # "real" | "synthetic"
    seed: int = 0

    def __post_init__(self):
        if not self.image_path:
            raise ValueError("image path must be non-empty")
        if self.condition not in CONDITION_TAGS:
            raise ValueError(f"unknown condition tag {self.condition!r}")
        if self.origin not in ("real", "synthetic"):
            raise ValueError(f"origin must be real|synthetic, got {self.origin!r}")


@dataclass
class DatasetManifest:
    entries: list
    mix_ratio: float = 0.0

    def to_json(self):
        doc = {
            "mix_ratio": self.mix_ratio,
            "entries": [dataclasses.asdict(e) for e in self.entries],
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(
            entries=[ManifestEntry(**e) for e in doc["entries"]],
            mix_ratio=doc["mix_ratio"],
        )


def build_manifest(synthetic, real_clear, mix_ratio, seed=0, exact_count=False):
    """Mix real clear entries into a synthetic entry list.

    exact_count=True replaces exactly round(ratio/100 * n_clear) entries
    (chosen uniformly without replacement) instead of per-entry Bernoulli
    draws.
    """
    if not 0.0 <= mix_ratio <= 100.0:
        raise ValueError(f"mix ratio must be in [0,100], got {mix_ratio}")
    if mix_ratio > 0 and not real_clear:
        raise ValueError("real clear pool is empty but mix ratio > 0")

    rng = derive_rng(seed, "manifest")
    entries = list(synthetic)
    clear_idx = [
        i for i, e in enumerate(entries)
        if e.condition == "clear" and e.origin == "synthetic"
    ]
    if mix_ratio > 0 and clear_idx:
        if exact_count:
            n_replace = round(mix_ratio / 100.0 * len(clear_idx))
            chosen = rng.choice(len(clear_idx), size=n_replace, replace=False)
            replace_at = [clear_idx[int(i)] for i in chosen]
        else:
            draws = rng.random(len(clear_idx))
            replace_at = [
                idx for idx, u in zip(clear_idx, draws) if u < mix_ratio / 100.0
            ]
        for idx in replace_at:
            pick = real_clear[int(rng.integers(0, len(real_clear)))]
            entries[idx] = dataclasses.replace(pick)
    return DatasetManifest(entries=entries, mix_ratio=mix_ratio)
