"""Dataset annotation statistics: object sizes and category frequencies.

Ingests COCO-style detection JSON (images / annotations / categories).
Object size is summarized by equivalent radius, the radius of the circle
matching the object's pixel area; bucket thresholds follow the COCO
small/medium/large convention (areas 32^2 and 96^2).
"""

import csv
import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass

COCO_SMALL_MAX_AREA = 32.0**2
COCO_MEDIUM_MAX_AREA = 96.0**2


@dataclass
class Annotation:
    image_id: int
    condition: str
    category_id: int
    area: float

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError(f"annotation area must be > 0, got {self.area}")


def equivalent_radius(area):
    """Radius of the circle with the given area: sqrt(area/pi)."""
    if area < 0:
        raise ValueError(f"area must be >= 0, got {area}")
    return math.sqrt(area / math.pi)


def load_coco_annotations(path, default_condition="unknown"):
    """Read a COCO detection file into Annotation records.

    The per-image condition tag is read from an optional "condition"
    field on each image entry. Area comes from the annotation's "area"
    field, falling back to bbox w*h.
    """
    with open(path) as fh:
        doc = json.load(fh)
    conditions = {
        img["id"]: img.get("condition", default_condition)
        for img in doc.get("images", [])
    }
    out = []
    for ann in doc["annotations"]:
        area = ann.get("area")
        if area is None:
            _, _, w, h = ann["bbox"]
            area = w * h
        out.append(
            Annotation(
                image_id=ann["image_id"],
                condition=conditions.get(ann["image_id"], default_condition),
                category_id=ann["category_id"],
                area=float(area),
            )
        )
    return out


def coco_bucket(area):
    if area < COCO_SMALL_MAX_AREA:
        return "small"
    if area < COCO_MEDIUM_MAX_AREA:
        return "medium"
    return "large"


def size_histogram(annotations, bucket_edges=None):
    """Per-condition equivalent-radius histogram plus COCO bucket counts.

    bucket_edges are radius bin edges; the default is 20 linear bins up
    to the largest radius present.
    """
    if not annotations:
        raise ValueError("annotation list is empty")
    radii = [equivalent_radius(a.area) for a in annotations]
    if bucket_edges is None:
        top = max(radii) or 1.0
        bucket_edges = [top * i / 20.0 for i in range(21)]

    by_condition = defaultdict(lambda: {
        "bins": [0] * (len(bucket_edges) - 1),
        "coco": Counter({"small": 0, "medium": 0, "large": 0}),
    })
    for ann, r in zip(annotations, radii):
        row = by_condition[ann.condition]
        row["coco"][coco_bucket(ann.area)] += 1
        for b in range(len(bucket_edges) - 1):
            last = b == len(bucket_edges) - 2
            if bucket_edges[b] <= r < bucket_edges[b + 1] or (last and r >= bucket_edges[b + 1]):
                row["bins"][b] += 1
                break
    return {"edges": list(bucket_edges), "conditions": dict(by_condition)}


def category_distribution(annotations):
    """Normalized per-condition category frequencies (rows sum to 1)."""
    if not annotations:
        raise ValueError("annotation list is empty")
    counts = defaultdict(Counter)
    for ann in annotations:
        counts[ann.condition][ann.category_id] += 1
    out = {}
    for condition, counter in counts.items():
        total = sum(counter.values())
        out[condition] = {cat: n / total for cat, n in sorted(counter.items())}
    return out


def write_size_csv(path, histogram):
    edges = histogram["edges"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["condition"]
            + [f"r_{edges[i]:.2f}_{edges[i+1]:.2f}" for i in range(len(edges) - 1)]
            + ["small", "medium", "large"]
        )
        for condition, row in sorted(histogram["conditions"].items()):
            writer.writerow(
                [condition] + row["bins"]
                + [row["coco"]["small"], row["coco"]["medium"], row["coco"]["large"]]
            )


def write_category_csv(path, distribution):
    categories = sorted({c for freqs in distribution.values() for c in freqs})
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["condition"] + [f"cat_{c}" for c in categories])
        for condition, freqs in sorted(distribution.items()):
            writer.writerow([condition] + [f"{freqs.get(c, 0.0):.6f}" for c in categories])


def write_size_svg(path, histogram):
    """Render the per-condition radius histogram to SVG (needs matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    edges = histogram["edges"]
    centers = [(edges[i] + edges[i + 1]) / 2.0 for i in range(len(edges) - 1)]
    fig, ax = plt.subplots(figsize=(8, 4))
    for condition, row in sorted(histogram["conditions"].items()):
        ax.plot(centers, row["bins"], label=condition)
    for area in (COCO_SMALL_MAX_AREA, COCO_MEDIUM_MAX_AREA):
        ax.axvline(equivalent_radius(area), color="red", linestyle="--", linewidth=0.8)
    ax.set_xlabel("equivalent radius [px]")
    ax.set_ylabel("count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
