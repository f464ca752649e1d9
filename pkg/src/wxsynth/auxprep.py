"""Auxiliary map preparation: depth normalization, one-hot labels, and
instance-graph greedy coloring.

Instance maps can hold anywhere from a handful to hundreds of ids; the
coloring collapses them to a small fixed palette (typically <= 5 values)
while keeping touching instances distinguishable.
"""

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class InstanceGraph:
    nodes: list
    edges: list  # unordered (a, b) pairs, a < b

    def adjacency(self):
        adj = {n: set() for n in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def normalize_depth(depth):
    """Min-max normalize to [0,1]; a constant map becomes all zeros."""
    depth = np.asarray(depth, dtype=np.float64)
    finite = np.isfinite(depth)
    if not finite.any():
        raise ValueError("depth map has no finite values")
    lo = depth[finite].min()
    hi = depth[finite].max()
    if hi == lo:
        return np.zeros_like(depth)
    out = (depth - lo) / (hi - lo)
    out[~finite] = 0.0
    return out


def one_hot_semseg(labels, class_count):
    """Expand a class-id plane to class_count binary planes (C, H, W)."""
    labels = np.asarray(labels)
    if labels.min() < 0 or labels.max() >= class_count:
        bad = int(labels.min()) if labels.min() < 0 else int(labels.max())
        raise ValueError(f"label {bad} outside [0, {class_count})")
    planes = np.zeros((class_count,) + labels.shape, dtype=np.uint8)
    for c in range(class_count):
        planes[c] = labels == c
    return planes


def instance_adjacency(inst, background=0):
    """Graph over instance ids; edge iff two ids touch 4-connectedly."""
    inst = np.asarray(inst)
    nodes = sorted(int(v) for v in np.unique(inst) if v != background)
    edges = set()
    for a, b in ((inst[:-1, :], inst[1:, :]), (inst[:, :-1], inst[:, 1:])):
        touching = (a != b) & (a != background) & (b != background)
        pairs = np.stack([a[touching], b[touching]], axis=1)
        for u, v in np.unique(pairs, axis=0):
            edges.add((min(int(u), int(v)), max(int(u), int(v))))
    return InstanceGraph(nodes=nodes, edges=sorted(edges))


def greedy_color(graph, order="degree"):
    """Smallest-available-color assignment.

    Nodes are visited in descending degree (Welsh-Powell), ties broken by
    ascending id; order="id" visits by ascending id instead.
    """
    adj = graph.adjacency()
    if order == "degree":
        ordering = sorted(graph.nodes, key=lambda n: (-len(adj[n]), n))
    elif order == "id":
        ordering = sorted(graph.nodes)
    else:
        raise ValueError(f"unknown order policy {order!r}")
    colors = {}
    for node in ordering:
        taken = {colors[nb] for nb in adj[node] if nb in colors}
        c = 0
        while c in taken:
            c += 1
        colors[node] = c
    return colors


def colored_instance_map(inst, background=0, reserved_value=255, max_colors=5):
    """Replace instance ids with greedy color indices.

    Background maps to reserved_value. Emits a warning (never an error)
    when more than max_colors distinct colors were needed.
    """
    inst = np.asarray(inst)
    graph = instance_adjacency(inst, background=background)
    colors = greedy_color(graph)
    used = max(colors.values()) + 1 if colors else 0
    if used > max_colors:
        warnings.warn(
            f"instance coloring needed {used} colors (> {max_colors})",
            stacklevel=2,
        )
    out = np.full(inst.shape, reserved_value, dtype=np.int64)
    for inst_id, color in colors.items():
        out[inst == inst_id] = color
    return out
