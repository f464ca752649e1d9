import itertools

import numpy as np
import pytest

from wxsynth import auxprep
from wxsynth.auxprep import (
    InstanceGraph,
    colored_instance_map,
    greedy_color,
    instance_adjacency,
    normalize_depth,
    one_hot_semseg,
)


def brute_force_chromatic(graph):
    """Smallest k admitting a proper coloring; oracle for small graphs."""
    nodes = graph.nodes
    adj = graph.adjacency()
    if not nodes:
        return 0
    for k in range(1, len(nodes) + 1):
        for assignment in itertools.product(range(k), repeat=len(nodes)):
            coloring = dict(zip(nodes, assignment))
            if all(coloring[a] != coloring[b] for a, b in graph.edges):
                return k
    return len(nodes)


def random_instance_map(rng, height=48, width=64, n_instances=20, max_size=12):
    inst = np.zeros((height, width), np.int32)
    for i in range(1, n_instances + 1):
        h = int(rng.integers(2, max_size))
        w = int(rng.integers(2, max_size))
        y = int(rng.integers(0, height - h))
        x = int(rng.integers(0, width - w))
        inst[y:y + h, x:x + w] = i
    return inst


# --- depth -----------------------------------------------------------------

def test_normalize_depth_hand_case():
    out = normalize_depth(np.array([[2.0, 4.0, 6.0]]))
    assert np.allclose(out, [[0.0, 0.5, 1.0]])


def test_normalize_depth_constant():
    assert np.all(normalize_depth(np.full((3, 3), 5.0)) == 0.0)


def test_normalize_depth_fixed_point():
    d = np.array([[0.0, 0.25], [0.5, 1.0]])
    assert np.allclose(normalize_depth(d), d)


def test_normalize_depth_all_nonfinite():
    with pytest.raises(ValueError):
        normalize_depth(np.full((2, 2), np.nan))


def test_normalize_depth_range():
    rng = np.random.default_rng(0)
    d = rng.uniform(3, 900, (20, 20))
    out = normalize_depth(d)
    assert out.min() == 0.0 and out.max() == 1.0


# --- one-hot ---------------------------------------------------------------

def test_one_hot_single_class():
    planes = one_hot_semseg(np.full((4, 5), 1), 3)
    assert planes.shape == (3, 4, 5)
    assert np.all(planes[1] == 1)
    assert np.all(planes[0] == 0) and np.all(planes[2] == 0)


def test_one_hot_partition():
    rng = np.random.default_rng(1)
    labels = rng.integers(0, 7, (10, 12))
    planes = one_hot_semseg(labels, 7)
    assert np.all(planes.sum(axis=0) == 1)


def test_one_hot_checkerboard():
    labels = np.indices((6, 6)).sum(axis=0) % 2
    planes = one_hot_semseg(labels, 2)
    assert np.array_equal(planes[0], 1 - planes[1])


def test_one_hot_out_of_range():
    with pytest.raises(ValueError):
        one_hot_semseg(np.full((2, 2), 9), 5)


# --- adjacency -------------------------------------------------------------

def test_adjacency_single_instance():
    inst = np.zeros((6, 6), int)
    inst[1:3, 1:3] = 5
    g = instance_adjacency(inst)
    assert g.nodes == [5] and g.edges == []


def test_adjacency_separated_instances():
    inst = np.zeros((6, 6), int)
    inst[0, 0] = 1
    inst[5, 5] = 2
    g = instance_adjacency(inst)
    assert g.nodes == [1, 2] and g.edges == []


def test_adjacency_touching_rectangles():
    inst = np.zeros((6, 8), int)
    inst[1:4, 1:4] = 1
    inst[1:4, 4:7] = 2
    g = instance_adjacency(inst)
    assert g.edges == [(1, 2)]


def test_adjacency_diagonal_not_connected():
    inst = np.zeros((4, 4), int)
    inst[0, 0] = 1
    inst[1, 1] = 2  # touches only diagonally
    assert instance_adjacency(inst).edges == []


# --- coloring --------------------------------------------------------------

def test_greedy_edgeless():
    g = InstanceGraph(nodes=[3, 7, 9], edges=[])
    assert greedy_color(g) == {3: 0, 7: 0, 9: 0}


def test_greedy_triangle():
    g = InstanceGraph(nodes=[1, 2, 3], edges=[(1, 2), (1, 3), (2, 3)])
    colors = greedy_color(g)
    assert sorted(colors.values()) == [0, 1, 2]


def test_greedy_path_matches_chromatic_oracle():
    g = InstanceGraph(nodes=[1, 2, 3, 4, 5],
                      edges=[(1, 2), (2, 3), (3, 4), (4, 5)])
    colors = greedy_color(g)
    assert max(colors.values()) + 1 == brute_force_chromatic(g) == 2


def test_greedy_proper_and_bounded_random():
    rng = np.random.default_rng(2)
    for _ in range(100):
        inst = random_instance_map(rng, n_instances=int(rng.integers(1, 40)))
        g = instance_adjacency(inst)
        colors = greedy_color(g)
        for a, b in g.edges:
            assert colors[a] != colors[b]
        if g.nodes:
            adj = g.adjacency()
            max_deg = max(len(adj[n]) for n in g.nodes)
            assert max(colors.values()) + 1 <= max_deg + 1


def test_greedy_unknown_order():
    with pytest.raises(ValueError):
        greedy_color(InstanceGraph(nodes=[1], edges=[]), order="random")


def test_colored_map_all_background():
    out = colored_instance_map(np.zeros((5, 5), int))
    assert np.all(out == 255)


def test_colored_map_single_instance():
    inst = np.zeros((5, 5), int)
    inst[1:3, 1:3] = 9
    out = colored_instance_map(inst)
    assert np.all(out[1:3, 1:3] == 0)
    assert np.all(out[0, :] == 255)


def test_colored_map_proper_coloring_random():
    rng = np.random.default_rng(3)
    for _ in range(30):
        inst = random_instance_map(rng, n_instances=25)
        out = colored_instance_map(inst)
        g = instance_adjacency(inst)
        for a, b in g.edges:
            ca = np.unique(out[inst == a])
            cb = np.unique(out[inst == b])
            assert len(ca) == 1 and len(cb) == 1 and ca[0] != cb[0]


def test_greedy_handles_clique():
    g = InstanceGraph(nodes=list(range(1, 6)),
                      edges=[(a, b) for a in range(1, 6) for b in range(a + 1, 6)])
    colors = greedy_color(g)
    assert max(colors.values()) + 1 == 5 == brute_force_chromatic(g)


def test_colored_map_warns_above_cap():
    # adjacent stripes 1|2|3 need 2 colors; cap at 1 to trigger the warning
    inst = np.tile(np.arange(1, 4), (2, 1))
    with pytest.warns(UserWarning, match="colors"):
        auxprep.colored_instance_map(inst, max_colors=1)
