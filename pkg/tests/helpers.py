"""Independent oracles used by the tests.

These deliberately avoid the library's own algorithms: isomorphism by
full bijection search, paths by breadth-first search, and tree
generation by direct random attachment.
"""

import itertools
import random
from collections import deque

from dendrites.labelled_trees import LabelledTree


def brute_force_isomorphic(t1: LabelledTree, t2: LabelledTree) -> bool:
    """Mark- and label-preserving isomorphism by trying every bijection."""
    if len(t1.vertices) != len(t2.vertices) or len(t1.marks) != len(t2.marks):
        return False
    v1 = list(t1.vertices)
    e2 = set(t2.edges)
    for perm in itertools.permutations(t2.vertices):
        f = dict(zip(v1, perm))
        if any(t1.label[a] != t2.label[f[a]] for a in v1):
            continue
        if any((min(f[a], f[b]), max(f[a], f[b])) not in e2 for a, b in t1.edges):
            continue
        if any(f[t1.marks[i]] != t2.marks[i] for i in range(len(t1.marks))):
            continue
        return True
    return False


def bfs_arc(model, x, y) -> list:
    """Shortest path in the model tree by breadth-first search."""
    if x == y:
        return [x]
    parent = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in model.neighbors(u):
            if w not in parent:
                parent[w] = u
                if w == y:
                    queue.clear()
                    break
                queue.append(w)
    path = [y]
    while path[-1] != x:
        path.append(parent[path[-1]])
    return path[::-1]


def random_valid_tree(seed: int, sig, max_vertices: int = 8) -> LabelledTree:
    """A random tree satisfying the configuration invariants for sig.

    Built by random leaf attachment; labels are drawn from the
    admissible labels at or above each degree; every vertex of degree
    at most two is marked, in shuffled order with possible repeats.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_vertices)
    cap = n if float("inf") in sig.labels else max(sig.labels)
    degree = {v: 0 for v in range(n)}
    edges = []
    for i in range(1, n):
        parent = rng.choice([v for v in range(i) if degree[v] < cap])
        edges.append((i, parent))
        degree[i] += 1
        degree[parent] += 1
    labels = {}
    pool = sig.vertex_labels()
    for v in range(n):
        choices = [l for l in pool if l >= degree[v]]
        labels[v] = rng.choice(choices)
    forced = [v for v in range(n) if degree[v] <= 2]
    extras = [v for v in range(n) if rng.random() < 0.3]
    marks = forced + extras
    if not marks:
        marks = [rng.randrange(n)]
    rng.shuffle(marks)
    return LabelledTree(range(n), edges, labels, marks)
