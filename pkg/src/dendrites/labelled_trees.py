"""Labelled-tree invariants of finite point configurations in a dendrite.

A finite tuple of points spans a finite topological tree inside the
dendrite.  Its invariant is a finite tree whose vertices are the tuple
points together with the branch points of the spanned tree, each vertex
carrying its order in the ambient dendrite, and with the tuple recorded
as an ordered list of marks (coordinates may repeat).  Two tuples lie in
the same homeomorphism-group orbit exactly when their invariants agree,
which this module decides through a canonical code.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from .labels import Signature, is_label, label_to_json, label_token, parse_label


class LabelledTree:
    """A finite vertex-labelled tree with an ordered list of marked vertices.

    The constructor checks only well-formedness (ids consistent, no
    loops or duplicate edges); the semantic invariants against a
    signature are checked by :func:`validate`, which reports violations
    as data rather than raising.
    """

    __slots__ = ("vertices", "edges", "label", "marks", "_adj")

    def __init__(self, vertices, edges, label, marks):
        self.vertices = tuple(sorted(vertices))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        norm_edges = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u},{v}) references unknown vertex")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm_edges.append(key)
        self.edges = tuple(sorted(norm_edges))
        label = dict(label)
        if set(label) != vset:
            raise ValueError("labels must cover exactly the vertex set")
        for v, l in label.items():
            if not is_label(l):
                raise ValueError(f"vertex {v} has invalid label {l!r}")
        self.label = label
        self.marks = tuple(marks)
        for m in self.marks:
            if m not in vset:
                raise ValueError(f"mark {m} is not a vertex")
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def neighbors(self, v) -> tuple:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def mark_positions(self, v) -> tuple:
        """Coordinate indices naming vertex v (empty if unmarked)."""
        return tuple(i for i, m in enumerate(self.marks) if m == v)

    def is_tree(self) -> bool:
        """Connected with |E| = |V| - 1."""
        if not self.vertices:
            return False
        if len(self.edges) != len(self.vertices) - 1:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def __repr__(self):
        labels = ",".join(f"{v}:{label_token(self.label[v])}" for v in self.vertices)
        return f"LabelledTree(({labels}), edges={list(self.edges)}, marks={list(self.marks)})"

    # -- serialization ------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "vertices": [{"id": v, "label": label_to_json(self.label[v])} for v in self.vertices],
            "edges": [[u, v] for u, v in self.edges],
            "marks": list(self.marks),
        }

    @classmethod
    def from_json_obj(cls, obj) -> "LabelledTree":
        vertices = [rec["id"] for rec in obj["vertices"]]
        label = {rec["id"]: parse_label(rec["label"]) for rec in obj["vertices"]}
        return cls(vertices, [tuple(e) for e in obj["edges"]], label, obj["marks"])

    def to_dot(self) -> str:
        """Render as an undirected DOT graph; node text is "id:label" with
        "(#i)" suffixes for mark coordinates."""
        lines = ["graph configuration {"]
        for v in self.vertices:
            text = f"{v}:{label_token(self.label[v])}"
            for i in self.mark_positions(v):
                text += f" (#{i})"
            lines.append(f'  n{v} [label="{text}"];')
        for u, v in self.edges:
            lines.append(f"  n{u} -- n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: object  # offending vertex id, or None for global rules
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(tree: LabelledTree, sig: Signature) -> ValidationReport:
    """Check the configuration-tree invariants against a signature.

    Violations are data: each failed rule is reported with the
    offending vertex.  The rules are: the graph is a tree; unmarked
    vertices have degree >= 3; no label is below the vertex degree; and
    every label lies in {1, 2} or the signature.
    """
    violations = []
    if not tree.is_tree():
        violations.append(Violation("not-a-tree", None, "graph is not connected with |E| = |V| - 1"))
    marked = set(tree.marks)
    for v in tree.vertices:
        deg = tree.degree(v)
        lab = tree.label[v]
        if deg <= 2 and v not in marked:
            violations.append(Violation("unmarked-low-degree", v, f"unmarked vertex of degree {deg}"))
        if lab < deg:
            violations.append(
                Violation("label-below-degree", v, f"label {label_token(lab)} < degree {deg}")
            )
        if not sig.admits(lab):
            violations.append(
                Violation("label-outside-signature", v, f"label {label_token(lab)} not in {{1,2}} ∪ {{{sig.token()}}}")
            )
    return ValidationReport(tuple(violations))


# -- canonical codes ---------------------------------------------------


def rooted_code(tree: LabelledTree, root, parent=None, with_marks: bool = True) -> bytes:
    """Canonical code of the subtree of `root` away from `parent`.

    Classic bottom-up canonization: a vertex code combines its label,
    its mark coordinates (when with_marks) and the sorted codes of its
    children, so equal codes characterize rooted isomorphism.
    """
    children = [w for w in tree.neighbors(root) if w != parent]
    child_codes = sorted(rooted_code(tree, w, root, with_marks) for w in children)
    head = label_token(tree.label[root])
    if with_marks:
        head += "|" + ",".join(str(i) for i in tree.mark_positions(root))
    return b"(" + head.encode() + b"".join(child_codes) + b")"


def canonical_code(tree: LabelledTree) -> bytes:
    """Complete invariant of a marked labelled tree.

    Two trees get equal codes iff some label-preserving isomorphism
    sends the i-th mark to the i-th mark for every i.  The tree is
    rooted at the first mark, which pins any isomorphism, so plain
    sorted-children canonization is complete.  Deterministic across
    runs and platforms.
    """
    if not tree.marks:
        raise ValueError("canonical_code is undefined for a tree without marks")
    return rooted_code(tree, tree.marks[0])


def is_isomorphic(t1: LabelledTree, t2: LabelledTree) -> bool:
    """True iff the trees have a mark- and label-preserving isomorphism."""
    return canonical_code(t1) == canonical_code(t2)


def canonical_vertex_map(t1: LabelledTree, t2: LabelledTree):
    """One mark- and label-preserving isomorphism t1 -> t2, or None.

    When several isomorphisms exist the returned one is deterministic:
    children with equal codes are paired in (code, vertex id) order on
    each side.  On the vertices that are marked or forced (branch
    structure over the marks) every isomorphism agrees, so consumers
    relying on those vertices are insensitive to the tie-break.
    """
    if not t1.marks or not t2.marks:
        raise ValueError("canonical_vertex_map needs marked trees")
    if canonical_code(t1) != canonical_code(t2):
        return None

    mapping = {}

    def descend(u1, p1, u2, p2):
        mapping[u1] = u2
        kids1 = sorted(
            (w for w in t1.neighbors(u1) if w != p1),
            key=lambda w: (rooted_code(t1, w, u1), w),
        )
        kids2 = sorted(
            (w for w in t2.neighbors(u2) if w != p2),
            key=lambda w: (rooted_code(t2, w, u2), w),
        )
        for w1, w2 in zip(kids1, kids2):
            descend(w1, u1, w2, u2)

    descend(t1.marks[0], None, t2.marks[0], None)
    return mapping


# -- exhaustive enumeration of types -----------------------------------


def _prufer_trees(m: int):
    """All labelled trees on vertices 0..m-1, as edge lists."""
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        deg = [1] * m
        for x in seq:
            deg[x] += 1
        edges = []
        leaves = [v for v in range(m) if deg[v] == 1]
        heapq.heapify(leaves)
        for x in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, x))
            deg[x] -= 1
            if deg[x] == 1:
                heapq.heappush(leaves, x)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((u, v))
        yield edges


def _mark_assignments(p: int, q: int, distinct_only: bool):
    """Assignments of p coordinates onto marked vertices 0..q-1.

    Surjective so that exactly q distinct vertices are named; bijective
    when distinct_only.
    """
    if distinct_only:
        if q != p:
            return
        yield from itertools.permutations(range(q))
        return
    for assign in itertools.product(range(q), repeat=p):
        if len(set(assign)) == q:
            yield assign


def enumerate_types(p: int, sig: Signature, distinct_only: bool = False) -> list:
    """All orbit types of p-tuples, as validated labelled trees.

    The list is complete and duplicate-free by canonical code, sorted
    by code.  The search space is finite: with q distinct marked
    vertices there are at most q - 2 unmarked vertices, all of degree
    >= 3, since every leaf must be marked.
    """
    if p < 1:
        raise ValueError("arity must be >= 1")
    out = {}
    labels = sig.vertex_labels()
    qs = [p] if distinct_only else range(1, p + 1)
    for q in qs:
        for u in range(0, max(0, q - 2) + 1):
            m = q + u
            for edges in _prufer_trees(m):
                deg = {v: 0 for v in range(m)}
                for a, b in edges:
                    deg[a] += 1
                    deg[b] += 1
                # marked vertices are 0..q-1; every other labelled placement
                # of the marked set is isomorphic to one of this form.
                if any(deg[v] < 3 for v in range(q, m)):
                    continue
                allowed = [[l for l in labels if l >= deg[v]] for v in range(m)]
                if any(not a for a in allowed):
                    continue
                for assign in _mark_assignments(p, q, distinct_only):
                    marks = list(assign)
                    for labeling in itertools.product(*allowed):
                        tree = LabelledTree(range(m), edges, dict(enumerate(labeling)), marks)
                        code = canonical_code(tree)
                        if code not in out:
                            out[code] = tree
    return [out[c] for c in sorted(out)]


def census_count(p: int, sig: Signature, distinct_only: bool = False) -> int:
    """Number of orbit types of p-tuples (length of enumerate_types)."""
    return len(enumerate_types(p, sig, distinct_only))
