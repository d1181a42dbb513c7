"""Growing finite tree models of a generalised Wazewski dendrite.

The dendrite with branch orders S is approximated by a finite tree whose
vertices carry target orders from {1, 2} ∪ S.  Edges stand for arcs of
the dendrite, so any edge may be subdivided by a vertex of any order in
{2} ∪ S at any time, and a vertex of order n may grow new branches until
its degree reaches n.  These two moves (insert_on_edge, sprout) are the
only mutations; they are appended to a growth log so that a model is
reproducible bit-exactly by replaying the log from its seed.
"""

from __future__ import annotations

import random

from .labels import (
    END,
    REGULAR,
    Signature,
    derive_seed,
    label_to_json,
    label_token,
    parse_label,
)
from .labelled_trees import LabelledTree


class ModelVertex:
    """A model vertex: an id and the order it represents in the dendrite."""

    __slots__ = ("id", "target")

    def __init__(self, vid, target):
        self.id = vid
        self.target = target

    def __repr__(self):
        return f"ModelVertex({self.id}, {label_token(self.target)})"


class DendriteModel:
    """Finite tree approximation of the dendrite with signature `sig`.

    Use :func:`new_model` to construct one.  Mutations require exclusive
    access (single writer); read-only queries may run concurrently
    between mutations.
    """

    def __init__(self, sig: Signature, seed: int):
        self.sig = sig
        self.seed = seed
        self._vertices = {}
        self._adj = {}
        self._log = []
        self._next_id = 0

    # -- construction helpers (not logged) -----------------------------

    def _add_vertex(self, target) -> int:
        vid = self._next_id
        self._next_id += 1
        self._vertices[vid] = ModelVertex(vid, target)
        self._adj[vid] = []
        return vid

    # -- basic queries --------------------------------------------------

    def vertices(self) -> list:
        return sorted(self._vertices)

    def has_vertex(self, v) -> bool:
        return v in self._vertices

    def target(self, v):
        return self._vertices[v].target

    def degree(self, v) -> int:
        return len(self._adj[v])

    def neighbors(self, v) -> list:
        return list(self._adj[v])

    def edges(self) -> list:
        """All edges as sorted (u, v) pairs with u < v, sorted."""
        out = []
        for u, ns in self._adj.items():
            for v in ns:
                if u < v:
                    out.append((u, v))
        return sorted(out)

    def vertex_count(self) -> int:
        return len(self._vertices)

    def vertices_with_target(self, label) -> list:
        return sorted(v for v, rec in self._vertices.items() if rec.target == label)

    def growth_log(self) -> list:
        return list(self._log)

    def is_saturated(self, v) -> bool:
        return self.degree(v) >= self.target(v)

    def check_tree_invariant(self):
        """Raise if the model is not a tree or a degree exceeds its target."""
        vs = self.vertices()
        if not vs:
            raise AssertionError("empty model")
        nedges = sum(len(ns) for ns in self._adj.values()) // 2
        if nedges != len(vs) - 1:
            raise AssertionError(f"|E| = {nedges} != |V| - 1 = {len(vs) - 1}")
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(vs):
            raise AssertionError("model is disconnected")
        for v in vs:
            if self.degree(v) > self.target(v):
                raise AssertionError(f"vertex {v}: degree {self.degree(v)} > target {label_token(self.target(v))}")

    def _require_vertex(self, v):
        if v not in self._vertices:
            raise KeyError(f"unknown vertex id {v!r}")

    # -- the two extension moves -----------------------------------------

    def insert_on_edge(self, edge, label) -> int:
        """Subdivide an edge by a new vertex of the given target order.

        Only orders in {2} ∪ S may appear in the interior of an arc; in
        particular an end (order 1) is never inserted.
        """
        u, v = edge
        self._require_vertex(u)
        self._require_vertex(v)
        if v not in self._adj[u]:
            raise ValueError(f"({u},{v}) is not an edge")
        if label == END or not self.sig.admits(label):
            raise ValueError(
                f"cannot insert label {label_token(label)}: arc-interior labels are {{2}} ∪ {{{self.sig.token()}}}"
            )
        w = self._add_vertex(label)
        iu = self._adj[u].index(v)
        iv = self._adj[v].index(u)
        self._adj[u][iu] = w
        self._adj[v][iv] = w
        self._adj[w] = [u, v]
        self._log.append(("insert", u, v, label))
        return w

    def sprout(self, at, label) -> int:
        """Attach a new leaf of the given target order at an unsaturated vertex."""
        self._require_vertex(at)
        if not self.sig.admits(label):
            raise ValueError(f"label {label_token(label)} not in {{1,2}} ∪ {{{self.sig.token()}}}")
        if self.is_saturated(at):
            raise ValueError(
                f"vertex {at} is saturated (degree {self.degree(at)} = target {label_token(self.target(at))})"
            )
        w = self._add_vertex(label)
        self._adj[at].append(w)
        self._adj[w] = [at]
        self._log.append(("sprout", at, label))
        return w

    # -- tree geometry ----------------------------------------------------

    def arc(self, x, y) -> list:
        """The unique simple path from x to y, inclusive."""
        self._require_vertex(x)
        self._require_vertex(y)
        if x == y:
            return [x]
        parent = {x: None}
        stack = [x]
        while stack:
            u = stack.pop()
            if u == y:
                break
            for w in self._adj[u]:
                if w not in parent:
                    parent[w] = u
                    stack.append(w)
        path = [y]
        while path[-1] != x:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def first_point(self, x, Y) -> int:
        """Nearest-point retraction of x onto a nonempty connected vertex set Y."""
        yset = set(Y)
        if not yset:
            raise ValueError("Y is empty")
        for v in yset:
            self._require_vertex(v)
        self._require_vertex(x)
        start = next(iter(yset))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w in yset and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != yset:
            raise ValueError("Y is not connected")
        if x in yset:
            return x
        for v in self.arc(x, min(yset)):
            if v in yset:
                return v
        raise AssertionError("unreachable: tree is connected")

    def median(self, x, y, z) -> int:
        """The unique common vertex of the three pairwise arcs."""
        common = set(self.arc(x, y)) & set(self.arc(y, z)) & set(self.arc(x, z))
        assert len(common) == 1
        return common.pop()

    def entourage_related(self, x, y, F) -> bool:
        """True iff the arc from x to y meets F in at most one vertex.

        These relations, over finite F, generate the unique uniform
        structure of the dendrite.
        """
        return len(set(self.arc(x, y)) & set(F)) <= 1

    def separate(self, x, y) -> int:
        """A vertex whose removal puts x and y in different components.

        If the arc from x to y has no interior vertex, the edge is first
        subdivided by a regular point.  Tie-break: the interior vertex
        nearest to x.
        """
        if x == y:
            raise ValueError("cannot separate a vertex from itself")
        path = self.arc(x, y)
        if len(path) > 2:
            return path[1]
        return self.insert_on_edge((x, y), REGULAR)

    # -- configuration types ----------------------------------------------

    def steiner_vertices(self, vertex_set) -> set:
        """Vertices of the minimal subtree spanning the given set."""
        vs = list(vertex_set)
        base = vs[0]
        span = {base}
        for v in vs[1:]:
            span.update(self.arc(base, v))
        return span

    def configuration(self, coords):
        """The labelled-tree type of a tuple, with its vertex assignment.

        Returns (tree, node_of) where node_of maps each tree vertex to
        the model vertex it stands for.  The tree keeps the tuple's
        vertices plus every branch vertex of the spanned subtree;
        unmarked degree-2 vertices of the subtree are suppressed.
        """
        coords = list(coords)
        if not coords:
            raise ValueError("empty tuple")
        for v in coords:
            self._require_vertex(v)
        markset = set(coords)
        span = self.steiner_vertices(markset)
        sadj = {v: [w for w in self._adj[v] if w in span] for v in span}
        retained = sorted(v for v in span if v in markset or len(sadj[v]) >= 3)
        new_id = {v: i for i, v in enumerate(retained)}
        edges = []
        for r in retained:
            for first in sadj[r]:
                prev, cur = r, first
                while cur not in new_id:
                    nxt = [w for w in sadj[cur] if w != prev]
                    assert len(nxt) == 1
                    prev, cur = cur, nxt[0]
                if r < cur:
                    edges.append((new_id[r], new_id[cur]))
        label = {new_id[v]: self.target(v) for v in retained}
        marks = [new_id[v] for v in coords]
        tree = LabelledTree(range(len(retained)), edges, label, marks)
        node_of = {i: v for v, i in new_id.items()}
        return tree, node_of

    def configuration_type(self, coords) -> LabelledTree:
        """The labelled-tree type of a tuple of model vertices."""
        return self.configuration(coords)[0]

    # -- realizing a prescribed type ---------------------------------------

    def realize_type(self, tree: LabelledTree) -> dict:
        """Extend the model so it contains a tuple of the given type.

        Returns {coordinate index: model vertex id}.  The image is grown
        as a fresh copy: a root placed on a subdivided edge, children
        sprouted while capacity lasts and otherwise routed through an
        unused edge direction, with order-min(S) relay vertices carrying
        end points that cannot be inserted into an arc.
        """
        from .labelled_trees import validate

        report = validate(tree, self.sig)
        if not report.ok:
            raise ValueError(f"type is not valid for this signature: {report.violations}")
        if not tree.marks:
            raise ValueError("type has no marks")
        relay_label = self.sig.min_branch_order

        host_u, host_v = self.edges()[0]
        root = tree.marks[0]
        image = {}
        hub = {}
        used = {}

        def claim(vertex, direction):
            used.setdefault(vertex, set()).add(direction)

        def place_off(at_vertex, label):
            """New vertex of the given order behind a clean direction of at_vertex."""
            if not self.is_saturated(at_vertex):
                w = self.sprout(at_vertex, label)
                claim(at_vertex, w)
                claim(w, at_vertex)
                return w
            free = [n for n in self._adj[at_vertex] if n not in used.get(at_vertex, set())]
            gate = free[0]
            if label == END:
                relay = self.insert_on_edge((at_vertex, gate), relay_label)
                claim(at_vertex, relay)
                w = self.sprout(relay, END)
                claim(relay, at_vertex)
                claim(relay, w)
                claim(w, relay)
                return w
            w = self.insert_on_edge((at_vertex, gate), label)
            claim(at_vertex, w)
            claim(w, at_vertex)
            return w

        if tree.label[root] == END:
            relay = self.insert_on_edge((host_u, host_v), relay_label)
            rv = self.sprout(relay, END)
            claim(relay, rv)
            claim(rv, relay)
            image[root] = rv
            hub[root] = relay
        else:
            rv = self.insert_on_edge((host_u, host_v), tree.label[root])
            image[root] = rv
            hub[root] = rv

        stack = [(root, None)]
        while stack:
            v, parent = stack.pop()
            for c in sorted(tree.neighbors(v), reverse=True):
                if c == parent:
                    continue
                iv = image[v]
                if not self.is_saturated(iv):
                    anchor = iv
                else:
                    anchor = hub[v]
                ic = place_off(anchor, tree.label[c])
                image[c] = ic
                hub[c] = self._adj[ic][-1] if tree.label[c] == END else ic
                stack.append((c, v))

        return {i: image[m] for i, m in enumerate(tree.marks)}

    # -- scheduled growth ---------------------------------------------------

    def saturate(self, budget: int) -> "DendriteModel":
        """Grow deterministically until the vertex budget is reached.

        First every current edge is subdivided once by each insertable
        order, then every unsaturated vertex receives an end sprout,
        then seeded random moves fill the remaining budget.  A budget at
        or below the current size leaves the model unchanged.
        """
        if self.vertex_count() >= budget:
            return self
        for u, v in self.edges():
            far = v
            for label in self.sig.insertable_labels():
                if self.vertex_count() >= budget:
                    return self
                far = self.insert_on_edge((u, far), label)
        for v in self.vertices():
            if self.vertex_count() >= budget:
                return self
            if not self.is_saturated(v):
                self.sprout(v, END)
        rng = random.Random(derive_seed(self.seed, "saturate", len(self._log)))
        labels = (END,) + self.sig.insertable_labels()
        while self.vertex_count() < budget:
            if rng.random() < 0.5:
                u, v = rng.choice(self.edges())
                self.insert_on_edge((u, v), rng.choice(self.sig.insertable_labels()))
            else:
                open_vs = [v for v in self.vertices() if not self.is_saturated(v)]
                if not open_vs:
                    continue
                self.sprout(rng.choice(open_vs), rng.choice(labels))
        return self

    def grow_random(self, steps: int, seed=None) -> "DendriteModel":
        """Apply `steps` seeded random extension moves."""
        rng = random.Random(derive_seed(self.seed if seed is None else seed, "grow", len(self._log)))
        labels = (END,) + self.sig.insertable_labels()
        for _ in range(steps):
            if rng.random() < 0.5:
                u, v = rng.choice(self.edges())
                self.insert_on_edge((u, v), rng.choice(self.sig.insertable_labels()))
            else:
                open_vs = [v for v in self.vertices() if not self.is_saturated(v)]
                if not open_vs:
                    u, v = rng.choice(self.edges())
                    self.insert_on_edge((u, v), rng.choice(self.sig.insertable_labels()))
                    continue
                self.sprout(rng.choice(open_vs), rng.choice(labels))
        return self

    # -- persistence ----------------------------------------------------------

    def to_json_obj(self) -> dict:
        steps = []
        for step in self._log:
            if step[0] == "insert":
                _, u, v, label = step
                steps.append({"op": "insert", "edge": [u, v], "label": label_to_json(label)})
            else:
                _, at, label = step
                steps.append({"op": "sprout", "at": at, "label": label_to_json(label)})
        return {"signature": self.sig.to_json(), "seed": self.seed, "log": steps}

    @classmethod
    def from_json_obj(cls, obj) -> "DendriteModel":
        sig = Signature(parse_label(l) for l in obj["signature"])
        model = new_model(sig, obj["seed"])
        for step in obj["log"]:
            if step["op"] == "insert":
                u, v = step["edge"]
                model.insert_on_edge((u, v), parse_label(step["label"]))
            elif step["op"] == "sprout":
                model.sprout(step["at"], parse_label(step["label"]))
            else:
                raise ValueError(f"unknown growth step {step!r}")
        return model

    def replay(self) -> "DendriteModel":
        """Rebuild a copy of this model from its seed and growth log."""
        return DendriteModel.from_json_obj(self.to_json_obj())

    def to_dot(self) -> str:
        lines = ["graph model {"]
        for v in self.vertices():
            lines.append(f'  n{v} [label="{v}:{label_token(self.target(v))}"];')
        for u, v in self.edges():
            lines.append(f"  n{u} -- n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def new_model(sig: Signature, seed: int = 0) -> DendriteModel:
    """The minimal model: one branch point of order min(S) with three ends."""
    model = DendriteModel(sig, seed)
    center = model._add_vertex(sig.min_branch_order)
    for _ in range(3):
        leaf = model._add_vertex(END)
        model._adj[center].append(leaf)
        model._adj[leaf] = [center]
    return model
