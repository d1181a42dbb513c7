"""Orbit classification and automorphism construction by back-and-forth.

Two tuples of model vertices lie in the same orbit of the dendrite's
homeomorphism group exactly when their configuration types agree.  The
converse direction is made constructive here: a partial isomorphism
matching one tuple to another extends one vertex at a time, growing the
codomain model when the required image does not exist yet.  An
automorphism of the (countable) limit structure is represented lazily
as such a growing self-matching, never as a total function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .labels import END, Signature, derive_seed
from .labelled_trees import (
    LabelledTree,
    canonical_code,
    canonical_vertex_map,
    rooted_code,
)
from .model import DendriteModel, new_model


def orbit_equal(model: DendriteModel, tuple_a, tuple_b) -> bool:
    """True iff the two tuples have equal configuration-type codes."""
    tuple_a, tuple_b = list(tuple_a), list(tuple_b)
    if len(tuple_a) != len(tuple_b):
        raise ValueError("tuples must have equal arity")
    code_a = canonical_code(model.configuration_type(tuple_a))
    code_b = canonical_code(model.configuration_type(tuple_b))
    return code_a == code_b


@dataclass
class PartialIso:
    """A finite type-preserving matching between two models.

    Invariant: the matched domain tuple and codomain tuple always have
    equal configuration-type codes.  The two models may coincide.
    """

    domain: DendriteModel
    codomain: DendriteModel
    pairs: list = field(default_factory=list)

    def domain_tuple(self) -> list:
        return [a for a, _ in self.pairs]

    def codomain_tuple(self) -> list:
        return [b for _, b in self.pairs]

    def forward(self) -> dict:
        return dict(self.pairs)

    def holds(self) -> bool:
        """Check the defining invariant (empty matchings hold trivially)."""
        if not self.pairs:
            return True
        ta = self.domain.configuration_type(self.domain_tuple())
        tb = self.codomain.configuration_type(self.codomain_tuple())
        return canonical_code(ta) == canonical_code(tb)


def _interior_flanks(model, span, sadj, retained_set, v):
    """The two retained vertices flanking an interior vertex of the span."""
    flanks = []
    for first in sadj[v]:
        prev, cur = v, first
        while cur not in retained_set:
            nxt = [w for w in sadj[cur] if w != prev]
            prev, cur = cur, nxt[0]
        flanks.append(cur)
    assert len(flanks) == 2
    return flanks


def _place_between(model, a, b, label) -> int:
    """A vertex of the given order strictly inside the arc from a to b.

    Reuses the first existing interior vertex with the right order (all
    interior positions along the arc yield the same type) and subdivides
    the first edge only when none exists.
    """
    path = model.arc(a, b)
    for w in path[1:-1]:
        if model.target(w) == label:
            return w
    return model.insert_on_edge((path[0], path[1]), label)


def _attach_at(model, at, label, span_set) -> int:
    """Fresh vertex of the given order hanging off `at` in a clean direction.

    The direction is chosen away from the spanned configuration, so the
    new arc meets it only at `at`.  Needs target(at) to exceed the
    configuration degree of `at`, which the matched domain guarantees.
    """
    if not model.is_saturated(at):
        return model.sprout(at, label)
    free = [n for n in model.neighbors(at) if n not in span_set]
    gate = free[0]
    if label == END:
        relay = model.insert_on_edge((at, gate), model.sig.min_branch_order)
        return model.sprout(relay, END)
    return model.insert_on_edge((at, gate), label)


def extend_one_point(iso: PartialIso, v) -> PartialIso:
    """Extend a partial isomorphism to one more domain vertex.

    The image is forced on vertices definable from the matched tuple
    (nodes of its configuration); elsewhere the codomain is grown by the
    amalgamation moves so the extended matching has equal types again.
    Deterministic: free placements use first-edge and smallest-id rules.
    """
    dom, cod = iso.domain, iso.codomain
    if dom.sig.labels != cod.sig.labels:
        raise ValueError("models must share a signature")
    if v in iso.forward():
        raise ValueError(f"vertex {v} is already matched")
    label = dom.target(v)

    if dom is cod:
        # prefer the literal self-image when it already preserves the
        # joint type, so identity-initialized matchings stay the identity
        ta = dom.configuration_type(iso.domain_tuple() + [v])
        tb = cod.configuration_type(iso.codomain_tuple() + [v])
        if canonical_code(ta) == canonical_code(tb):
            return PartialIso(dom, cod, iso.pairs + [(v, v)])

    if not iso.pairs:
        existing = cod.vertices_with_target(label)
        if existing:
            image = existing[0]
        elif label == END:
            relay = cod.insert_on_edge(cod.edges()[0], cod.sig.min_branch_order)
            image = cod.sprout(relay, END)
        else:
            image = cod.insert_on_edge(cod.edges()[0], label)
        return PartialIso(dom, cod, iso.pairs + [(v, image)])

    dom_tuple = iso.domain_tuple()
    cod_tuple = iso.codomain_tuple()
    dtree, dnode_of = dom.configuration(dom_tuple)
    ctree, cnode_of = cod.configuration(cod_tuple)
    tree_iso = canonical_vertex_map(dtree, ctree)
    assert tree_iso is not None, "partial isomorphism invariant is broken"
    model_iso = {dnode_of[t]: cnode_of[tree_iso[t]] for t in tree_iso}

    dspan = dom.steiner_vertices(set(dom_tuple))
    dsadj = {u: [w for w in dom.neighbors(u) if w in dspan] for u in dspan}
    retained = set(model_iso)
    cspan = cod.steiner_vertices(set(cod_tuple))

    def image_of_span_vertex(u):
        """Image of a vertex on the spanned subtree (forced or fresh insert)."""
        if u in retained:
            return model_iso[u]
        a, b = _interior_flanks(dom, dspan, dsadj, retained, u)
        return _place_between(cod, model_iso[a], model_iso[b], dom.target(u))

    if v in dspan:
        image = image_of_span_vertex(v)
    else:
        p = dom.first_point(v, dspan)
        p_img = image_of_span_vertex(p)
        # p_img is either a matched node with spare order for the new
        # branch, or a fresh subdivision vertex of branch order >= 3.
        image = _attach_at(cod, p_img, label, cspan | set(model_iso.values()))

    return PartialIso(dom, cod, iso.pairs + [(v, image)])


@dataclass
class LazyAutomorphism:
    """An automorphism of the limit, represented as a growing self-matching.

    apply() extends the matching on demand; the accumulated matching is
    a PartialIso at all times, which is exactly the statement that joint
    configuration types are preserved.
    """

    iso: PartialIso
    seed: int = 0

    @property
    def model(self) -> DendriteModel:
        return self.iso.domain

    def apply(self, v) -> int:
        forward = self.iso.forward()
        if v in forward:
            return forward[v]
        self.iso = extend_one_point(self.iso, v)
        return self.iso.pairs[-1][1]


def build_automorphism(model: DendriteModel, tuple_a, tuple_b, seed: int = 0) -> LazyAutomorphism:
    """An automorphism sending tuple_a to tuple_b coordinate-wise.

    The tuples must be orbit-equal; otherwise no automorphism exists and
    a ValueError is raised.
    """
    tuple_a, tuple_b = list(tuple_a), list(tuple_b)
    if not orbit_equal(model, tuple_a, tuple_b):
        raise ValueError("tuples have different configuration types")
    pairs = []
    seen = set()
    for a, b in zip(tuple_a, tuple_b):
        if a not in seen:
            seen.add(a)
            pairs.append((a, b))
    return LazyAutomorphism(PartialIso(model, model, pairs), seed)


def apply(auto: LazyAutomorphism, v) -> int:
    """Image of v under the automorphism, extending it on demand."""
    return auto.apply(v)


# -- transitivity checks -------------------------------------------------


def double_transitivity_check(sig: Signature, label, trials: int, seed: int, budget: int = 60) -> dict:
    """Sample ordered pairs of distinct same-order vertices; all must be
    orbit-equal.  Returns {"checked": n, "failures": [...]}."""
    if not sig.admits(label):
        raise ValueError(f"label must lie in {{1,2}} ∪ {{{sig.token()}}}")
    model = new_model(sig, seed).saturate(budget)
    candidates = model.vertices_with_target(label)
    rng = random.Random(derive_seed(seed, "double-transitivity", label))
    failures = []
    checked = 0
    reference = None
    for _ in range(trials):
        x, y = rng.sample(candidates, 2)
        code = canonical_code(model.configuration_type([x, y]))
        if reference is None:
            reference = code
        checked += 1
        if code != reference:
            failures.append({"pair": [x, y], "code": code.decode()})
    return {"label": str(label), "checked": checked, "failures": failures}


def weak_two_transitivity_check(sig: Signature, n, trials: int, seed: int, budget: int = 60) -> dict:
    """Sample comparable pairs of order-n branch vertices below a fixed end.

    Comparability is in the order with minimum z: x <= y iff x lies on
    the arc from z to y.  Every strictly comparable pair must give the
    same triple type (z, x, y).  Incomparable or equal samples are
    skipped and counted.
    """
    if n not in sig:
        raise ValueError(f"order {n} is not in the signature")
    model = new_model(sig, seed).saturate(budget)
    z = model.vertices_with_target(END)[0]
    candidates = model.vertices_with_target(n)
    rng = random.Random(derive_seed(seed, "weak-two-transitivity", n))
    failures = []
    checked = 0
    skipped = 0
    reference = None
    for _ in range(trials):
        x = rng.choice(candidates)
        y = rng.choice(candidates)
        if x == y or x not in model.arc(z, y):
            skipped += 1
            continue
        code = canonical_code(model.configuration_type([z, x, y]))
        if reference is None:
            reference = code
        checked += 1
        if code != reference:
            failures.append({"triple": [z, x, y], "code": code.decode()})
    return {"order": str(n), "checked": checked, "skipped": skipped, "failures": failures}


# -- stabilizer orders ----------------------------------------------------


@dataclass(frozen=True)
class BranchClass:
    """An isomorphism class of branches at a vertex."""

    code: bytes
    multiplicity: int
    branch_order: int


@dataclass(frozen=True)
class StabilizerCount:
    """|Aut_x| of a finite labelled tree with its wreath-product shape.

    order = prod over classes of multiplicity! * branch_order^multiplicity,
    mirroring the decomposition of a point stabilizer into branch
    homeomorphisms extended by permutations of equivalent branches.
    """

    order: int
    classes: tuple


def _rooted_aut_order(tree: LabelledTree, root, parent) -> int:
    children = [w for w in tree.neighbors(root) if w != parent]
    by_code = {}
    for w in children:
        by_code.setdefault(rooted_code(tree, w, root, with_marks=False), []).append(w)
    order = 1
    for code, members in by_code.items():
        m = len(members)
        for k in range(2, m + 1):
            order *= k
        for w in members:
            order *= _rooted_aut_order(tree, w, root)
    return order


def stabilizer_order(tree: LabelledTree, x) -> StabilizerCount:
    """Number of label-preserving automorphisms fixing x, with structure.

    Branches at x fall into isomorphism classes; equivalent branches may
    be permuted freely and each branch contributes its own rooted
    automorphism count, recursively.  Marks are ignored.
    """
    if x not in tree.label:
        raise KeyError(f"unknown vertex {x!r}")
    by_code = {}
    for w in tree.neighbors(x):
        by_code.setdefault(rooted_code(tree, w, x, with_marks=False), []).append(w)
    order = 1
    classes = []
    for code in sorted(by_code):
        members = by_code[code]
        m = len(members)
        fact = 1
        for k in range(2, m + 1):
            fact *= k
        branch = _rooted_aut_order(tree, members[0], x)
        order *= fact * branch**m
        classes.append(BranchClass(code, m, branch))
    return StabilizerCount(order, tuple(classes))
