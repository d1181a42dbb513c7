"""Semi-linear orders and their completion by full down-chains.

Fixing an end z of a dendrite orders the points by x <= y iff x lies on
the arc from z to y.  The resulting orders are semi-linear: downward
directed, with every principal down-set a chain.  Conversely a
semi-linear order is completed by its full down-chains (down-closed
chains containing their supremum or having none) ordered by inclusion;
on finite orders the completion changes nothing, and it is idempotent
in general.  This module implements the orders, the completion and its
laws, plus the finite shadows of the order-theoretic reconstruction of
the dendrite: down-set injectivity over an arcwise-dense label family,
the upset-subbasis topology, and separation of points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .labels import END, REGULAR, label_token
from .model import DendriteModel


class Poset:
    """A finite partial order.

    Built from any relation pairs; the reflexive-transitive closure is
    taken, and a cycle through distinct elements (an antisymmetry
    violation) raises.
    """

    def __init__(self, elements, pairs):
        self.elements = tuple(sorted(set(elements)))
        eset = set(self.elements)
        below = {x: {x} for x in self.elements}
        for a, b in pairs:
            if a not in eset or b not in eset:
                raise ValueError(f"pair ({a!r},{b!r}) references unknown element")
            below[b].add(a)
        changed = True
        while changed:
            changed = False
            for x in self.elements:
                extra = set()
                for y in below[x]:
                    extra |= below[y]
                if not extra <= below[x]:
                    below[x] |= extra
                    changed = True
        for x in self.elements:
            for y in below[x]:
                if x != y and x in below[y]:
                    raise ValueError(f"antisymmetry violated: {x!r} and {y!r} are comparable both ways")
        self._down = {x: frozenset(below[x]) for x in self.elements}

    def leq(self, a, b) -> bool:
        return a in self._down[b]

    def down(self, x) -> frozenset:
        return self._down[x]

    def up(self, x) -> frozenset:
        return frozenset(y for y in self.elements if self.leq(x, y))

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def is_chain_subset(self, subset) -> bool:
        return all(self.comparable(a, b) for a, b in itertools.combinations(subset, 2))

    def supremum(self, subset):
        """The least upper bound of a subset, or None if there is none."""
        upper = [u for u in self.elements if all(self.leq(s, u) for s in subset)]
        for u in upper:
            if all(self.leq(u, w) for w in upper):
                return u
        return None

    def infimum(self, subset):
        lower = [l for l in self.elements if all(self.leq(l, s) for s in subset)]
        for l in lower:
            if all(self.leq(w, l) for w in lower):
                return l
        return None

    def minimum(self):
        for x in self.elements:
            if all(self.leq(x, y) for y in self.elements):
                return x
        return None

    def to_json_obj(self) -> dict:
        pairs = [[a, b] for b in self.elements for a in sorted(self._down[b])]
        return {"elements": list(self.elements), "leq": pairs}

    @classmethod
    def from_json_obj(cls, obj) -> "Poset":
        return cls(obj["elements"], [tuple(p) for p in obj["leq"]])

    def __repr__(self):
        strict = [(a, b) for b in self.elements for a in self._down[b] if a != b]
        return f"Poset({list(self.elements)}, {sorted(strict)})"


def is_semilinear(p: Poset):
    """Check the two semi-linearity axioms; returns (ok, witness).

    The witness names a pair with no common lower bound, or an
    incomparable pair inside some principal down-set.
    """
    for x, y in itertools.combinations(p.elements, 2):
        if not (p.down(x) & p.down(y)):
            return False, {"axiom": "downward-directed", "pair": [x, y]}
    for x in p.elements:
        d = sorted(p.down(x))
        for a, b in itertools.combinations(d, 2):
            if not p.comparable(a, b):
                return False, {"axiom": "downset-chain", "at": x, "pair": [a, b]}
    return True, None


class SemiLinearOrder(Poset):
    """A poset satisfying both semi-linearity axioms (checked on build)."""

    def __init__(self, elements, pairs):
        super().__init__(elements, pairs)
        ok, witness = is_semilinear(self)
        if not ok:
            raise ValueError(f"not semi-linear: {witness}")


def order_from_end(model: DendriteModel, z) -> SemiLinearOrder:
    """The order on model vertices with minimum z: x <= y iff x ∈ arc(z, y)."""
    if model.target(z) != END:
        raise ValueError(f"vertex {z} is not an end (target {label_token(model.target(z))})")
    pairs = []
    for y in model.vertices():
        for x in model.arc(z, y):
            pairs.append((x, y))
    return SemiLinearOrder(model.vertices(), pairs)


# -- completion by full down-chains ---------------------------------------


@dataclass(frozen=True)
class Completion:
    """The full down-chains of a semi-linear order, ordered by inclusion.

    chains[i] is a sorted tuple of elements; `poset` orders the indices
    by inclusion; `embedding` maps each original element x to the index
    of its principal down-set.
    """

    chains: tuple
    poset: Poset
    embedding: dict

    def __len__(self):
        return len(self.chains)

    def to_json_obj(self) -> dict:
        strict = [
            [a, b]
            for b in self.poset.elements
            for a in sorted(self.poset.down(b))
        ]
        return {
            "chains": [list(c) for c in self.chains],
            "leq": strict,
            "embedding": {str(x): i for x, i in sorted(self.embedding.items(), key=lambda kv: str(kv[0]))},
        }


def _is_full_down_chain(p: Poset, subset) -> bool:
    if not p.is_chain_subset(subset):
        return False
    cset = set(subset)
    for x in subset:
        if not p.down(x) <= cset:
            return False
    sup = p.supremum(subset)
    return sup is None or sup in cset


def full_down_chains(p: Poset, method: str = "auto") -> list:
    """All full down-chains, as sorted tuples.

    method "enumerate" filters the whole powerset (the trusted oracle,
    default for <= 12 elements); "principal" uses the shortcut valid for
    finite semi-linear orders, where every nonempty down-chain is a
    principal down-set and the empty chain is never full.
    """
    if method == "auto":
        method = "enumerate" if len(p.elements) <= 12 else "principal"
    if method == "enumerate":
        out = []
        for r in range(len(p.elements) + 1):
            for subset in itertools.combinations(p.elements, r):
                if _is_full_down_chain(p, subset):
                    out.append(tuple(sorted(subset)))
        return sorted(out)
    if method == "principal":
        chains = {tuple(sorted(p.down(x))) for x in p.elements}
        if p.elements and p.minimum() is None:
            chains.add(())
        if not p.elements:
            chains.add(())
        return sorted(chains)
    raise ValueError(f"unknown method {method!r}")


def completion(p: Poset, method: str = "auto") -> Completion:
    """The completion of a semi-linear order by its full down-chains."""
    ok, witness = is_semilinear(p)
    if not ok:
        raise ValueError(f"not semi-linear: {witness}")
    chains = full_down_chains(p, method)
    index = {c: i for i, c in enumerate(chains)}
    pairs = [
        (index[a], index[b])
        for a, b in itertools.permutations(chains, 2)
        if set(a) <= set(b)
    ]
    poset = Poset(range(len(chains)), pairs)
    embedding = {x: index[tuple(sorted(p.down(x)))] for x in p.elements}
    return Completion(tuple(chains), poset, embedding)


def check_embedding_law(p: Poset, c: Completion) -> bool:
    """x <= y in T iff the embedded down-sets are included in each other."""
    return all(
        p.leq(x, y) == c.poset.leq(c.embedding[x], c.embedding[y])
        for x in p.elements
        for y in p.elements
    )


def check_finite_identity(p: Poset, c: Completion) -> bool:
    """On a finite semi-linear order the embedding is onto: T ≅ its completion."""
    return len(set(c.embedding.values())) == len(c.chains) == len(p.elements) and check_embedding_law(p, c)


def check_meet_complete(c: Completion, exhaustive_limit: int = 14):
    """Infima of nonempty subsets and suprema of nonempty chains exist.

    Exhaustive over the powerset up to the given size; beyond it only
    pairs and maximal chains are checked (sufficient in a finite order).
    Returns (ok, witness).
    """
    p = c.poset
    n = len(p.elements)
    if n <= exhaustive_limit:
        subsets = []
        for r in range(1, n + 1):
            subsets.extend(itertools.combinations(p.elements, r))
    else:
        subsets = list(itertools.combinations(p.elements, 2)) + [p.elements]
    for s in subsets:
        if p.infimum(s) is None:
            return False, {"law": "meet-complete", "subset": list(s)}
    for s in subsets:
        if p.is_chain_subset(s) and p.supremum(s) is None:
            return False, {"law": "chain-supremum", "chain": list(s)}
    return True, None


def check_idempotent(p: Poset) -> bool:
    """Completing a completion changes nothing (up to the canonical map)."""
    c1 = completion(p)
    c2 = completion(c1.poset)
    return check_finite_identity(c1.poset, c2)


def completion_minimum(c: Completion):
    """The unique minimum of a completion (always exists)."""
    return c.poset.minimum()


# -- finite shadows of the dense reconstruction ----------------------------


def reconstruct_from_dense(model: DendriteModel, z, t0_labels, depth: int) -> dict:
    """Bounded check that an arcwise-dense label family determines points.

    t0_labels picks the family T0 of vertices whose target lies in it
    (branch or regular orders only; ends are never arcwise dense).  For
    `depth` rounds, every comparable pair with no T0 vertex strictly
    between gets one inserted.  The vertices present at entry are then
    checked against the densified model: distinct vertices must have
    distinct T0 down-sets, and for T0-labelled vertices the supremum of
    the down-set must be the vertex itself.  For other vertices the
    supremum identifies them only in the dense limit, so they are
    counted as skipped rather than checked.
    """
    t0_labels = set(t0_labels)
    if not t0_labels:
        raise ValueError("empty label family")
    for l in t0_labels:
        if l == END or not model.sig.admits(l):
            raise ValueError(f"label {label_token(l)} is not arc-insertable (need {{2}} ∪ {{{model.sig.token()}}})")
    if model.target(z) != END:
        raise ValueError(f"vertex {z} is not an end")
    fill = min(t0_labels)
    check_set = model.vertices()
    inserted = 0
    for _ in range(depth):
        snapshot = model.vertices()
        for b in snapshot:
            path_zb = model.arc(z, b)
            for a in path_zb[:-1]:
                segment = model.arc(a, b)
                if not any(model.target(w) in t0_labels for w in segment[1:-1]):
                    model.insert_on_edge((segment[0], segment[1]), fill)
                    inserted += 1

    def t0_down(t):
        return frozenset(s for s in model.arc(z, t) if model.target(s) in t0_labels)

    violations = []
    seen = {}
    for t in check_set:
        d = t0_down(t)
        if d in seen:
            violations.append({"law": "downset-injective", "pair": [seen[d], t]})
        seen[d] = t

    checked_sups = 0
    skipped = 0
    all_vertices = model.vertices()
    for t in check_set:
        if model.target(t) not in t0_labels:
            skipped += 1
            continue
        d = t0_down(t)
        upper = [u for u in all_vertices if all(s in set(model.arc(z, u)) for s in d)]
        least = None
        for u in upper:
            if all(u in model.arc(z, w) for w in upper):
                least = u
                break
        checked_sups += 1
        if least != t:
            violations.append({"law": "downset-supremum", "vertex": t, "sup": least})
    return {
        "rounds": depth,
        "inserted": inserted,
        "checked_vertices": len(check_set),
        "model_vertices": len(all_vertices),
        "checked_sups": checked_sups,
        "skipped_sups": skipped,
        "violations": violations,
    }


def topology_subbasis(p: Poset) -> list:
    """The subbasis sets T∖↑x and ↑x∖{x}, for every x."""
    out = []
    eset = set(p.elements)
    for x in p.elements:
        up = p.up(x)
        out.append(("complement-of-upset", x, tuple(sorted(eset - up))))
        out.append(("strict-upset", x, tuple(sorted(up - {x}))))
    return out


def topology_and_separation(p: Poset, model: DendriteModel | None = None) -> dict:
    """Emit the subbasis; with a backing model, separate all vertex pairs.

    Separation may extend the model (adjacent vertices need a subdivision
    point first), which is how the dense-limit statement is met at finite
    scale.  Every element must be a ∧-semi-lattice meet candidate, which
    holds in any finite semi-linear order and is verified here.
    """
    ok, witness = is_semilinear(p)
    if not ok:
        raise ValueError(f"not semi-linear: {witness}")
    meets_ok = all(
        p.infimum((a, b)) is not None for a, b in itertools.combinations(p.elements, 2)
    )
    report = {
        "subbasis": topology_subbasis(p),
        "meet_semilattice": meets_ok,
        "separation": None,
    }
    if model is not None:
        failures = []
        checked = 0
        for x, y in itertools.combinations(p.elements, 2):
            t = model.separate(x, y)
            checked += 1
            if t == x or t == y or t not in model.arc(x, y):
                failures.append({"pair": [x, y], "separator": t})
        report["separation"] = {"checked": checked, "failures": failures}
    return report
