"""Seeded property suites behind the `check` command.

Each suite returns {"checked": int, "failures": [...]} plus suite
details; a failure entry is a JSON-friendly description of one
counterexample.  All suites are deterministic in the seed.
"""

from __future__ import annotations

import heapq
import itertools
import random

from .labels import END, REGULAR, INFINITY, Signature, derive_seed
from .labelled_trees import LabelledTree, canonical_code, enumerate_types, validate
from .homogeneity import (
    build_automorphism,
    double_transitivity_check,
    orbit_equal,
    stabilizer_order,
    weak_two_transitivity_check,
)
from .model import new_model
from .reconstruct import (
    betweenness,
    betweenness_via_common_arc,
    common_arc,
    stabilizer_witness,
)
from .semilinear import (
    Poset,
    check_finite_identity,
    check_idempotent,
    check_meet_complete,
    completion,
    full_down_chains,
    is_semilinear,
    order_from_end,
    reconstruct_from_dense,
    topology_and_separation,
)

SUITES = ("census", "homogeneity", "order", "reconstruct")


def sample_type_codes(sig, p, distinct, samples, seed, budget=60):
    """Classify seeded random tuples of a saturated model by type code."""
    model = new_model(sig, seed).saturate(budget)
    vs = model.vertices()
    rng = random.Random(derive_seed(seed, "census-sample", sig.token(), p, distinct))
    codes = set()
    for _ in range(samples):
        if distinct:
            tup = rng.sample(vs, p)
        else:
            tup = [rng.choice(vs) for _ in range(p)]
        codes.add(canonical_code(model.configuration_type(tup)))
    return codes


def census_suite(seed: int, samples: int = 2000) -> dict:
    """Enumerated type lists agree with model sampling and the pair law."""
    failures = []
    checked = 0
    plans = [
        (Signature([3]), 1, False),
        (Signature([3]), 2, False),
        (Signature([3]), 2, True),
        (Signature([3, INFINITY]), 1, False),
        (Signature([3, INFINITY]), 2, True),
        (Signature([3]), 3, True),
    ]
    for sig, p, distinct in plans:
        types = enumerate_types(p, sig, distinct)
        checked += 1
        bad = [t for t in types if not validate(t, sig).ok]
        if bad:
            failures.append({"law": "types-validate", "sig": sig.token(), "p": p, "bad": len(bad)})
        enum_codes = {canonical_code(t) for t in types}
        observed = sample_type_codes(sig, p, distinct, samples, seed)
        checked += 1
        if not observed <= enum_codes:
            failures.append({"law": "observed-in-enumerated", "sig": sig.token(), "p": p,
                             "extra": len(observed - enum_codes)})
        if p <= 2:
            checked += 1
            if not enum_codes <= observed:
                failures.append({"law": "enumerated-observed", "sig": sig.token(), "p": p,
                                 "missing": len(enum_codes - observed)})
            checked += 1
            want = (len(sig.labels) + 2) ** p
            if distinct and len(types) != want:
                failures.append({"law": "pair-power-law", "sig": sig.token(), "p": p,
                                 "got": len(types), "want": want})
    # monotone in the signature
    for p in (1, 2):
        small = len(enumerate_types(p, Signature([3]), True))
        big = len(enumerate_types(p, Signature([3, 4]), True))
        checked += 1
        if small > big:
            failures.append({"law": "census-monotone", "p": p, "small": small, "big": big})
    return {"suite": "census", "checked": checked, "failures": failures}


def homogeneity_suite(seed: int, pairs: int = 40, trials: int = 120) -> dict:
    """Back-and-forth extension, transitivity and stabilizer counts."""
    failures = []
    checked = 0
    for sig in (Signature([3]), Signature([INFINITY])):
        model = new_model(sig, seed).saturate(50)
        rng = random.Random(derive_seed(seed, "homogeneity", sig.token()))
        vs = model.vertices()
        for i in range(pairs):
            p = rng.randint(1, 4)
            tup_a = [rng.choice(vs) for _ in range(p)]
            emb = model.realize_type(model.configuration_type(tup_a))
            tup_b = [emb[j] for j in range(p)]
            auto = build_automorphism(model, tup_a, tup_b, seed=i)
            queries = [rng.choice(vs) for _ in range(3)]
            images = [auto.apply(q) for q in queries]
            checked += 1
            if not orbit_equal(model, tup_a + queries, tup_b + images):
                failures.append({"law": "joint-type", "sig": sig.token(), "tuple": tup_a})
        for label in (END, REGULAR) + sig.sorted_labels():
            report = double_transitivity_check(sig, label, trials, derive_seed(seed, "dt", sig.token()))
            checked += report["checked"]
            failures.extend(report["failures"])
        for n in sig.sorted_labels():
            report = weak_two_transitivity_check(sig, n, trials, derive_seed(seed, "w2t", sig.token()))
            checked += report["checked"]
            failures.extend(report["failures"])
    rng = random.Random(derive_seed(seed, "stabilizer"))
    for _ in range(60):
        tree = random_labelled_tree(rng, rng.randint(1, 8), (1, 2, 3))
        x = rng.choice(tree.vertices)
        checked += 1
        if stabilizer_order(tree, x).order != brute_force_stabilizer(tree, x):
            failures.append({"law": "stabilizer-order", "tree": tree.to_json_obj(), "x": x})
    return {"suite": "homogeneity", "checked": checked, "failures": failures}


def order_suite(seed: int, max_size: int = 5) -> dict:
    """Completion laws exhaustively on small orders, plus model-backed order checks."""
    failures = []
    checked = 0
    for n in range(1, max_size + 1):
        for p in rooted_tree_orders(n):
            c = completion(p)
            checked += 1
            if not check_finite_identity(p, c):
                failures.append({"law": "finite-identity", "poset": p.to_json_obj()})
            ok, witness = check_meet_complete(c)
            checked += 1
            if not ok:
                failures.append({"law": "meet-complete", "poset": p.to_json_obj(), "witness": witness})
            checked += 1
            if not check_idempotent(p):
                failures.append({"law": "idempotent", "poset": p.to_json_obj()})
            checked += 1
            if full_down_chains(p, "enumerate") != full_down_chains(p, "principal"):
                failures.append({"law": "enumerate-vs-principal", "poset": p.to_json_obj()})
            checked += 1
            if c.poset.minimum() is None:
                failures.append({"law": "completion-minimum", "poset": p.to_json_obj()})
    model = new_model(Signature([3]), seed).saturate(30)
    z = model.vertices_with_target(END)[0]
    order = order_from_end(model, z)
    ok, witness = is_semilinear(order)
    checked += 1
    if not ok:
        failures.append({"law": "order-from-end-semilinear", "witness": witness})
    report = reconstruct_from_dense(model, z, [3], 2)
    checked += report["checked_sups"] + report["checked_vertices"]
    failures.extend(report["violations"])
    small = new_model(Signature([3]), derive_seed(seed, "sep")).saturate(14)
    z2 = small.vertices_with_target(END)[0]
    sep = topology_and_separation(order_from_end(small, z2), model=small)
    checked += sep["separation"]["checked"]
    failures.extend(sep["separation"]["failures"])
    return {"suite": "order", "checked": checked, "failures": failures}


def reconstruct_suite(seed: int, triples: int = 200) -> dict:
    """The two ternary-relation equivalences with witness construction."""
    failures = []
    checked = 0
    model = new_model(Signature([3]), seed).saturate(40)
    rng = random.Random(derive_seed(seed, "reconstruct"))
    for _ in range(triples):
        vs = model.vertices()
        x, y, z = rng.sample(vs, 3)
        witness = stabilizer_witness(model, x, y, z)
        checked += 1
        if (witness is not None) != (not common_arc(model, x, y, z)):
            failures.append({"law": "witness-iff-not-common-arc", "triple": [x, y, z]})
        checked += 1
        if betweenness_via_common_arc(model, x, y, z, budget=2) != betweenness(model, x, y, z):
            failures.append({"law": "betweenness-equivalence", "triple": [x, y, z]})
        if witness is not None:
            auto = build_automorphism(model, [x, y, z], [x, y, z], seed=checked)
            checked += 1
            if auto.apply(witness) != witness:
                failures.append({"law": "witness-fixed", "triple": [x, y, z], "witness": witness})
    return {"suite": "reconstruct", "checked": checked, "failures": failures}


def run_suites(names, seed: int) -> dict:
    """Run the named suites; overall ok iff every suite has no failures."""
    runners = {
        "census": census_suite,
        "homogeneity": homogeneity_suite,
        "order": order_suite,
        "reconstruct": reconstruct_suite,
    }
    reports = [runners[name](seed) for name in names]
    return {
        "seed": seed,
        "checked": sum(r["checked"] for r in reports),
        "failures": [f for r in reports for f in r["failures"]],
        "suites": reports,
    }


# -- small helpers shared with the tests ----------------------------------


def random_labelled_tree(rng: random.Random, n: int, labels) -> LabelledTree:
    """A uniformly random labelled tree on n vertices (single mark at 0)."""
    if n == 1:
        edges = []
    elif n == 2:
        edges = [(0, 1)]
    else:
        seq = [rng.randrange(n) for _ in range(n - 2)]
        deg = [1] * n
        for s in seq:
            deg[s] += 1
        leaves = [v for v in range(n) if deg[v] == 1]
        heapq.heapify(leaves)
        edges = []
        for s in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, s))
            deg[s] -= 1
            if deg[s] == 1:
                heapq.heappush(leaves, s)
        edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    label = {v: rng.choice(list(labels)) for v in range(n)}
    return LabelledTree(range(n), edges, label, [0])


def brute_force_stabilizer(tree: LabelledTree, x) -> int:
    """Count label-preserving automorphisms fixing x by backtracking."""
    vs = list(tree.vertices)
    edges = set(tree.edges)

    def compatible(f, a, b):
        if tree.label[a] != tree.label[b] or tree.degree(a) != tree.degree(b):
            return False
        for u, w in f.items():
            if ((min(a, u), max(a, u)) in edges) != ((min(b, w), max(b, w)) in edges):
                return False
        return True

    order = [x] + [v for v in vs if v != x]

    def count(i, f, used):
        if i == len(order):
            return 1
        a = order[i]
        total = 0
        for b in vs:
            if b in used or not compatible(f, a, b):
                continue
            f[a] = b
            used.add(b)
            total += count(i + 1, f, used)
            del f[a]
            used.discard(b)
        return total

    return count(1, {x: x}, {x})


def rooted_tree_orders(n: int):
    """Every root-directed tree order on elements 0..n-1 (all labelled).

    Finite semi-linear orders are exactly these: the Hasse diagram is a
    tree directed away from the unique minimum.
    """
    for edges in _prufer_edges(n):
        adj = {v: [] for v in range(n)}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        for root in range(n):
            pairs = []
            stack = [(root, None, (root,))]
            while stack:
                u, parent, ancestors = stack.pop()
                for a in ancestors:
                    pairs.append((a, u))
                for w in adj[u]:
                    if w != parent:
                        stack.append((w, u, ancestors + (w,)))
            yield Poset(range(n), pairs)


def _prufer_edges(m: int):
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        deg = [1] * m
        for s in seq:
            deg[s] += 1
        leaves = [v for v in range(m) if deg[v] == 1]
        heapq.heapify(leaves)
        edges = []
        for s in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, s))
            deg[s] -= 1
            if deg[s] == 1:
                heapq.heappush(leaves, s)
        edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
        yield edges
