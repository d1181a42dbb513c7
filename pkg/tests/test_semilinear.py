import itertools
import json
import random

import pytest

from dendrites.labels import INFINITY, Signature
from dendrites.checks import rooted_tree_orders
from dendrites.model import new_model
from dendrites.semilinear import (
    Completion,
    Poset,
    SemiLinearOrder,
    check_embedding_law,
    check_finite_identity,
    check_idempotent,
    check_meet_complete,
    completion,
    completion_minimum,
    full_down_chains,
    is_semilinear,
    order_from_end,
    reconstruct_from_dense,
    topology_and_separation,
    topology_subbasis,
)

S3 = Signature([3])

CHAIN3 = Poset("abc", [("a", "b"), ("b", "c")])
VEE = Poset("abc", [("a", "b"), ("a", "c")])


class TestPoset:
    def test_closure_is_taken(self):
        p = Poset("abc", [("a", "b"), ("b", "c")])
        assert p.leq("a", "c") and p.leq("a", "a")

    def test_antisymmetry_violation_raises(self):
        with pytest.raises(ValueError):
            Poset("ab", [("a", "b"), ("b", "a")])

    def test_unknown_element_raises(self):
        with pytest.raises(ValueError):
            Poset("ab", [("a", "z")])

    def test_json_round_trip(self):
        p = Poset([1, 2, 3], [(1, 2), (1, 3)])
        obj = json.loads(json.dumps(p.to_json_obj()))
        q = Poset.from_json_obj(obj)
        assert q.elements == p.elements
        assert all(q.leq(a, b) == p.leq(a, b) for a in p.elements for b in p.elements)

    def test_supremum_and_infimum(self):
        assert VEE.infimum(("b", "c")) == "a"
        assert VEE.supremum(("b", "c")) is None
        assert CHAIN3.supremum(("a", "b")) == "b"


class TestIsSemilinear:
    def test_chain(self):
        assert is_semilinear(CHAIN3) == (True, None)

    def test_no_common_lower_bound(self):
        ok, witness = is_semilinear(Poset("ab", []))
        assert not ok and witness["axiom"] == "downward-directed"

    def test_vee_is_semilinear(self):
        assert is_semilinear(VEE)[0]

    def test_diamond_downset_is_not_a_chain(self):
        diamond = Poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
        ok, witness = is_semilinear(diamond)
        assert not ok and witness["axiom"] == "downset-chain" and witness["at"] == "d"

    def test_semilinear_order_constructor_validates(self):
        with pytest.raises(ValueError):
            SemiLinearOrder("ab", [])


class TestOrderFromEnd:
    def test_end_is_the_minimum(self):
        m = new_model(S3, 0).saturate(25)
        z = m.vertices_with_target(1)[0]
        T = order_from_end(m, z)
        assert T.minimum() == z
        assert is_semilinear(T)[0]

    def test_comparability_is_arc_containment(self):
        m = new_model(S3, 0).saturate(25)
        z = m.vertices_with_target(1)[0]
        T = order_from_end(m, z)
        rng = random.Random(4)
        for _ in range(80):
            x, y = rng.choice(T.elements), rng.choice(T.elements)
            assert T.leq(x, y) == (x in m.arc(z, y))

    def test_incomparable_leaves_meet_below(self):
        m = new_model(S3, 0).saturate(25)
        z, x, y = m.vertices_with_target(1)[:3]
        T = order_from_end(m, z)
        meet = T.infimum((x, y))
        assert meet == m.median(z, x, y)

    def test_non_end_is_rejected(self):
        m = new_model(S3, 0)
        with pytest.raises(ValueError):
            order_from_end(m, 0)


class TestCompletion:
    def test_vee_has_three_chains(self):
        c = completion(VEE)
        assert c.chains == (("a",), ("a", "b"), ("a", "c"))

    def test_singleton(self):
        c = completion(Poset([7], []))
        assert c.chains == ((7,),)

    def test_empty_chain_appears_only_without_minimum(self):
        # finite semi-linear orders always have a minimum, so the empty
        # chain (whose supremum would be that minimum) is never full
        for p in (CHAIN3, VEE):
            assert () not in completion(p).chains

    def test_non_semilinear_input_is_rejected(self):
        with pytest.raises(ValueError):
            completion(Poset("ab", []))

    def test_embedding_and_identity_exhaustive_small(self):
        for n in range(1, 6):
            for p in rooted_tree_orders(n):
                c = completion(p)
                assert check_embedding_law(p, c)
                assert check_finite_identity(p, c)

    def test_enumerate_and_principal_paths_agree(self):
        for n in range(1, 6):
            for p in rooted_tree_orders(n):
                assert full_down_chains(p, "enumerate") == full_down_chains(p, "principal")

    def test_completion_of_a_large_order_uses_the_shortcut(self):
        m = new_model(S3, 3).saturate(20)
        z = m.vertices_with_target(1)[0]
        T = order_from_end(m, z)
        c = completion(T)
        assert len(c) == len(T.elements)
        assert check_finite_identity(T, c)

    def test_meet_complete_with_witnessed_api(self):
        c = completion(VEE)
        ok, witness = check_meet_complete(c)
        assert ok and witness is None
        full_set = c.poset.elements
        assert c.poset.infimum(full_set) == c.chains.index(("a",))

    def test_chain_suprema_exist(self):
        c = completion(CHAIN3)
        for r in range(1, len(c.poset.elements) + 1):
            for s in itertools.combinations(c.poset.elements, r):
                if c.poset.is_chain_subset(s):
                    assert c.poset.supremum(s) is not None

    def test_idempotent_small_cases(self):
        assert check_idempotent(Poset("ab", [("a", "b")]))
        assert check_idempotent(VEE)

    def test_minimum_law(self):
        for p in (CHAIN3, VEE, Poset([0], [])):
            c = completion(p)
            m = completion_minimum(c)
            assert m is not None
            assert c.chains[m] == (p.minimum(),)

    def test_completion_json_lists_sorted_chains(self):
        obj = completion(VEE).to_json_obj()
        assert obj["chains"] == [["a"], ["a", "b"], ["a", "c"]]
        assert obj["embedding"] == {"a": 0, "b": 1, "c": 2}


class TestReconstructFromDense:
    def test_branch_family_determines_vertices(self):
        m = new_model(S3, 11).saturate(30)
        z = m.vertices_with_target(1)[0]
        report = reconstruct_from_dense(m, z, [3], 2)
        assert report["violations"] == []
        assert report["checked_vertices"] == 30

    def test_full_insertable_family(self):
        m = new_model(S3, 2).saturate(20)
        z = m.vertices_with_target(1)[0]
        report = reconstruct_from_dense(m, z, [2, 3], 1)
        assert report["violations"] == []

    def test_ends_are_not_a_dense_family(self):
        m = new_model(S3, 0)
        with pytest.raises(ValueError):
            reconstruct_from_dense(m, 1, [1], 1)

    def test_empty_family_is_an_error(self):
        m = new_model(S3, 0)
        with pytest.raises(ValueError):
            reconstruct_from_dense(m, 1, [], 1)


class TestTopologyAndSeparation:
    def test_singleton_subbasis(self):
        p = Poset([0], [])
        sets = topology_subbasis(p)
        assert sets == [("complement-of-upset", 0, ()), ("strict-upset", 0, ())]

    def test_subbasis_definition(self):
        sets = dict()
        for kind, x, members in topology_subbasis(VEE):
            sets[(kind, x)] = set(members)
        assert sets[("complement-of-upset", "b")] == {"a", "c"}
        assert sets[("strict-upset", "a")] == {"b", "c"}

    def test_model_backed_separation(self):
        m = new_model(S3, 1).saturate(12)
        z = m.vertices_with_target(1)[0]
        T = order_from_end(m, z)
        report = topology_and_separation(T, model=m)
        assert report["meet_semilattice"]
        assert report["separation"]["failures"] == []
        assert report["separation"]["checked"] == len(T.elements) * (len(T.elements) - 1) // 2

    def test_adjacent_vertices_need_an_inserted_separator(self):
        m = new_model(S3, 0)
        z = 1
        T = order_from_end(m, z)
        before = m.vertex_count()
        report = topology_and_separation(T, model=m)
        assert report["separation"]["failures"] == []
        assert m.vertex_count() > before

    def test_without_model_no_separation_section(self):
        report = topology_and_separation(VEE)
        assert report["separation"] is None

    def test_non_semilinear_is_rejected(self):
        with pytest.raises(ValueError):
            topology_and_separation(Poset("ab", []))
