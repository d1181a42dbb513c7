import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dendrites.labels import INFINITY, Signature
from dendrites.labelled_trees import (
    LabelledTree,
    canonical_code,
    canonical_vertex_map,
    census_count,
    enumerate_types,
    is_isomorphic,
    validate,
)

from helpers import brute_force_isomorphic, random_valid_tree

S3 = Signature([3])
S3INF = Signature([3, INFINITY])


def single(label, marks=(0,)):
    return LabelledTree([0], [], {0: label}, marks)


def edge(l0, l1, marks=(0, 1)):
    return LabelledTree([0, 1], [(0, 1)], {0: l0, 1: l1}, marks)


def path3(l0, l1, l2, marks):
    return LabelledTree([0, 1, 2], [(0, 1), (1, 2)], {0: l0, 1: l1, 2: l2}, marks)


def tripod(center, leaves, marks):
    return LabelledTree(
        [0, 1, 2, 3],
        [(0, 1), (0, 2), (0, 3)],
        {0: center, 1: leaves[0], 2: leaves[1], 3: leaves[2]},
        marks,
    )


class TestValidate:
    def test_single_end_valid(self):
        assert validate(single(1), S3).ok

    def test_edge_of_branch_points_valid(self):
        # degree 1 is below the branch order 3, so labelling both ends 3 is fine
        assert validate(edge(3, 3), S3).ok

    def test_unmarked_degree_two_invalid(self):
        t = path3(1, 3, 1, marks=[0, 2])
        report = validate(t, S3)
        assert not report.ok
        assert any(v.rule == "unmarked-low-degree" and v.vertex == 1 for v in report.violations)

    def test_label_below_degree(self):
        t = tripod(2, (1, 1, 1), marks=[0, 1, 2, 3])
        report = validate(t, S3)
        assert any(v.rule == "label-below-degree" and v.vertex == 0 for v in report.violations)

    def test_label_outside_signature(self):
        report = validate(edge(1, 4), S3)
        assert any(v.rule == "label-outside-signature" and v.vertex == 1 for v in report.violations)

    def test_forest_is_not_a_tree(self):
        t = LabelledTree([0, 1], [], {0: 1, 1: 1}, [0, 1])
        assert any(v.rule == "not-a-tree" for v in validate(t, S3).violations)

    def test_infinite_label_needs_inf_in_signature(self):
        assert validate(single(INFINITY), S3INF).ok
        assert not validate(single(INFINITY), S3).ok


class TestCanonicalCode:
    def test_relabeled_trees_share_codes(self):
        a = edge(1, 3)
        b = LabelledTree([5, 9], [(9, 5)], {9: 1, 5: 3}, [9, 5])
        assert canonical_code(a) == canonical_code(b)

    def test_mark_order_distinguishes(self):
        assert canonical_code(edge(1, 3, marks=(0, 1))) != canonical_code(edge(3, 1, marks=(0, 1)))
        assert canonical_code(edge(1, 3, marks=(0, 1))) == canonical_code(edge(3, 1, marks=(1, 0)))

    def test_topology_distinguishes(self):
        p = path3(1, 2, 1, marks=[0, 1, 2])
        t = tripod(3, (1, 2, 1), marks=[1, 0, 2])
        assert canonical_code(p) != canonical_code(t)

    def test_empty_marks_is_an_error(self):
        with pytest.raises(ValueError):
            canonical_code(LabelledTree([0], [], {0: 1}, []))

    def test_codes_are_bytes_and_stable(self):
        code = canonical_code(tripod(3, (1, 2, 3), marks=[1, 2, 3]))
        assert isinstance(code, bytes)
        assert code == canonical_code(tripod(3, (1, 2, 3), marks=[1, 2, 3]))


class TestIsomorphism:
    def test_tree_vs_itself(self):
        t = path3(1, 2, 1, marks=[0, 1, 2])
        assert is_isomorphic(t, t)

    def test_label_mismatch_at_first_mark(self):
        assert not is_isomorphic(edge(1, 3), edge(3, 1))

    def test_tripods_in_matching_coordinate_order(self):
        a = tripod(3, (1, 2, 3), marks=[1, 2, 3])
        b = LabelledTree(
            [7, 4, 5, 6], [(7, 4), (7, 5), (7, 6)], {7: 3, 4: 2, 5: 1, 6: 3}, [5, 4, 6]
        )
        assert brute_force_isomorphic(a, b)
        assert is_isomorphic(a, b)

    def test_canonical_vertex_map_is_an_isomorphism(self):
        a = tripod(3, (1, 1, 2), marks=[1, 2, 3])
        b = tripod(3, (1, 2, 1), marks=[1, 3, 2])
        mapping = canonical_vertex_map(a, b)
        assert mapping is not None
        assert all(a.label[v] == b.label[mapping[v]] for v in a.vertices)
        for i in range(len(a.marks)):
            assert mapping[a.marks[i]] == b.marks[i]
        for u, v in a.edges:
            assert (min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) in b.edges

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**9), st.integers(0, 10**9))
    def test_code_equality_is_exactly_isomorphism(self, seed_a, seed_b):
        a = random_valid_tree(seed_a, S3)
        b = random_valid_tree(seed_b, S3)
        assert (canonical_code(a) == canonical_code(b)) == brute_force_isomorphic(a, b)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_shuffled_copy_keeps_the_code(self, seed):
        import random as _random

        a = random_valid_tree(seed, S3INF)
        rng = _random.Random(seed + 1)
        perm = {v: w for v, w in zip(a.vertices, rng.sample(a.vertices, len(a.vertices)))}
        b = LabelledTree(
            [perm[v] for v in a.vertices],
            [(perm[u], perm[v]) for u, v in a.edges],
            {perm[v]: a.label[v] for v in a.vertices},
            [perm[m] for m in a.marks],
        )
        assert canonical_code(a) == canonical_code(b)


class TestEnumeration:
    def test_single_mark_census(self):
        types = enumerate_types(1, S3)
        assert len(types) == 3
        assert sorted(t.label[t.marks[0]] for t in types) == [1, 2, 3]

    def test_pair_census_with_repeats(self):
        # 9 ordered label pairs on an arc + 3 diagonal single-vertex types
        assert census_count(2, S3, False) == 12

    def test_pair_census_distinct(self):
        assert census_count(2, S3, True) == 9

    def test_triple_census_distinct(self):
        # 54 collinear types (3 middle coordinates x 2 middle labels x 9 end
        # labels) plus 27 tripods with an unmarked order-3 center; verified
        # against full bijection search and saturated-model sampling
        assert census_count(3, S3, True) == 81

    def test_triple_census_with_repeats(self):
        # 81 distinct + 27 one-repeat + 3 diagonal
        assert census_count(3, S3, False) == 111

    def test_census_with_infinite_order(self):
        assert census_count(1, S3INF) == 4
        assert census_count(2, S3INF, True) == 16

    @pytest.mark.parametrize(
        "labels", [[3], [4], [INFINITY], [3, 4], [3, INFINITY], [3, 4, 5], [3, 4, INFINITY]]
    )
    @pytest.mark.parametrize("p", [1, 2])
    def test_distinct_pairs_follow_the_power_law(self, labels, p):
        sig = Signature(labels)
        assert census_count(p, sig, True) == (len(labels) + 2) ** p

    def test_all_types_validate(self):
        for sig in (S3, S3INF):
            for t in enumerate_types(3, sig, False):
                assert validate(t, sig).ok

    def test_census_monotone_in_signature(self):
        for p in (1, 2, 3):
            assert census_count(p, S3, True) <= census_count(p, Signature([3, 4]), True)

    def test_types_are_duplicate_free_and_sorted(self):
        codes = [canonical_code(t) for t in enumerate_types(3, S3, True)]
        assert codes == sorted(codes)
        assert len(codes) == len(set(codes))

    def test_arity_zero_is_an_error(self):
        with pytest.raises(ValueError):
            enumerate_types(0, S3)


class TestSerialization:
    def test_json_round_trip(self):
        t = tripod(INFINITY, (1, 2, 3), marks=[1, 2, 3])
        obj = json.loads(json.dumps(t.to_json_obj()))
        back = LabelledTree.from_json_obj(obj)
        assert canonical_code(back) == canonical_code(t)
        assert obj["vertices"][0]["label"] == "inf"

    def test_dot_export_lists_marks(self):
        dot = edge(1, 3).to_dot()
        assert "graph" in dot and "--" in dot
        assert "(#0)" in dot and "(#1)" in dot

    def test_malformed_trees_are_rejected(self):
        with pytest.raises(ValueError):
            LabelledTree([0], [(0, 0)], {0: 1}, [0])
        with pytest.raises(ValueError):
            LabelledTree([0, 1], [(0, 1), (1, 0)], {0: 1, 1: 1}, [0])
        with pytest.raises(ValueError):
            LabelledTree([0], [], {0: 1}, [5])
        with pytest.raises(ValueError):
            LabelledTree([0], [], {0: 0}, [0])
