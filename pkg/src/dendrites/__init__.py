"""Exact combinatorics of generalised Wazewski dendrites.

A dendrite whose branch points realize exactly the orders in a set S,
each order arcwise densely, is determined up to homeomorphism by S.
This package studies its homeomorphism group at desk scale through the
countable combinatorial structure the group acts on: labelled-tree
invariants classifying orbits of finite tuples, growing finite tree
models, automorphisms built lazily by back-and-forth, the semi-linear
order seen from an end with its completion by full down-chains, and
the ternary betweenness relations behind group reconstruction.
"""

from .labels import END, INFINITY, REGULAR, Signature
from .labelled_trees import (
    LabelledTree,
    ValidationReport,
    Violation,
    canonical_code,
    canonical_vertex_map,
    census_count,
    enumerate_types,
    is_isomorphic,
    validate,
)
from .model import DendriteModel, ModelVertex, new_model
from .homogeneity import (
    LazyAutomorphism,
    PartialIso,
    apply,
    build_automorphism,
    double_transitivity_check,
    extend_one_point,
    orbit_equal,
    stabilizer_order,
    weak_two_transitivity_check,
)
from .semilinear import (
    Completion,
    Poset,
    SemiLinearOrder,
    check_idempotent,
    check_meet_complete,
    completion,
    full_down_chains,
    is_semilinear,
    order_from_end,
    reconstruct_from_dense,
    topology_and_separation,
)
from .reconstruct import (
    betweenness,
    betweenness_via_common_arc,
    common_arc,
    stabilizer_witness,
)

__version__ = "0.1.0"
