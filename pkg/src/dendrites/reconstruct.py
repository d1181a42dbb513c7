"""Ternary relations recovering the tree structure from group data.

The betweenness relation "x lies on the arc from y to z" can be reduced
to the weaker relation "three points lie on a common arc", which in turn
is visible to the automorphism group through stabilizers: three points
fail to share an arc exactly when the center of their tripod is a fourth
definable point that every automorphism fixing them must fix.  These
predicates, with explicit witness construction by model extension, are
the combinatorial engine of reconstructing the dendrite from its group.
"""

from __future__ import annotations

from .labels import END
from .model import DendriteModel


def common_arc(model: DendriteModel, x, y, z) -> bool:
    """True iff one of the three vertices lies on the arc of the other two."""
    return model.median(x, y, z) in (x, y, z)


def betweenness(model: DendriteModel, x, y, z) -> bool:
    """True iff x lies on the arc from y to z."""
    return x in model.arc(y, z)


def stabilizer_witness(model: DendriteModel, x, y, z):
    """The definable fourth point fixed by everything fixing x, y, z.

    For pairwise distinct vertices, returns the median when it differs
    from all three (the tripod center), and None when the three lie on
    a common arc.  A witness exists iff NOT common_arc(x, y, z).
    """
    if len({x, y, z}) != 3:
        raise ValueError("vertices must be pairwise distinct")
    w = model.median(x, y, z)
    return None if w in (x, y, z) else w


def _arc_projections(model: DendriteModel, arc_vertices) -> dict:
    """First-point projection of every vertex onto the given arc."""
    proj = {p: p for p in arc_vertices}
    queue = list(arc_vertices)
    while queue:
        u = queue.pop()
        for w in model.neighbors(u):
            if w not in proj:
                proj[w] = proj[u]
                queue.append(w)
    return proj


def betweenness_via_common_arc(model: DendriteModel, x, y, z, budget: int = 2) -> bool:
    """Decide betweenness using only the common-arc relation.

    x lies on the arc from y to z iff for every w, {w,x,y} or {w,x,z}
    lies on a common arc.  The universal quantifier is bounded: existing
    vertices are scanned for a refuting w; if none is found and x is off
    the arc, the refuter is built explicitly with at most `budget`
    extension moves (a branch vertex strictly between x and its
    projection to the arc, carrying a sprouted witness that no arc
    containing that segment can pass).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    # {w,a,b} share an arc iff w projects onto arc(a,b) at w itself
    # (w between a and b) or at an extremity.  One sweep per arc gives
    # the projections of every vertex at once.
    proj_xy = _arc_projections(model, model.arc(x, y))
    proj_xz = _arc_projections(model, model.arc(x, z))
    for w in model.vertices():
        on_xy = proj_xy[w] == w or proj_xy[w] in (x, y)
        on_xz = proj_xz[w] == w or proj_xz[w] in (x, z)
        if not on_xy and not on_xz:
            return False
    if x in model.arc(y, z):
        return True
    p = model.first_point(x, model.arc(y, z))
    segment = model.arc(x, p)
    steps_left = budget
    b = None
    for cand in segment[1:-1]:
        if not model.is_saturated(cand):
            b = cand
            break
    if b is None:
        if steps_left < 2:
            raise RuntimeError("extension budget exhausted before a witness was built")
        b = model.insert_on_edge((segment[0], segment[1]), model.sig.min_branch_order)
        steps_left -= 1
    if steps_left < 1:
        raise RuntimeError("extension budget exhausted before a witness was built")
    w = model.sprout(b, END)
    if common_arc(model, w, x, y) or common_arc(model, w, x, z):
        raise AssertionError("constructed witness fails to refute; this is a bug")
    return False
