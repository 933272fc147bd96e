"""Simple closed curves in normal coordinates.

A multicurve is stored as one non-negative integer weight per edge: the
number of transverse intersections with that edge.  Inside each triangle
the weights resolve into normal arcs cutting the three corners; the corner
opposite side j receives (w_{j+1} + w_{j+2} - w_j) / 2 arcs, which forces
the triangle inequality and the even-parity matching condition.

Weight vectors are the canonical equality test: reduced normal multicurves
(no vertex-linking components) correspond bijectively to admissible weight
vectors, so two curves are isotopic iff their canonical weights agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .triangulation import SurfaceSpec, Triangulation, build_standard_triangulation


class NonRealizableWeights(ValueError):
    """Weight vector that cannot be resolved into normal arcs."""


@dataclass(frozen=True)
class NormalCurve:
    """A multicurve (usually a single scc) in normal coordinates."""

    triangulation: Triangulation
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.triangulation.num_edges:
            raise ValueError(
                f"expected {self.triangulation.num_edges} weights, "
                f"got {len(self.weights)}")

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def is_empty(self) -> bool:
        return all(w == 0 for w in self.weights)

    def to_json_dict(self):
        spec = self.triangulation.spec
        return {"surface": {"genus": spec.genus,
                            "boundary": spec.boundary_count},
                "weights": list(self.weights)}

    @staticmethod
    def from_json_dict(d, triangulation: Triangulation | None = None):
        spec = SurfaceSpec(int(d["surface"]["genus"]),
                           int(d["surface"].get("boundary", 0)))
        if triangulation is None:
            triangulation = build_standard_triangulation(spec)
        elif triangulation.spec != spec:
            raise ValueError(f"curve spec {spec} does not match "
                             f"triangulation {triangulation.spec}")
        return NormalCurve(triangulation, tuple(int(w) for w in d["weights"]))

    def __repr__(self):
        return f"NormalCurve({self.triangulation.spec}, {self.weights})"


def corner_counts(tri: Triangulation, weights, t: int):
    """Arc counts at the three corners of triangle t, or raise."""
    w = [weights[tri.edge_of(t, j)] for j in range(3)]
    out = []
    for c in range(3):
        # corner c sits between sides c-1 and c
        n = w[(c - 1) % 3] + w[c] - w[(c + 1) % 3]
        if n < 0 or n % 2:
            raise NonRealizableWeights(
                f"triangle {t} with side weights {tuple(w)} admits no normal "
                "arc resolution"
                + (" (triangle inequality)" if n < 0 else " (parity)"))
        out.append(n // 2)
    return tuple(out)


def validate_weights(tri: Triangulation, weights):
    if len(weights) != tri.num_edges:
        raise ValueError(f"expected {tri.num_edges} weights")
    for e, w in enumerate(weights):
        if w < 0:
            raise NonRealizableWeights(f"negative weight on edge {e}")
        if w and e in tri.boundary_edges:
            raise NonRealizableWeights(
                f"closed curves cannot cross boundary edge {e}")
    for t in range(tri.num_triangles):
        corner_counts(tri, weights, t)


@dataclass(frozen=True)
class Step:
    """One normal arc of a traced curve: triangle t, entering through side
    entry_slot and leaving through exit_slot (equal slots = a return arc,
    which only occurs in unreduced paths)."""

    t: int
    entry_slot: int
    exit_slot: int

    @property
    def is_return(self) -> bool:
        return self.entry_slot == self.exit_slot

    @property
    def corner(self) -> int:
        p, q = self.entry_slot, self.exit_slot
        if p == q:
            raise ValueError("return arc cuts no corner")
        return q if (q - p) % 3 == 1 else p


class CurvePath:
    """A closed transversal path: cyclic visits to edges joined by arcs.

    ``edges[k]`` is the edge crossed by visit k and ``steps[k]`` the arc
    from visit k to visit k+1 (cyclically).  ``indices[k]``, when present,
    is the position of visit k among all points on that edge in the
    canonical normal realization.
    """

    def __init__(self, tri: Triangulation, edges, steps, indices=None):
        self.tri = tri
        self.edges = list(edges)
        self.steps = list(steps)
        self.indices = list(indices) if indices is not None else None
        if len(self.edges) != len(self.steps):
            raise ValueError("cyclic path needs one step per visit")

    def __len__(self):
        return len(self.edges)

    def weights(self):
        w = [0] * self.tri.num_edges
        for e in self.edges:
            w[e] += 1
        return tuple(w)

    def step_end_pair(self, k):
        """Edge ends hugged by arc k at its entry and exit crossings.

        A corner arc in triangle t cutting corner c touches the c-adjacent
        end of both its sides; consecutive arcs hugging the same edge end
        wind around a single vertex.
        """
        s = self.steps[k]
        tri = self.tri
        c = s.corner
        ends = {}
        for slot in (s.entry_slot, s.exit_slot):
            if slot == c % 3:
                ends[slot] = tri.corner_end(s.t, slot, at_start=True)
            else:  # slot == c-1: corner c is that side's end corner
                ends[slot] = tri.corner_end(s.t, slot, at_start=False)
        return ends[s.entry_slot], ends[s.exit_slot]

    def is_vertex_linking(self) -> bool:
        """True iff the path is the link of a single interior vertex."""
        n = len(self)
        if n == 0:
            return False
        for s in self.steps:
            if s.is_return:
                return False
        for k in range(n):
            _, exit_end = self.step_end_pair(k)
            entry_end, _ = self.step_end_pair((k + 1) % n)
            if exit_end != entry_end:
                return False
        orbit_of, _, corner_counts_ = self.tri.vertex_orbits()
        v = orbit_of[self.step_end_pair(0)[0]]
        if v in self.tri.boundary_vertex_orbits():
            return False
        return n == corner_counts_[v]


def _arc_partner(tri, weights, t, slot, rank):
    """Partner of the point at traversal rank ``rank`` on side ``slot`` of
    triangle t, following the forced nested pairing of normal arcs.

    Returns (other_slot, other_rank).
    """
    n = corner_counts(tri, weights, t)
    w = [weights[tri.edge_of(t, j)] for j in range(3)]
    c_here = n[slot]  # arcs at corner `slot` (start corner of this side)
    if rank < c_here:
        other = (slot - 1) % 3
        return other, w[other] - 1 - rank
    k = w[slot] - 1 - rank  # rank from the side's end corner
    other = (slot + 1) % 3
    return other, k


def _rank_to_index(tri, weights, t, slot, rank):
    e, s = tri.side(t, slot)
    return rank if s > 0 else weights[e] - 1 - rank


def _index_to_rank(tri, weights, t, slot, index):
    e, s = tri.side(t, slot)
    return index if s > 0 else weights[e] - 1 - index


def trace_components(tri: Triangulation, weights):
    """Trace the normal multicurve of an admissible weight vector.

    Returns the list of components as CurvePaths with canonical indices.
    Deterministic: components appear in order of their smallest point.
    """
    validate_weights(tri, weights)
    visited = set()
    components = []
    for e0 in range(tri.num_edges):
        for i0 in range(weights[e0]):
            if (e0, i0) in visited:
                continue
            edges, indices, steps = [], [], []
            # enter the first incident triangle of e0
            t, slot = tri.edge_incidences[e0][0]
            e, i = e0, i0
            while True:
                visited.add((e, i))
                edges.append(e)
                indices.append(i)
                rank = _index_to_rank(tri, weights, t, slot, i)
                slot2, rank2 = _arc_partner(tri, weights, t, slot, rank)
                steps.append(Step(t, slot, slot2))
                e2 = tri.edge_of(t, slot2)
                i2 = _rank_to_index(tri, weights, t, slot2, rank2)
                nxt = tri.other_incidence(t, slot2)
                if nxt is None:
                    raise NonRealizableWeights(
                        f"component runs into boundary edge {e2}")
                t, slot = nxt
                e, i = e2, i2
                if (e, i) == (e0, i0):
                    break
            components.append(CurvePath(tri, edges, steps, indices))
    return components


def canonicalize(curve: NormalCurve) -> NormalCurve:
    """Reduced normal form: vertex-linking components removed.

    Idempotent; rejects non-realizable weight vectors with a diagnostic
    naming the offending triangle.
    """
    comps = trace_components(curve.triangulation, curve.weights)
    w = [0] * curve.triangulation.num_edges
    for c in comps:
        if c.is_vertex_linking():
            continue
        for e in c.edges:
            w[e] += 1
    return NormalCurve(curve.triangulation, tuple(w))


def is_canonical(curve: NormalCurve) -> bool:
    return canonicalize(curve).weights == curve.weights


def is_connected_scc(curve: NormalCurve) -> bool:
    """True iff the curve traces to exactly one essential closed component."""
    comps = trace_components(curve.triangulation, curve.weights)
    return len(comps) == 1 and not comps[0].is_vertex_linking()


def component_curves(curve: NormalCurve):
    """The components of a multicurve as individual NormalCurves."""
    return [NormalCurve(curve.triangulation, c.weights())
            for c in trace_components(curve.triangulation, curve.weights)]


def empty_curve(tri: Triangulation) -> NormalCurve:
    return NormalCurve(tri, (0,) * tri.num_edges)


# -- construction in the fundamental polygon --------------------------------


def curve_from_polygon_sides(tri: Triangulation, exit_sides) -> CurvePath:
    """Closed path drawn in the fundamental polygon of a fan triangulation.

    ``exit_sides`` lists, cyclically, the polygon sides through which the
    curve leaves the polygon; after leaving through side m it re-enters
    through the partner side carrying the same edge and travels by a chord
    to the next exit, crossing the intervening fan diagonals.  The chords
    must be realizable disjointly (standard curves below are).
    """
    poly = tri.polygon
    if poly is None:
        raise ValueError("triangulation carries no polygon data")
    n = poly.num_sides

    def partner(m):
        e, _ = poly.sides[m]
        for m2 in range(n):
            if m2 != m and poly.sides[m2][0] == e:
                return m2
        raise ValueError(f"side {m} carries boundary edge; curve cannot exit")

    exits = list(exit_sides)
    visits, steps = [], []  # steps[j] leads into visits[j] during assembly
    for i, v in enumerate(exits):
        u = partner(exits[i - 1])  # re-entry side of the previous exit
        if u < v:
            ks = [k for k in range(u + 1, v + 1) if 2 <= k <= n - 2]
        else:
            ks = [k for k in range(u, v, -1) if 2 <= k <= n - 2]
        cur_t, cur_slot = poly.side_triangle[u], poly.side_slot[u]
        for k in ks:
            # d_k separates fan triangles Delta_{k-1} (list k-2, slot 2)
            # and Delta_k (list k-1, slot 0)
            if cur_t == k - 2:
                steps.append(Step(cur_t, cur_slot, 2))
                cur_t, cur_slot = k - 1, 0
            elif cur_t == k - 1:
                steps.append(Step(cur_t, cur_slot, 0))
                cur_t, cur_slot = k - 2, 2
            else:
                raise ValueError(f"chord from side {u} to side {v} leaves "
                                 "the fan strip")
            visits.append(tri.edge_of(cur_t, cur_slot))
        t_v, slot_v = poly.side_triangle[v], poly.side_slot[v]
        if cur_t != t_v:
            raise ValueError(f"chord from side {u} to side {v} does not "
                             "close inside one triangle")
        steps.append(Step(cur_t, cur_slot, slot_v))
        visits.append(poly.sides[v][0])
    # re-align: steps[j] currently joins visits[j-1] -> visits[j]
    steps = steps[1:] + steps[:1]
    return CurvePath(tri, visits, steps)
