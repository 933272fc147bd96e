"""Combinatorial triangulations of compact oriented surfaces.

A triangulation is a list of triangles, each a cyclic triple of oriented
edge slots.  Triangles are traversed counterclockwise with respect to a
fixed global orientation; an interior edge therefore appears exactly twice
with opposite signs, a boundary edge exactly once.

The canonical closed model is the one-vertex triangulation obtained by
coning the 4g-gon with boundary word a0 b0 a0^-1 b0^-1 ... from one polygon
vertex.  Bounded surfaces use the analogous polygon with one r h r^-1
syllable per boundary component.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SurfaceSpec:
    """Genus and boundary count; complexity is xi = 3g + b - 3."""

    genus: int
    boundary_count: int = 0

    def __post_init__(self):
        if self.genus < 0 or self.boundary_count < 0:
            raise ValueError("genus and boundary count must be non-negative")

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.boundary_count - 3

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    def __str__(self):
        return f"S_{self.genus},{self.boundary_count}"


@dataclass(frozen=True)
class PolygonData:
    """Layout of the fundamental polygon behind a standard triangulation.

    ``sides[m] = (edge, sign)``: traversing polygon side m counterclockwise
    runs along ``edge`` with (+1) or against (-1) its global orientation.
    ``side_letters[m]`` is the boundary-word letter, e.g. "a0" or "a0~".
    Side m belongs to triangle ``side_triangle[m]`` at local side index
    ``side_slot[m]``.
    """

    num_sides: int
    sides: tuple
    side_letters: tuple
    side_triangle: tuple
    side_slot: tuple


class Triangulation:
    """A triangulated compact oriented surface.

    triangles: tuple of ((e0,s0),(e1,s1),(e2,s2)); side j runs from corner j
    to corner j+1 (mod 3) in the counterclockwise traversal.
    """

    def __init__(self, spec: SurfaceSpec, triangles, boundary_edges=(),
                 labels=None, polygon: PolygonData | None = None):
        self.spec = spec
        self.triangles = tuple(tuple((int(e), int(s)) for e, s in tri)
                               for tri in triangles)
        self.boundary_edges = frozenset(int(e) for e in boundary_edges)
        self.num_edges = 1 + max(e for tri in self.triangles for e, _ in tri)
        self.labels = tuple(labels) if labels is not None else tuple(
            f"e{i}" for i in range(self.num_edges))
        self.polygon = polygon
        # edge -> list of (triangle index, side index), in triangle order
        inc = [[] for _ in range(self.num_edges)]
        for t, tri in enumerate(self.triangles):
            for j, (e, _) in enumerate(tri):
                inc[e].append((t, j))
        self.edge_incidences = tuple(tuple(x) for x in inc)
        self._vertex_orbits = None
        self._validate()

    # -- structure ---------------------------------------------------------

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def side(self, t: int, j: int):
        return self.triangles[t][j % 3]

    def edge_of(self, t: int, j: int) -> int:
        return self.triangles[t][j % 3][0]

    def sign_of(self, t: int, j: int) -> int:
        return self.triangles[t][j % 3][1]

    def other_incidence(self, t: int, j: int):
        """The triangle side glued to side j of triangle t (None on boundary)."""
        e = self.edge_of(t, j)
        for inc in self.edge_incidences[e]:
            if inc != (t, j):
                return inc
        return None

    def corner_end(self, t: int, j: int, at_start: bool):
        """Edge end (edge, 0|1) of side j of t at its start or end corner.

        Side j runs corner j -> corner j+1; with sign +1 that is tail (0)
        to head (1) of the edge.
        """
        e, s = self.side(t, j)
        if s > 0:
            return (e, 0 if at_start else 1)
        return (e, 1 if at_start else 0)

    def vertex_orbits(self):
        """Partition of edge ends into surface vertices.

        Returns (orbit_of, num_orbits, orbit_sizes_in_corners) where
        orbit_of maps (edge, end) -> orbit id and the size counts triangle
        corners in the orbit (the valence of the vertex link).
        """
        if self._vertex_orbits is not None:
            return self._vertex_orbits
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent.setdefault(x, x)
            parent.setdefault(y, y)
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for e in range(self.num_edges):
            for end in (0, 1):
                parent.setdefault((e, end), (e, end))
        for t in range(self.num_triangles):
            for j in range(3):
                # corner j+1 joins the end of side j with the start of side j+1
                union(self.corner_end(t, j, at_start=False),
                      self.corner_end(t, (j + 1) % 3, at_start=True))
        roots = {}
        orbit_of = {}
        for key in parent:
            r = find(key)
            if r not in roots:
                roots[r] = len(roots)
            orbit_of[key] = roots[r]
        corner_counts = [0] * len(roots)
        for t in range(self.num_triangles):
            for j in range(3):
                corner_counts[orbit_of[self.corner_end(t, j, at_start=True)]] += 1
        self._vertex_orbits = (orbit_of, len(roots), tuple(corner_counts))
        return self._vertex_orbits

    @property
    def num_vertices(self) -> int:
        return self.vertex_orbits()[1]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_triangles

    def boundary_vertex_orbits(self):
        """Orbit ids of vertices lying on the surface boundary."""
        orbit_of, _, _ = self.vertex_orbits()
        out = set()
        for e in self.boundary_edges:
            out.add(orbit_of[(e, 0)])
            out.add(orbit_of[(e, 1)])
        return out

    # -- validation --------------------------------------------------------

    def _validate(self):
        counts = [0] * self.num_edges
        signed = [0] * self.num_edges
        for tri in self.triangles:
            for e, s in tri:
                if s not in (-1, 1):
                    raise ValueError("edge signs must be +-1")
                counts[e] += 1
                signed[e] += s
        for e in range(self.num_edges):
            if e in self.boundary_edges:
                if counts[e] != 1:
                    raise ValueError(f"boundary edge {e} must occur once, "
                                     f"occurs {counts[e]} times")
            else:
                if counts[e] != 2:
                    raise ValueError(f"interior edge {e} must occur twice, "
                                     f"occurs {counts[e]} times")
                if signed[e] != 0:
                    raise ValueError(f"edge {e} glued without orientation "
                                     "reversal; surface would be non-orientable")
        # connectivity of the gluing graph
        if self.num_triangles == 0:
            raise ValueError("empty triangulation")
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for j in range(3):
                other = self.other_incidence(t, j)
                if other is not None and other[0] not in seen:
                    seen.add(other[0])
                    stack.append(other[0])
        if len(seen) != self.num_triangles:
            raise ValueError("gluing graph is not connected")
        if self.euler_characteristic() != self.spec.euler_characteristic:
            raise ValueError(
                f"Euler characteristic {self.euler_characteristic()} does not "
                f"match {self.spec}: expected {self.spec.euler_characteristic}")

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        return {
            "surface": {"genus": self.spec.genus,
                        "boundary": self.spec.boundary_count},
            "triangles": [[[e, s] for e, s in tri] for tri in self.triangles],
            "boundary_edges": sorted(self.boundary_edges),
            "labels": list(self.labels),
        }

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self.spec == other.spec
                and self.triangles == other.triangles
                and self.boundary_edges == other.boundary_edges)

    def __hash__(self):
        return hash((self.spec, self.triangles, self.boundary_edges))

    def __repr__(self):
        return (f"Triangulation({self.spec}, {self.num_triangles} triangles, "
                f"{self.num_edges} edges)")


def _fan_triangulation(spec, side_specs, labels):
    """Cone a polygon from vertex P0 and assemble the Triangulation.

    side_specs: list of (edge, sign) for polygon sides s0..s_{N-1}, read
    counterclockwise.  Diagonals d_k = P0->P_k (k = 2..N-2) get fresh edge
    indices after the named edges.
    """
    n = len(side_specs)
    named = 1 + max(e for e, _ in side_specs)
    diag = {k: named + (k - 2) for k in range(2, n - 1)}
    labels = list(labels) + [f"d{k}" for k in range(2, n - 1)]

    def side_a(j):
        # P0 -> Pj
        return side_specs[0] if j == 1 else (diag[j], 1)

    def side_c(j):
        # P_{j+1} -> P0
        return side_specs[n - 1] if j == n - 2 else (diag[j + 1], -1)

    triangles = []
    side_triangle = [None] * n
    side_slot = [None] * n
    for j in range(1, n - 1):
        triangles.append((side_a(j), side_specs[j], side_c(j)))
        side_triangle[j] = j - 1
        side_slot[j] = 1
    side_triangle[0], side_slot[0] = 0, 0
    side_triangle[n - 1], side_slot[n - 1] = n - 3, 2
    return triangles, labels, side_triangle, side_slot


def build_standard_triangulation(spec: SurfaceSpec) -> Triangulation:
    """The fixed canonical triangulation for a surface spec.

    Closed case: the one-vertex fan triangulation of the 4g-gon with
    boundary word prod_i a_i b_i a_i^-1 b_i^-1 (6g-3 edges, 4g-2 triangles).
    Bounded case: the fan triangulation of the polygon with word
    prod_i a_i b_i a_i^-1 b_i^-1 prod_j r_j h_j r_j^-1, where each h_j is a
    boundary edge.  Deterministic: identical output across runs.
    """
    g, b = spec.genus, spec.boundary_count
    if spec.complexity < 1:
        raise ValueError(f"complexity {spec.complexity} < 1: {spec} is below "
                         "the curve-graph regime (torus and simpler rejected)")
    sides = []
    letters = []
    labels = []
    for i in range(g):
        a, bb = 2 * i, 2 * i + 1
        sides += [(a, 1), (bb, 1), (a, -1), (bb, -1)]
        letters += [f"a{i}", f"b{i}", f"a{i}~", f"b{i}~"]
        labels += [f"a{i}", f"b{i}"]
    base = 2 * g
    boundary_edges = []
    for j in range(b):
        r, h = base + 2 * j, base + 2 * j + 1
        sides += [(r, 1), (h, 1), (r, -1)]
        letters += [f"r{j}", f"h{j}", f"r{j}~"]
        labels += [f"r{j}", f"h{j}"]
        boundary_edges.append(h)
    triangles, labels, side_triangle, side_slot = _fan_triangulation(
        spec, sides, labels)
    polygon = PolygonData(
        num_sides=len(sides), sides=tuple(sides), side_letters=tuple(letters),
        side_triangle=tuple(side_triangle), side_slot=tuple(side_slot))
    return Triangulation(spec, triangles, boundary_edges=boundary_edges,
                         labels=labels, polygon=polygon)
