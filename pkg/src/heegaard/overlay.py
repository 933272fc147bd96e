"""Realized curve systems: overlays, minimal position, regions.

A System places several curves on one triangulation at once.  Each curve is
traced into strands (closed transversal paths); every edge records the
linear order of all strand points crossing it, and inside each triangle the
strands appear as straight chords between boundary points of the model
triangle (0,0),(1,0),(0,1).  All geometry is exact rational.

Crossings between distinct curves are read off the chord arrangement.
``reduce()`` removes bigons (complement regions that are disks with exactly
two corners) until every pair of curves is in minimal position, so crossing
counts afterwards are geometric intersection numbers.  ``Regions`` glues
the per-triangle cells into the complement regions of any chosen set of
walls and computes Euler characteristics and boundary circuits; that drives
complements, filling checks, band sums, neighborhood boundaries and the
subsurface machinery.
"""

from __future__ import annotations

import bisect
from fractions import Fraction

from .curves import CurvePath, NormalCurve, Step, canonicalize, trace_components
from .geom import direction_key, point_on_segment, segment_intersection_params

_F0, _F1 = Fraction(0), Fraction(1)
_CORNER_COORDS = ((_F0, _F0), (_F1, _F0), (_F0, _F1))


class Crossing:
    """Transverse intersection of chords ``a`` and ``b`` in triangle t.

    a, b are (strand, step) with a < b; param_a/param_b locate the point
    along each chord from its tail visit; sign is the orientation of the
    frame (direction_a, direction_b).
    """

    __slots__ = ("t", "a", "b", "param_a", "param_b", "point", "sign")

    def __init__(self, t, a, b, param_a, param_b, point, sign):
        self.t, self.a, self.b = t, a, b
        self.param_a, self.param_b = param_a, param_b
        self.point = point
        self.sign = sign

    def strands(self):
        return frozenset((self.a[0], self.b[0]))

    def chord_of(self, s):
        if self.a[0] == s:
            return self.a
        if self.b[0] == s:
            return self.b
        raise KeyError(s)

    def param_of(self, s):
        return self.param_a if self.a[0] == s else self.param_b

    def __repr__(self):
        return f"Crossing(t={self.t}, {self.a}x{self.b}, sign={self.sign})"


class Strand:
    """One closed component of a curve placed in the system."""

    __slots__ = ("curve", "pids", "edges", "steps")

    def __init__(self, curve, pids, edges, steps):
        self.curve = curve
        self.pids = list(pids)
        self.edges = list(edges)
        self.steps = list(steps)

    def __len__(self):
        return len(self.pids)


class TriangleArrangement:
    """Planar subdivision of one triangle by the chords inside it.

    Half-edge structure: ``next[h]`` walks each face keeping it on the
    left; faces carrying an outer boundary half-edge form the exterior.
    """

    def __init__(self, system, t):
        self.t = t
        tri = system.tri
        self.crossings = system.triangle_crossings(t)
        vcoord = {("c", j): _CORNER_COORDS[j] for j in range(3)}
        side_pids = []
        for j in range(3):
            pts = system.side_points(t, j)
            side_pids.append(pts)
            for pid in pts:
                vcoord[("p", pid)] = system.point_coords(t, j, pid)
        for xi, x in enumerate(self.crossings):
            vcoord[("x", xi)] = x.point
        self.vcoord = vcoord

        self.org, self.dst, self.kind, self.info, self.twin = [], [], [], [], []

        def add_pair(u, v, kind, info_uv, info_vu):
            h1 = len(self.org)
            self.org += [u, v]
            self.dst += [v, u]
            self.kind += [kind, kind]
            self.info += [info_uv, info_vu]
            self.twin += [h1 + 1, h1]
            return h1, h1 + 1

        # side segments; gap g of edge e lies between edge ranks g-1 and g
        self.gap_inner = {}
        for j in range(3):
            e, sgn = tri.side(t, j)
            m = len(side_pids[j])
            events = ([("c", j)] + [("p", p) for p in side_pids[j]]
                      + [("c", (j + 1) % 3)])
            for i in range(m + 1):
                g = i if sgn > 0 else m - i
                inner, outer = add_pair(events[i], events[i + 1], "side",
                                        ("inner", e, g, j), ("outer", e, g, j))
                if (e, g) in self.gap_inner:
                    raise RuntimeError("edge repeated inside one triangle")
                self.gap_inner[(e, g)] = inner
        # chord pieces
        self.chord_pieces = {}
        n_side = len(self.org)
        per_chord = {}
        for xi, x in enumerate(self.crossings):
            per_chord.setdefault(x.a, []).append((x.param_a, xi))
            per_chord.setdefault(x.b, []).append((x.param_b, xi))
        for si, k in sorted(system.steps_in_triangle(t)):
            s = system.strands[si]
            p_tail = s.pids[k]
            p_head = s.pids[(k + 1) % len(s)]
            mids = sorted(per_chord.get((si, k), []))
            events = ([("p", p_tail)] + [("x", xi) for _, xi in mids]
                      + [("p", p_head)])
            pieces = []
            for i in range(len(events) - 1):
                fwd, bwd = add_pair(events[i], events[i + 1], "chord",
                                    ("fwd", si, k, i), ("bwd", si, k, i))
                pieces.append((fwd, bwd))
            self.chord_pieces[(si, k)] = pieces

        # rotation: outgoing half-edges sorted counterclockwise per vertex
        outgoing = {}
        for h in range(len(self.org)):
            outgoing.setdefault(self.org[h], []).append(h)
        self.next = [None] * len(self.org)
        prev_in_rotation = {}
        for v, hs in outgoing.items():
            hs.sort(key=lambda h: direction_key(
                (vcoord[self.dst[h]][0] - vcoord[v][0],
                 vcoord[self.dst[h]][1] - vcoord[v][1])))
            for i, h in enumerate(hs):
                prev_in_rotation[h] = hs[i - 1]
        for h in range(len(self.org)):
            self.next[h] = prev_in_rotation[self.twin[h]]

        # faces
        self.face = [None] * len(self.org)
        nfaces = 0
        for h0 in range(len(self.org)):
            if self.face[h0] is not None:
                continue
            h, members = h0, []
            exterior = False
            while self.face[h] is None:
                self.face[h] = nfaces
                members.append(h)
                if self.kind[h] == "side" and self.info[h][0] == "outer":
                    exterior = True
                h = self.next[h]
            if exterior:
                for h in members:
                    self.face[h] = -1
            else:
                nfaces += 1
        self.num_cells = nfaces

    def piece_halves(self, si, k, piece):
        return self.chord_pieces[(si, k)][piece]


class System:
    """Several curves realized together on one triangulation."""

    def __init__(self, tri, curves):
        self.tri = tri
        self.curves = list(curves)
        for c in self.curves:
            if c.triangulation != tri:
                raise ValueError("curves live on different triangulations")
        self.strands = []
        self._next_pid = 0
        self.pid_edge = {}
        merged = [[] for _ in range(tri.num_edges)]
        for ci, c in enumerate(self.curves):
            for comp in trace_components(tri, c.weights):
                pids = []
                for k, e in enumerate(comp.edges):
                    pid = self._next_pid
                    self._next_pid += 1
                    self.pid_edge[pid] = e
                    pids.append(pid)
                    key = Fraction(comp.indices[k] + 1, c.weights[e] + 1)
                    merged[e].append((key, ci, comp.indices[k], pid))
                self.strands.append(Strand(ci, pids, comp.edges, comp.steps))
        self.edge_order = []
        for e in range(tri.num_edges):
            merged[e].sort(key=lambda x: x[:3])
            self.edge_order.append([m[3] for m in merged[e]])
        self._pid_rank = None
        self._steps_by_tri = None
        self._tri_arr = {}
        self._tri_cross = {}

    # -- bookkeeping ---------------------------------------------------

    def curve_strands(self, ci):
        return [si for si, s in enumerate(self.strands) if s.curve == ci]

    def pid_rank(self, pid):
        if self._pid_rank is None:
            self._pid_rank = {}
            for e in range(self.tri.num_edges):
                for r, p in enumerate(self.edge_order[e]):
                    self._pid_rank[p] = r
        return self._pid_rank[pid]

    def steps_in_triangle(self, t):
        if self._steps_by_tri is None:
            self._steps_by_tri = [[] for _ in range(self.tri.num_triangles)]
            for si, s in enumerate(self.strands):
                for k, st in enumerate(s.steps):
                    self._steps_by_tri[st.t].append((si, k))
        return self._steps_by_tri[t]

    def _invalidate(self, triangles=None):
        self._pid_rank = None
        self._steps_by_tri = None
        if triangles is None:
            self._tri_arr.clear()
            self._tri_cross.clear()
        else:
            for t in triangles:
                self._tri_arr.pop(t, None)
                self._tri_cross.pop(t, None)

    def arrangement(self, t) -> TriangleArrangement:
        if t not in self._tri_arr:
            self._tri_arr[t] = TriangleArrangement(self, t)
        return self._tri_arr[t]

    # -- per-triangle layout --------------------------------------------

    def side_points(self, t, j):
        e, s = self.tri.side(t, j)
        pts = self.edge_order[e]
        return pts if s > 0 else pts[::-1]

    def point_coords(self, t, j, pid):
        e, sgn = self.tri.side(t, j)
        m = len(self.edge_order[e])
        r = self.pid_rank(pid)
        if sgn < 0:
            r = m - 1 - r
        tt = Fraction(r + 1, m + 1)
        if j == 0:
            return (tt, _F0)
        if j == 1:
            return (1 - tt, tt)
        return (_F0, 1 - tt)

    def _chord_records(self, t):
        """(si, k, pos_tail, pos_head, xy_tail, xy_head) per chord in t."""
        offs, off = [], 0
        for j in range(3):
            offs.append(off + 1)
            off += 1 + len(self.edge_order[self.tri.edge_of(t, j)])
        side_index = {}
        for j in range(3):
            for idx, pid in enumerate(self.side_points(t, j)):
                side_index[pid] = (j, offs[j] + idx)
        out = []
        for si, k in self.steps_in_triangle(t):
            s = self.strands[si]
            p, q = s.pids[k], s.pids[(k + 1) % len(s)]
            jp, pos_p = side_index[p]
            jq, pos_q = side_index[q]
            out.append((si, k, pos_p, pos_q,
                        self.point_coords(t, jp, p),
                        self.point_coords(t, jq, q)))
        return out

    def triangle_crossings(self, t):
        if t in self._tri_cross:
            return self._tri_cross[t]
        by_curve = {}
        for ch in self._chord_records(t):
            by_curve.setdefault(self.strands[ch[0]].curve, []).append(ch)
        found = []
        cids = sorted(by_curve)
        for i in range(len(cids)):
            for j in range(i + 1, len(cids)):
                fam_a, fam_b = by_curve[cids[i]], by_curve[cids[j]]
                probe, other = ((fam_a, fam_b) if len(fam_a) <= len(fam_b)
                                else (fam_b, fam_a))
                endpoints = []
                for ch in other:
                    lo, hi = min(ch[2], ch[3]), max(ch[2], ch[3])
                    endpoints.append((lo, hi, ch))
                    endpoints.append((hi, lo, ch))
                endpoints.sort(key=lambda x: x[0])
                keys = [x[0] for x in endpoints]
                for ch in probe:
                    lo, hi = min(ch[2], ch[3]), max(ch[2], ch[3])
                    seen = set()
                    for idx in range(bisect.bisect_right(keys, lo),
                                     bisect.bisect_left(keys, hi)):
                        pos, partner, och = endpoints[idx]
                        if lo < partner < hi:
                            continue  # nested: no crossing
                        key = (och[0], och[1])
                        if key in seen:
                            continue
                        seen.add(key)
                        found.append(self._make_crossing(t, ch, och))
        found.sort(key=lambda x: (x.a, x.b))
        self._tri_cross[t] = found
        return found

    def _make_crossing(self, t, ch1, ch2):
        if (ch1[0], ch1[1]) > (ch2[0], ch2[1]):
            ch1, ch2 = ch2, ch1
        hit = segment_intersection_params(ch1[4], ch1[5], ch2[4], ch2[5])
        if hit is None:
            raise RuntimeError(
                f"combinatorial crossing without geometric one in triangle {t}")
        s_param, t_param = hit
        pt = point_on_segment(ch1[4], ch1[5], s_param)
        d1 = (ch1[5][0] - ch1[4][0], ch1[5][1] - ch1[4][1])
        d2 = (ch2[5][0] - ch2[4][0], ch2[5][1] - ch2[4][1])
        det = d1[0] * d2[1] - d1[1] * d2[0]
        return Crossing(t, (ch1[0], ch1[1]), (ch2[0], ch2[1]),
                        s_param, t_param, pt, 1 if det > 0 else -1)

    def all_crossings(self):
        out = []
        for t in range(self.tri.num_triangles):
            out.extend(self.triangle_crossings(t))
        return out

    def crossing_count(self, curve_i=None, curve_j=None):
        n = 0
        for x in self.all_crossings():
            ci = self.strands[x.a[0]].curve
            cj = self.strands[x.b[0]].curve
            if curve_i is None or {ci, cj} == {curve_i, curve_j}:
                n += 1
        return n

    def crossing_sign_sum(self, curve_i, curve_j):
        """Signed crossing sum with a directed wrt b (b = higher id order)."""
        total = 0
        for x in self.all_crossings():
            ci = self.strands[x.a[0]].curve
            cj = self.strands[x.b[0]].curve
            if {ci, cj} != {curve_i, curve_j}:
                continue
            total += x.sign if ci == curve_i else -x.sign
        return total

    def strand_crossing_sequence(self, si):
        """Crossings along strand si in traversal order."""
        s = self.strands[si]
        per_step = [[] for _ in range(len(s))]
        for k in range(len(s)):
            t = s.steps[k].t
            for x in self.triangle_crossings(t):
                if x.a == (si, k) or x.b == (si, k):
                    per_step[k].append((x.param_of(si), x))
        seq = []
        for k in range(len(s)):
            per_step[k].sort(key=lambda px: px[0])
            seq.extend(x for _, x in per_step[k])
        return seq

    # -- cell walking ----------------------------------------------------

    def glued_partner(self, t, h):
        """The inner half-edge across edge gap (e, g) from triangle t."""
        arr = self.arrangement(t)
        _, e, g, j = arr.info[h]
        other = self.tri.other_incidence(t, j)
        if other is None:
            return None
        t2, _ = other
        return t2, self.arrangement(t2).gap_inner[(e, g)]

    def wall_walk_next(self, t, h, is_wall):
        """Next wall half-edge along the region boundary, hopping across
        interior edge gaps and non-wall chord pieces.  Returns
        (t', h', hops) where hops lists (edge, gap, hug_vertex, into_tri).
        """
        hops = []
        arr = self.arrangement(t)
        w = arr.next[h]
        while True:
            kind = arr.kind[w]
            if kind == "side":
                tag, e, g, j = arr.info[w]
                if tag != "inner":
                    raise RuntimeError("region walk reached the exterior")
                part = self.glued_partner(t, w)
                if part is None:
                    return t, w, hops  # surface boundary wall
                hug = arr.org[w]
                t2, w2 = part
                hops.append((e, g, hug, t2))
                t = t2
                arr = self.arrangement(t)
                w = arr.next[w2]
            else:
                _, si, k, piece = arr.info[w]
                if is_wall(si, k, piece):
                    return t, w, hops
                w = arr.next[arr.twin[w]]

    # -- minimal position -------------------------------------------------

    def reduce(self, max_rounds=None):
        """Remove bigons until every curve pair is in minimal position."""
        rounds = 0
        while True:
            cand = self._find_bigon()
            if cand is None:
                return self
            self._remove_bigon(*cand)
            rounds += 1
            if max_rounds is not None and rounds > max_rounds:
                raise RuntimeError("bigon removal did not terminate")

    def _find_bigon(self):
        seqs = {}

        def seq(si):
            if si not in seqs:
                seqs[si] = self.strand_crossing_sequence(si)
            return seqs[si]

        for si in range(len(self.strands)):
            s_seq = seq(si)
            n = len(s_seq)
            for idx in range(n):
                x, y = s_seq[idx], s_seq[(idx + 1) % n]
                if x is y or x.strands() != y.strands() or x.sign == y.sign:
                    continue
                oi = x.a[0] if x.b[0] == si else x.b[0]
                if oi == si:
                    continue
                o_seq = seq(oi)
                m = len(o_seq)
                pos_x = next(i for i, c in enumerate(o_seq) if c is x)
                dirs = []
                if o_seq[(pos_x + 1) % m] is y:
                    dirs.append(1)
                if o_seq[(pos_x - 1) % m] is y:
                    dirs.append(-1)
                for o_dir in dirs:
                    # reroute the strand of the higher curve id, keeping
                    # lower curves (cutting systems etc.) in place
                    if self.strands[si].curve > self.strands[oi].curve:
                        cand = (si, oi, x, y, o_dir)
                    elif o_dir == 1:
                        cand = (oi, si, x, y, 1)
                    else:
                        cand = (oi, si, y, x, -1)
                    data = self._confirm_bigon(*cand)
                    if data is not None:
                        return data
        return None

    def _chord_end_direction(self, x, si, forward):
        """Direction at crossing x along strand si's chord, toward its head
        (forward) or tail."""
        s = self.strands[si]
        _, k = x.chord_of(si)
        t = x.t
        # endpoint coordinates of the chord
        for ch in self._chord_records(t):
            if ch[0] == si and ch[1] == k:
                tail, head = ch[4], ch[5]
                if forward:
                    return (head[0] - x.point[0], head[1] - x.point[1])
                return (tail[0] - x.point[0], tail[1] - x.point[1])
        raise KeyError((si, k))

    def _crossing_vertex(self, x):
        arr = self.arrangement(x.t)
        for xi, xc in enumerate(arr.crossings):
            if xc is x:
                return "x", xi
        raise KeyError(x)

    def _half_edge_at_crossing(self, x, si, forward):
        """Chord half-edge leaving x along strand si toward head/tail."""
        arr = self.arrangement(x.t)
        v = self._crossing_vertex(x)
        _, k = x.chord_of(si)
        pieces = arr.chord_pieces[(si, k)]
        for fwd, bwd in pieces:
            if forward and arr.org[fwd] == v:
                return fwd
            if not forward and arr.org[bwd] == v:
                return bwd
        raise RuntimeError("no chord half-edge at crossing")

    def _confirm_bigon(self, si, oi, x, y, o_dir):
        """Walk the candidate region between crossings x and y.

        Returns (si, oi, x, y, o_dir, region_cells) when the region is a
        disk whose only corners are x and y, else None.
        """
        h_a = self._half_edge_at_crossing(x, si, forward=True)
        h_b = self._half_edge_at_crossing(x, oi, forward=(o_dir == 1))
        # start along the strand whose counterclockwise successor at x is
        # the other; the face on its left is the candidate sector
        d_a = self._chord_end_direction(x, si, True)
        d_b = self._chord_end_direction(x, oi, o_dir == 1)
        det = d_a[0] * d_b[1] - d_a[1] * d_b[0]
        start = h_a if det > 0 else h_b
        walls = lambda *_: True
        corners = []
        t, h = x.t, start
        guard = 0
        while True:
            arr_t = self.arrangement(t)
            head = arr_t.dst[h]
            if head[0] == "x":
                corners.append(arr_t.crossings[head[1]])
                if len(corners) > 2:
                    return None
            t, h, _ = self.wall_walk_next(t, h, walls)
            guard += 1
            if guard > 10 * (self._next_pid + 16):
                raise RuntimeError("runaway region walk")
            if t == x.t and h == start:
                break
        if len(corners) != 2 or {id(c) for c in corners} != {id(x), id(y)}:
            return None
        cells = self._flood_region(x.t, self.arrangement(x.t).face[start])
        if self._region_euler(cells) != 1:
            return None
        return (si, oi, x, y, o_dir, cells)

    def _flood_region(self, t0, f0):
        """Cells reachable from (t0, f0) across interior edge gaps (all
        chords are walls here)."""
        seen = {(t0, f0)}
        stack = [(t0, f0)]
        while stack:
            t, f = stack.pop()
            arr = self.arrangement(t)
            for h in range(len(arr.org)):
                if arr.face[h] != f or arr.kind[h] != "side":
                    continue
                part = self.glued_partner(t, h)
                if part is None:
                    continue
                t2, h2 = part
                f2 = self.arrangement(t2).face[h2]
                if (t2, f2) not in seen:
                    seen.add((t2, f2))
                    stack.append((t2, f2))
        return seen

    def _region_euler(self, cells):
        """Euler characteristic of a union of cells glued along edge gaps
        (walls = all chords)."""
        n2 = len(cells)
        n1 = 0
        for (t, f) in cells:
            arr = self.arrangement(t)
            for h in range(len(arr.org)):
                if arr.face[h] != f or arr.kind[h] != "side":
                    continue
                if arr.info[h][0] != "inner":
                    continue
                part = self.glued_partner(t, h)
                if part is None:
                    continue
                t2, h2 = part
                if (t2, self.arrangement(t2).face[h2]) in cells:
                    n1 += 1
        if n1 % 2:
            raise RuntimeError("interior gap seen an odd number of times")
        n1 //= 2
        n0 = 0
        orbit_of, norb, _ = self.tri.vertex_orbits()
        boundary_orbits = self.tri.boundary_vertex_orbits()
        counted = set()
        for (t, f) in cells:
            arr = self.arrangement(t)
            for h in range(len(arr.org)):
                if (arr.face[h] == f and arr.org[h][0] == "c"
                        and arr.kind[h] == "side"):
                    j = arr.org[h][1]
                    orb = orbit_of[self.tri.corner_end(t, j, at_start=True)]
                    if orb not in counted and orb not in boundary_orbits:
                        counted.add(orb)
                        n0 += 1
        return n2 - n1 + n0

    def _remove_bigon(self, si, oi, x, y, o_dir, cells):
        """Isotope the arc of strand si across the empty bigon it bounds
        with strand oi, deleting crossings x and y."""
        a, b = self.strands[si], self.strands[oi]
        na, nb = len(a), len(b)
        k_x, k_y = x.chord_of(si)[1], y.chord_of(si)[1]
        l_x, l_y = x.chord_of(oi)[1], y.chord_of(oi)[1]

        # visits of a strictly inside the forward arc x -> y
        a_inside = []
        if not (k_x == k_y and x.param_of(si) < y.param_of(si)):
            k = (k_x + 1) % na
            while True:
                a_inside.append(k)
                if k == k_y:
                    break
                k = (k + 1) % na
        # visits of b along its arc from x to y in direction o_dir
        b_arc = []
        if o_dir == 1:
            if not (l_x == l_y and x.param_of(oi) < y.param_of(oi)):
                l = (l_x + 1) % nb
                while True:
                    b_arc.append(l)
                    if l == l_y:
                        break
                    l = (l + 1) % nb
        else:
            if not (l_x == l_y and x.param_of(oi) > y.param_of(oi)):
                l = l_x
                while True:
                    b_arc.append(l)
                    if l == (l_y + 1) % nb:
                        break
                    l = (l - 1) % nb
        if not a_inside and not b_arc:
            raise RuntimeError("two chords cannot cross twice")

        old_total = self.crossing_count()
        affected = {x.t, y.t}
        for k in a_inside:
            affected.add(a.steps[k].t)
            affected.add(a.steps[(k - 1) % na].t)
        for l in b_arc:
            affected.add(b.steps[l].t)
            affected.add(b.steps[(l - 1) % nb].t)

        # where each mirrored point goes: immediately before or after its
        # model point q, on the side away from the bigon
        new_points = []
        for l in b_arc:
            q = b.pids[l]
            e = b.edges[l]
            r = self.pid_rank(q)
            low_in = self._gap_in_cells(e, r, cells)
            high_in = self._gap_in_cells(e, r + 1, cells)
            if low_in == high_in:
                raise RuntimeError("ambiguous bigon side at a rerouted point")
            new_points.append((e, q, "after" if low_in else "before"))

        # steps of the rerouted stretch (replacing chords k_x .. k_y of a)
        if o_dir == 1:
            mid_steps = [b.steps[l] for l in b_arc[:-1]]
            first_exit = b.steps[l_x].exit_slot
            last_entry = b.steps[l_y].entry_slot
        else:
            mid_steps = [Step(b.steps[(l - 1) % nb].t,
                              b.steps[(l - 1) % nb].exit_slot,
                              b.steps[(l - 1) % nb].entry_slot)
                         for l in b_arc[:-1]]
            first_exit = b.steps[l_x].entry_slot
            last_entry = b.steps[l_y].exit_slot
        full_reroute = len(a_inside) == na
        if not b_arc:
            # both crossings on one chord of b; x.t == y.t
            new_steps = [Step(x.t, a.steps[k_x].entry_slot,
                              a.steps[k_y].exit_slot)]
        elif full_reroute:
            # the whole strand a runs parallel to b's arc; close up in x.t
            new_steps = mid_steps + [Step(x.t, last_entry, first_exit)]
        else:
            new_steps = ([Step(x.t, a.steps[k_x].entry_slot, first_exit)]
                         + mid_steps
                         + [Step(y.t, last_entry, a.steps[k_y].exit_slot)])

        # mutate the realization
        for k in a_inside:
            pid = a.pids[k]
            self.edge_order[a.edges[k]].remove(pid)
            del self.pid_edge[pid]
        fresh = []
        for (e, q, side) in new_points:
            pid = self._next_pid
            self._next_pid += 1
            self.pid_edge[pid] = e
            r = self.edge_order[e].index(q)
            self.edge_order[e].insert(r + 1 if side == "after" else r, pid)
            fresh.append(pid)
        self._splice_strand(si, k_x, k_y, a_inside, fresh,
                            [self.pid_edge[p] for p in fresh], new_steps)

        self._invalidate(affected)
        new_total = self.crossing_count()
        if new_total != old_total - 2:
            raise RuntimeError(
                f"bigon removal changed crossings {old_total} -> {new_total}")

    def _gap_in_cells(self, e, g, cells):
        t, _ = self.tri.edge_incidences[e][0]
        arr = self.arrangement(t)
        return (t, arr.face[arr.gap_inner[(e, g)]]) in cells

    def _splice_strand(self, si, k_x, k_y, a_inside, fresh_pids, fresh_edges,
                       new_steps):
        a = self.strands[si]
        na = len(a)
        inside = set(a_inside)
        order = []
        if len(inside) < na:
            k = (k_y + 1) % na
            while True:
                order.append(k)
                if k == k_x:
                    break
                k = (k + 1) % na
            if set(order) & inside:
                raise RuntimeError("kept arc overlaps the removed arc")
        if not order and not fresh_pids:
            raise RuntimeError("strand vanished during bigon removal")
        pids = [a.pids[k] for k in order] + list(fresh_pids)
        edges = [a.edges[k] for k in order] + list(fresh_edges)
        steps = [a.steps[order[i]] for i in range(len(order) - 1)] + new_steps
        if len(steps) != len(pids):
            raise RuntimeError("splice arity mismatch")
        self.strands[si] = Strand(a.curve, pids, edges, steps)


class Circuit:
    """One boundary circle of a region, as directed wall pieces.

    ``pieces[i]`` is a (triangle, half-edge) wall piece; ``hops[i]`` lists
    the edge gaps crossed between piece i and piece i+1,
    as (edge, gap, hug_vertex, triangle_entered).
    """

    __slots__ = ("region", "pieces", "hops", "corners", "curve_ids",
                 "on_surface_boundary")

    def __init__(self, region, pieces, hops, corners, curve_ids,
                 on_surface_boundary):
        self.region = region
        self.pieces = pieces
        self.hops = hops
        self.corners = corners
        self.curve_ids = curve_ids
        self.on_surface_boundary = on_surface_boundary


class RegionData:
    __slots__ = ("cells", "chi", "circuits", "interior_curve_ids")

    def __init__(self):
        self.cells = []
        self.chi = None
        self.circuits = []
        self.interior_curve_ids = set()

    @property
    def boundary_count(self):
        return len(self.circuits)

    @property
    def genus(self):
        g2 = 2 - self.chi - self.boundary_count
        if g2 < 0 or g2 % 2:
            raise RuntimeError("inconsistent region characteristics")
        return g2 // 2

    @property
    def is_disk(self):
        return self.chi == 1

    @property
    def is_annulus(self):
        return self.chi == 0 and self.boundary_count == 2


class Regions:
    """Complement regions of a set of walls in a realized system.

    ``wall(si, k, piece)`` selects which chord pieces count as walls;
    by default every chord does.  Non-wall strands are treated as lying in
    the interior of the regions they cross.
    """

    def __init__(self, system: System, wall=None):
        self.system = system
        self.wall = wall or (lambda si, k, piece: True)
        tri = system.tri
        parent = {}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(c1, c2):
            parent.setdefault(c1, c1)
            parent.setdefault(c2, c2)
            r1, r2 = find(c1), find(c2)
            if r1 != r2:
                parent[r1] = r2

        cells = []
        for t in range(tri.num_triangles):
            arr = system.arrangement(t)
            for f in range(arr.num_cells):
                parent.setdefault((t, f), (t, f))
                cells.append((t, f))
        glued_gaps = []
        for e in range(tri.num_edges):
            if e in tri.boundary_edges:
                continue
            (t1, _), (t2, _) = tri.edge_incidences[e]
            a1, a2 = system.arrangement(t1), system.arrangement(t2)
            for g in range(len(system.edge_order[e]) + 1):
                c1 = (t1, a1.face[a1.gap_inner[(e, g)]])
                c2 = (t2, a2.face[a2.gap_inner[(e, g)]])
                union(c1, c2)
                glued_gaps.append((c1, e, g))
        interior_pieces = []
        for t in range(tri.num_triangles):
            arr = system.arrangement(t)
            for (si, k), pieces in arr.chord_pieces.items():
                for pi, (fwd, bwd) in enumerate(pieces):
                    if not self.wall(si, k, pi):
                        union((t, arr.face[fwd]), (t, arr.face[bwd]))
                        interior_pieces.append(((t, arr.face[fwd]), si, k, pi, t))

        roots = {}
        self.cell_region = {}
        for c in cells:
            r = find(c)
            if r not in roots:
                roots[r] = len(roots)
        # deterministic region numbering by first cell in scan order
        order = {}
        for c in cells:
            rid = roots[find(c)]
            if rid not in order:
                order[rid] = len(order)
        self.regions = [RegionData() for _ in range(len(order))]
        for c in cells:
            idx = order[roots[find(c)]]
            self.cell_region[c] = idx
            self.regions[idx].cells.append(c)

        # Euler characteristics: cells - interior 1-cells + interior 0-cells
        n1 = [0] * len(self.regions)
        for c, e, g in glued_gaps:
            n1[self.cell_region[c]] += 1
        for c, si, k, pi, t in interior_pieces:
            n1[self.cell_region[c]] += 1
        n0 = [0] * len(self.regions)
        orbit_of, _, _ = tri.vertex_orbits()
        bdry_orbits = tri.boundary_vertex_orbits()
        seen_orbits = {}
        for t in range(tri.num_triangles):
            arr = system.arrangement(t)
            for h in range(len(arr.org)):
                v = arr.org[h]
                if v[0] != "c" or arr.kind[h] != "side" or arr.face[h] < 0:
                    continue
                orb = orbit_of[tri.corner_end(t, v[1], at_start=True)]
                if orb in bdry_orbits:
                    continue
                reg = self.cell_region[(t, arr.face[h])]
                if orb in seen_orbits:
                    if seen_orbits[orb] != reg:
                        raise RuntimeError("vertex simultaneously in two regions")
                else:
                    seen_orbits[orb] = reg
                    n0[reg] += 1
        # interior points and crossings of non-wall strands
        for si, s in enumerate(self.system.strands):
            n = len(s)
            for k in range(n):
                prev_k = (k - 1) % n
                t_prev = s.steps[prev_k].t
                t_here = s.steps[k].t
                arr_prev = system.arrangement(t_prev)
                last_piece = len(arr_prev.chord_pieces[(si, prev_k)]) - 1
                if (not self.wall(si, prev_k, last_piece)
                        and not self.wall(si, k, 0)):
                    c = (t_here,
                         system.arrangement(t_here).face[
                             system.arrangement(t_here)
                             .chord_pieces[(si, k)][0][0]])
                    n0[self.cell_region[c]] += 1
        for t in range(tri.num_triangles):
            arr = system.arrangement(t)
            for xi, x in enumerate(arr.crossings):
                si_a, k_a = x.a
                si_b, k_b = x.b
                pos_a = sum(1 for xx in arr.crossings
                            if xx.a == x.a and xx.param_a < x.param_a) + \
                    sum(1 for xx in arr.crossings
                        if xx.b == x.a and xx.param_b < x.param_a)
                pos_b = sum(1 for xx in arr.crossings
                            if xx.a == x.b and xx.param_a < x.param_b) + \
                    sum(1 for xx in arr.crossings
                        if xx.b == x.b and xx.param_b < x.param_b)
                if all(not self.wall(si, k, p) for si, k, p in
                       ((si_a, k_a, pos_a), (si_a, k_a, pos_a + 1),
                        (si_b, k_b, pos_b), (si_b, k_b, pos_b + 1))):
                    fwd = arr.chord_pieces[(x.a[0], x.a[1])][pos_a][0]
                    n0[self.cell_region[(t, arr.face[fwd])]] += 1
        for i, reg in enumerate(self.regions):
            reg.chi = len(reg.cells) - n1[i] + n0[i]

        # interior (non-wall) curves per region
        for si, s in enumerate(self.system.strands):
            if all(self.wall(si, k, 0) for k in range(len(s))):
                continue
            t0 = s.steps[0].t
            arr = system.arrangement(t0)
            fwd = arr.chord_pieces[(si, 0)][0][0]
            reg = self.cell_region[(t0, arr.face[fwd])]
            self.regions[reg].interior_curve_ids.add(s.curve)

        self._trace_circuits()

    def _wall_halves(self):
        out = []
        tri = self.system.tri
        for t in range(tri.num_triangles):
            arr = self.system.arrangement(t)
            for (si, k), pieces in sorted(arr.chord_pieces.items()):
                for pi, (fwd, bwd) in enumerate(pieces):
                    if self.wall(si, k, pi):
                        out.append((t, fwd))
                        out.append((t, bwd))
            for (e, g), h in sorted(arr.gap_inner.items()):
                if e in tri.boundary_edges:
                    out.append((t, h))
        return out

    def _trace_circuits(self):
        system = self.system
        visited = set()
        for t0, h0 in self._wall_halves():
            if (t0, h0) in visited:
                continue
            pieces, hops, corners = [], [], []
            curve_ids = set()
            on_bdry = False
            t, h = t0, h0
            while (t, h) not in visited:
                visited.add((t, h))
                arr = system.arrangement(t)
                pieces.append((t, h))
                if arr.kind[h] == "chord":
                    _, si, k, pi = arr.info[h]
                    curve_ids.add(system.strands[si].curve)
                else:
                    on_bdry = True
                head = arr.dst[h]
                if head[0] == "x":
                    corners.append(arr.crossings[head[1]])
                if arr.kind[h] == "side":
                    # surface boundary piece: continue within the triangle
                    w = arr.next[h]
                    step_hops = []
                    while True:
                        if arr.kind[w] == "chord":
                            _, si, k, pi = arr.info[w]
                            if self.wall(si, k, pi):
                                break
                            w = arr.next[arr.twin[w]]
                        else:
                            tag, e, g, j = arr.info[w]
                            part = system.glued_partner(t, w)
                            if part is None:
                                break
                            step_hops.append((e, g, arr.org[w], part[0]))
                            t, w = part[0], self.system.arrangement(
                                part[0]).next[part[1]]
                            arr = system.arrangement(t)
                    h = w
                    hops.append(step_hops)
                else:
                    t, h, step_hops = system.wall_walk_next(t, h, self.wall)
                    hops.append(step_hops)
            region = None
            for tt, hh in pieces:
                arr = system.arrangement(tt)
                if arr.face[hh] >= 0:
                    region = self.cell_region[(tt, arr.face[hh])]
                    break
            circ = Circuit(region, pieces, hops, corners, curve_ids, on_bdry)
            self.regions[region].circuits.append(circ)

    # -- queries -----------------------------------------------------------

    def region_of_gap(self, e, g):
        t, _ = self.system.tri.edge_incidences[e][0]
        arr = self.system.arrangement(t)
        return self.cell_region[(t, arr.face[arr.gap_inner[(e, g)]])]

    def region_of_strand(self, si):
        """Region containing a non-wall strand."""
        s = self.system.strands[si]
        t0 = s.steps[0].t
        arr = self.system.arrangement(t0)
        fwd = arr.chord_pieces[(si, 0)][0][0]
        return self.cell_region[(t0, arr.face[fwd])]

    def circuit_path(self, circ: Circuit):
        """The pushed-off boundary circle of a circuit as a transversal path.

        Returns (edges, steps, keys): one visit per hop, with sortable keys
        giving the order of this circle's own points along each edge.
        """
        tri = self.system.tri
        all_hops = []
        for step_hops in circ.hops:
            all_hops.extend(step_hops)
        if not all_hops:
            return [], [], []
        edges, keys = [], []
        for e, g, hug, t2 in all_hops:
            edges.append(e)
            if hug[0] == "p":
                r = self.system.pid_rank(hug[1])
                near_low = (r == g - 1)
            else:
                near_low = (g == 0)
            keys.append((g, 0 if near_low else 1))
        steps = []
        n = len(all_hops)
        for i in range(n):
            e_i, g_i, hug_i, t_in = all_hops[i]
            e_j = all_hops[(i + 1) % n][0]
            slot_i = next(j for j in range(3) if tri.edge_of(t_in, j) == e_i)
            slot_j = next(j for j in range(3) if tri.edge_of(t_in, j) == e_j)
            steps.append(Step(t_in, slot_i, slot_j))
        return edges, steps, keys


def intersection_number(a: NormalCurve, b: NormalCurve) -> int:
    """Geometric intersection number of two curves on one triangulation."""
    if a.triangulation != b.triangulation:
        raise ValueError("curves live on different triangulations")
    a, b = canonicalize(a), canonicalize(b)
    if a.weights == b.weights:
        return 0
    sys = System(a.triangulation, [a, b])
    sys.reduce()
    return sys.crossing_count(0, 1)


def reduced_system(curves) -> System:
    """Realize the curves together and put them in pairwise minimal position."""
    if not curves:
        raise ValueError("empty curve system")
    sys = System(curves[0].triangulation, curves)
    sys.reduce()
    return sys
