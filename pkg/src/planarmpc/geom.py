"""Exact plane geometry kernel: predicates, vertical decompositions,
point location, and bichromatic intersection counting.

All coordinates are exact rationals; there is no floating point anywhere
in a predicate.  Cells of a decomposition may be unbounded, which is
encoded by absent walls rather than a bounding box.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .rational import rat, bit_length


class GeomError(Exception):
    pass


class CrossingInput(GeomError):
    """Raised when an operation requiring non-crossing segments sees a crossing."""


class MonochromaticCrossing(GeomError):
    """Raised when a red/red or blue/blue crossing violates a precondition."""


class Point(tuple):
    """Immutable exact point. Subclasses tuple for cheap hashing/equality."""

    __slots__ = ()

    def __new__(cls, x, y):
        return tuple.__new__(cls, (rat(x), rat(y)))

    @property
    def x(self):
        return self[0]

    @property
    def y(self):
        return self[1]

    def __repr__(self):
        return "Point(%s, %s)" % (self[0], self[1])

    def bit_len(self) -> int:
        return max(bit_length(self[0]), bit_length(self[1]))


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point
    id: object = None

    def __post_init__(self):
        if self.a == self.b:
            raise GeomError("zero-length segment: %r" % (self.a,))

    def is_vertical(self) -> bool:
        return self.a.x == self.b.x

    def xspan(self):
        ax, bx = self.a.x, self.b.x
        return (ax, bx) if ax <= bx else (bx, ax)

    def left_right(self):
        """Endpoints ordered by x, ties by y. Undefined intent for verticals."""
        if (self.a.x, self.a.y) <= (self.b.x, self.b.y):
            return self.a, self.b
        return self.b, self.a

    def y_at(self, x):
        """Exact y on the supporting line at abscissa x (non-vertical only)."""
        ax, ay = self.a
        bx, by = self.b
        if ax == bx:
            raise GeomError("y_at on vertical segment")
        return ay + (by - ay) * (rat(x) - ax) / (bx - ax)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q-p) x (r-p): +1 ccw, -1 cw, 0 collinear."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def on_segment(p: Point, s: Segment) -> bool:
    """True iff p lies on the closed segment s."""
    if orient(s.a, s.b, p) != 0:
        return False
    lox, hix = s.xspan()
    loy, hiy = (s.a.y, s.b.y) if s.a.y <= s.b.y else (s.b.y, s.a.y)
    return lox <= p[0] <= hix and loy <= p[1] <= hiy


class CrossKind(Enum):
    CROSSING = "crossing"
    TOUCHING = "touching-at-endpoint"
    DISJOINT = "disjoint"


def segments_cross(s1: Segment, s2: Segment) -> CrossKind:
    """Classify the interaction of two segments.

    Two segments cross when they share a point that is not an endpoint of
    both.  Overlapping collinear segments therefore cross; meeting exactly
    at a shared endpoint is only a touch.
    """
    d1 = orient(s2.a, s2.b, s1.a)
    d2 = orient(s2.a, s2.b, s1.b)
    d3 = orient(s1.a, s1.b, s2.a)
    d4 = orient(s1.a, s1.b, s2.b)

    if d1 != d2 and d3 != d4 and (d1 != 0 or d2 != 0) and (d3 != 0 or d4 != 0):
        # supporting lines properly separate endpoints on at least one side
        if 0 not in (d1, d2, d3, d4):
            return CrossKind.CROSSING
        # some endpoint is collinear: intersection at that endpoint
        shared = _shared_endpoint(s1, s2)
        if shared is not None and _only_touch_at(s1, s2, shared):
            return CrossKind.TOUCHING
        return CrossKind.CROSSING

    if d1 == d2 == d3 == d4 == 0:
        # collinear: overlap test along the longer axis
        return _collinear_classify(s1, s2)

    # not collinear and no straddling: either an endpoint lies on the other
    # segment or they are disjoint
    for p in (s1.a, s1.b):
        if on_segment(p, s2):
            if (p == s2.a or p == s2.b):
                return CrossKind.TOUCHING
            return CrossKind.CROSSING
    for p in (s2.a, s2.b):
        if on_segment(p, s1):
            if (p == s1.a or p == s1.b):
                return CrossKind.TOUCHING
            return CrossKind.CROSSING
    return CrossKind.DISJOINT


def _shared_endpoint(s1: Segment, s2: Segment) -> Optional[Point]:
    for p in (s1.a, s1.b):
        if p == s2.a or p == s2.b:
            return p
    return None


def _only_touch_at(s1: Segment, s2: Segment, shared: Point) -> bool:
    others1 = [p for p in (s1.a, s1.b) if p != shared]
    others2 = [p for p in (s2.a, s2.b) if p != shared]
    for p in others1:
        if on_segment(p, s2):
            return False
    for p in others2:
        if on_segment(p, s1):
            return False
    return True


def _collinear_classify(s1: Segment, s2: Segment) -> CrossKind:
    key = (lambda p: (p[0], p[1]))
    a1, b1 = sorted((s1.a, s1.b), key=key)
    a2, b2 = sorted((s2.a, s2.b), key=key)
    if b1 == a2 or b2 == a1:
        return CrossKind.TOUCHING
    lo = max(key(a1), key(a2))
    hi = min(key(b1), key(b2))
    if lo > hi:
        return CrossKind.DISJOINT
    return CrossKind.CROSSING


def segment_intersection_point(s1: Segment, s2: Segment) -> Optional[Point]:
    """The unique proper intersection point of two non-parallel segments,
    or None when the closed segments do not meet in exactly one point."""
    p, r = s1.a, (s1.b[0] - s1.a[0], s1.b[1] - s1.a[1])
    q, s = s2.a, (s2.b[0] - s2.a[0], s2.b[1] - s2.a[1])
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0:
        return None
    t = ((q[0] - p[0]) * s[1] - (q[1] - p[1]) * s[0]) / denom
    u = ((q[0] - p[0]) * r[1] - (q[1] - p[1]) * r[0]) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return Point(p[0] + t * r[0], p[1] + t * r[1])
    return None


# ---------------------------------------------------------------------------
# Vertical decomposition
# ---------------------------------------------------------------------------


@dataclass
class Trapezoid:
    """One cell of a vertical decomposition.

    Absent walls (None) encode unbounded extent: left_x/right_x for the
    vertical walls, top/bottom for the bounding segments.
    """

    id: int
    left_x: object = None
    right_x: object = None
    top: Optional[Segment] = None
    bottom: Optional[Segment] = None

    def is_bounded(self) -> bool:
        return None not in (self.left_x, self.right_x, self.top, self.bottom)


@dataclass
class CellComplex:
    cells: list
    adjacency: dict
    # internal point-location tables
    _slab_xs: list = field(default_factory=list, repr=False)
    _slab_segments: list = field(default_factory=list, repr=False)
    _slab_cells: list = field(default_factory=list, repr=False)
    _verticals: list = field(default_factory=list, repr=False)

    def cell(self, cid: int) -> Trapezoid:
        return self.cells[cid]

    def locate(self, p: Point) -> int:
        return locate(self, p)


def _slab_sort_key(seg: Segment, xmid):
    return seg.y_at(xmid)


def vertical_decomposition(segments) -> CellComplex:
    """Trapezoidal decomposition of a family of pairwise non-crossing segments.

    Each input endpoint generates a maximal vertical wall; every cell interior
    is empty of input segments.  Crossing inputs raise CrossingInput.
    """
    segs = list(segments)
    verticals = [s for s in segs if s.is_vertical()]
    nonvert = [s for s in segs if not s.is_vertical()]

    _check_vertical_conflicts(verticals, nonvert)

    xs = sorted({p[0] for s in segs for p in (s.a, s.b)})
    nslabs = len(xs) + 1

    # endpoints and vertical spans grouped by wall abscissa
    pts_at = {}
    for s in segs:
        for p in (s.a, s.b):
            pts_at.setdefault(p[0], []).append(p)
    vert_at = {}
    for v in verticals:
        lo, hi = (v.a.y, v.b.y) if v.a.y <= v.b.y else (v.b.y, v.a.y)
        vert_at.setdefault(v.a.x, []).append((lo, hi))

    # events: non-vertical segments enter/leave slabs
    slab_members = [[] for _ in range(nslabs)]
    for s in nonvert:
        l, r = s.left_right()
        i0 = bisect.bisect_left(xs, l.x) + 1   # first slab strictly right of l.x
        i1 = bisect.bisect_left(xs, r.x)       # last slab strictly left of r.x
        for k in range(i0, i1 + 1):
            slab_members[k].append(s)

    slab_sorted = []
    for k in range(nslabs):
        members = slab_members[k]
        if not members:
            slab_sorted.append([])
            continue
        if k == 0:
            raise CrossingInput("segment extends left of every endpoint")
        xmid = _slab_mid(xs, k)
        members.sort(key=lambda s: s.y_at(xmid))
        for i in range(len(members) - 1):
            lo, hi = members[i], members[i + 1]
            if lo.y_at(xmid) == hi.y_at(xmid):
                raise CrossingInput("segments %r/%r meet inside a slab" % (lo.id, hi.id))
            if segments_cross(lo, hi) is CrossKind.CROSSING:
                raise CrossingInput("segments %r/%r cross" % (lo.id, hi.id))
        slab_sorted.append(members)

    # gap structure per slab; merge cells across non-blocking boundaries
    cells: list = []
    adjacency: dict = {}
    slab_cells = []
    prev_cells = None

    def new_cell(left_x, top, bottom):
        cid = len(cells)
        cells.append(Trapezoid(id=cid, left_x=left_x, right_x=None, top=top, bottom=bottom))
        adjacency[cid] = set()
        return cid

    for k in range(nslabs):
        members = slab_sorted[k]
        left_x = xs[k - 1] if k > 0 else None
        right_x = xs[k] if k < len(xs) else None
        gaps = []
        for i in range(len(members) + 1):
            bottom = members[i - 1] if i > 0 else None
            top = members[i] if i < len(members) else None
            gaps.append((top, bottom))

        cur_cells = []
        if prev_cells is None:
            for top, bottom in gaps:
                cur_cells.append(new_cell(left_x, top, bottom))
        else:
            bx = left_x  # boundary abscissa between slab k-1 and k
            blockers = _boundary_blockers(pts_at.get(bx, ()), vert_at.get(bx, ()))
            prev_by_bounds = {}
            for cid in prev_cells:
                c = cells[cid]
                prev_by_bounds[(id(c.top), id(c.bottom))] = cid
            for top, bottom in gaps:
                prev = prev_by_bounds.get((id(top), id(bottom)))
                if prev is not None and not _blocked(blockers, top, bottom, bx):
                    cur_cells.append(prev)  # merge: same cell continues
                else:
                    cur_cells.append(new_cell(left_x, top, bottom))
            # wall adjacency between the two stacks
            _link_across(cells, adjacency, prev_cells, cur_cells, bx)

        for cid in cur_cells:
            cells[cid].right_x = right_x
        # vertical adjacency inside the slab: consecutive gaps share a segment
        for i in range(len(cur_cells) - 1):
            a, b = cur_cells[i], cur_cells[i + 1]
            if a != b:
                adjacency[a].add(b)
                adjacency[b].add(a)
        slab_cells.append(cur_cells)
        prev_cells = cur_cells

    adjacency = {k: sorted(v) for k, v in adjacency.items()}
    return CellComplex(
        cells=cells,
        adjacency=adjacency,
        _slab_xs=xs,
        _slab_segments=slab_sorted,
        _slab_cells=slab_cells,
        _verticals=verticals,
    )


def _slab_mid(xs, k):
    if k == 0:
        return xs[0] - 1
    if k == len(xs):
        return xs[-1] + 1
    return (xs[k - 1] + xs[k]) / rat(2)


def _check_vertical_conflicts(verticals, nonvert):
    by_x = {}
    for v in verticals:
        by_x.setdefault(v.a.x, []).append(v)
    for x, group in by_x.items():
        spans = []
        for v in group:
            lo, hi = (v.a.y, v.b.y) if v.a.y <= v.b.y else (v.b.y, v.a.y)
            spans.append((lo, hi, v))
        spans.sort(key=lambda t: (t[0], t[1]))
        for i in range(len(spans) - 1):
            if spans[i][1] > spans[i + 1][0]:
                raise CrossingInput(
                    "vertical segments %r/%r overlap" % (spans[i][2].id, spans[i + 1][2].id))
    for v in verticals:
        for s in nonvert:
            if segments_cross(v, s) is CrossKind.CROSSING:
                raise CrossingInput("segments %r/%r cross" % (v.id, s.id))


def _boundary_blockers(points, vspans):
    ys = sorted({p[1] for p in points})
    spans = sorted(vspans)
    return (ys, spans)


def _blocked(blockers, top, bottom, bx) -> bool:
    """True when a wall piece or vertical segment at bx cuts the gap (top, bottom)."""
    ys, spans = blockers
    lo = bottom.y_at(bx) if bottom is not None else None
    hi = top.y_at(bx) if top is not None else None
    # any endpoint inside the closed vertical interval blocks the merge
    i = 0 if lo is None else bisect.bisect_left(ys, lo)
    if i < len(ys) and (hi is None or ys[i] <= hi):
        return True
    for (vlo, vhi) in spans:
        if (hi is None or vlo < hi) and (lo is None or vhi > lo):
            return True
    return False


def _link_across(cells, adjacency, left_stack, right_stack, bx):
    """Wall adjacency between cell stacks on both sides of the wall at bx."""

    def interval(cid):
        c = cells[cid]
        lo = c.bottom.y_at(bx) if c.bottom is not None else None
        hi = c.top.y_at(bx) if c.top is not None else None
        return lo, hi

    li = 0
    ri = 0
    lint = [interval(c) for c in left_stack]
    rint = [interval(c) for c in right_stack]
    while li < len(left_stack) and ri < len(right_stack):
        a, b = left_stack[li], right_stack[ri]
        alo, ahi = lint[li]
        blo, bhi = rint[ri]
        lo = max((v for v in (alo, blo) if v is not None), default=None)
        hi = min((v for v in (ahi, bhi) if v is not None), default=None)
        if a != b and (lo is None or hi is None or lo < hi):
            adjacency[a].add(b)
            adjacency[b].add(a)
        # advance whichever interval's upper bound ends first
        if ahi is None and bhi is None:
            break
        if bhi is None or (ahi is not None and ahi <= bhi):
            li += 1
        else:
            ri += 1


def locate(complex: CellComplex, p: Point) -> int:
    """Cell whose closure contains p.  Points on a wall resolve to the left
    cell, points on a segment to the cell below."""
    xs = complex._slab_xs
    k = bisect.bisect_left(xs, p[0])
    if k < len(xs) and xs[k] == p[0]:
        pass  # boundary point: slab k ends at p.x, which is the left side
    members = complex._slab_segments[k]
    cellids = complex._slab_cells[k] if complex._slab_cells else []
    if not cellids:
        raise GeomError("empty complex slab")
    lo, hi = 0, len(members)
    while lo < hi:
        mid = (lo + hi) // 2
        s = members[mid]
        if _strictly_above(p, s):
            lo = mid + 1
        else:
            hi = mid
    return cellids[lo]


def _strictly_above(p: Point, s: Segment) -> bool:
    l, r = s.left_right()
    return orient(l, r, p) > 0


def cell_contains(complex: CellComplex, cid: int, p: Point) -> bool:
    """Closure containment test, independent of the location tables."""
    c = complex.cells[cid]
    if c.left_x is not None and p[0] < c.left_x:
        return False
    if c.right_x is not None and p[0] > c.right_x:
        return False
    if c.top is not None:
        l, r = c.top.left_right()
        if orient(l, r, p) > 0:
            return False
    if c.bottom is not None:
        l, r = c.bottom.left_right()
        if orient(l, r, p) < 0:
            return False
    return True


def segment_meets_cell(complex: CellComplex, cid: int, s: Segment) -> bool:
    """Exact closed-cell vs closed-segment intersection test."""
    c = complex.cells[cid]
    ax, ay = s.a
    bx, by = s.b
    if ax > bx or (ax == bx and ay > by):
        ax, ay, bx, by = bx, by, ax, ay
    # clip to the vertical strip
    if c.right_x is not None and ax > c.right_x:
        return False
    if c.left_x is not None and bx < c.left_x:
        return False
    if ax == bx:
        p0 = Point(ax, ay)
        p1 = Point(bx, by)
    else:
        t0 = rat(0)
        t1 = rat(1)
        if c.left_x is not None and ax < c.left_x:
            t0 = (c.left_x - ax) / (bx - ax)
        if c.right_x is not None and bx > c.right_x:
            t1 = (c.right_x - ax) / (bx - ax)
        if t0 > t1:
            return False
        p0 = Point(ax + t0 * (bx - ax), ay + t0 * (by - ay))
        p1 = Point(ax + t1 * (bx - ax), ay + t1 * (by - ay))
    if c.top is not None:
        l, r = c.top.left_right()
        if orient(l, r, p0) > 0 and orient(l, r, p1) > 0:
            return False
    if c.bottom is not None:
        l, r = c.bottom.left_right()
        if orient(l, r, p0) < 0 and orient(l, r, p1) < 0:
            return False
    return True


def cells_meeting_segment(complex: CellComplex, s: Segment) -> list:
    """All cells whose closure meets s, found by a walk from one endpoint."""
    start = locate(complex, s.a)
    if not segment_meets_cell(complex, start, s):
        # tie rules may put the endpoint in a neighboring non-meeting cell
        for nb in complex.adjacency[start]:
            if segment_meets_cell(complex, nb, s):
                start = nb
                break
        else:  # pragma: no cover - defensive
            raise GeomError("walk start not found for segment %r" % (s.id,))
    seen = {start}
    out = [start]
    stack = [start]
    while stack:
        cid = stack.pop()
        for nb in complex.adjacency[cid]:
            if nb not in seen and segment_meets_cell(complex, nb, s):
                seen.add(nb)
                out.append(nb)
                stack.append(nb)
    return out


def conflict_counts(complex: CellComplex, segments) -> list:
    """Exact per-cell count of input segments whose closure meets the cell."""
    counts = [0] * len(complex.cells)
    for s in segments:
        for cid in cells_meeting_segment(complex, s):
            counts[cid] += 1
    return counts


def count_bichromatic_intersections(red, blue) -> list:
    """For each red segment, the number of blue segments crossing it.

    Red segments must be pairwise non-crossing, and likewise blue; a
    violation raises MonochromaticCrossing.  Runs off a vertical
    decomposition of the blue family plus a cell walk per red segment.
    """
    red = list(red)
    blue = list(blue)
    try:
        _pairwise_noncrossing_check(red)
    except CrossingInput as e:
        raise MonochromaticCrossing("red family: %s" % e)
    if not blue:
        return [0] * len(red)
    try:
        complex = vertical_decomposition(blue)
    except CrossingInput as e:
        raise MonochromaticCrossing("blue family: %s" % e)

    # blue segments bounding or touching each cell
    per_cell = [set() for _ in complex.cells]
    for k, members in enumerate(complex._slab_segments):
        cellids = complex._slab_cells[k]
        for i, cid in enumerate(cellids):
            if i > 0:
                per_cell[cid].add(members[i - 1].id)
            if i < len(members):
                per_cell[cid].add(members[i].id)
    by_id = {s.id: s for s in blue}
    # verticals and endpoint-touching segments are attached by their cells
    for v in complex._verticals:
        for cid in cells_meeting_segment(complex, v):
            per_cell[cid].add(v.id)

    out = []
    for r in red:
        hit = set()
        for cid in cells_meeting_segment(complex, r):
            for sid in per_cell[cid]:
                if sid in hit:
                    continue
                if segments_cross(r, by_id[sid]) is CrossKind.CROSSING:
                    hit.add(sid)
        out.append(len(hit))
    return out


def _pairwise_noncrossing_check(segs):
    """Crossing detection via the decomposition machinery (cheap accept path)."""
    if len(segs) > 1:
        vertical_decomposition(segs)


def split_crossing_segments(segments) -> list:
    """Split every segment at each proper intersection point with another.

    Output segments are pairwise non-crossing (they may touch at endpoints).
    Quadratic candidate filtering by bounding interval; fine at the scales
    this module is used for.
    """
    segs = []
    seen_pairs = set()
    for s in segments:
        key = tuple(sorted(((s.a[0], s.a[1]), (s.b[0], s.b[1]))))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        segs.append(s)
    cuts = {i: set() for i in range(len(segs))}
    order = sorted(range(len(segs)), key=lambda i: segs[i].xspan()[0])
    active = []
    for i in order:
        lo_i, hi_i = segs[i].xspan()
        active = [j for j in active if segs[j].xspan()[1] >= lo_i]
        for j in active:
            k = segments_cross(segs[i], segs[j])
            if k is CrossKind.CROSSING:
                p = segment_intersection_point(segs[i], segs[j])
                if p is None:
                    # collinear overlap: cut at interior endpoints of each other
                    for q in (segs[j].a, segs[j].b):
                        if on_segment(q, segs[i]) and q not in (segs[i].a, segs[i].b):
                            cuts[i].add(q)
                    for q in (segs[i].a, segs[i].b):
                        if on_segment(q, segs[j]) and q not in (segs[j].a, segs[j].b):
                            cuts[j].add(q)
                else:
                    if p not in (segs[i].a, segs[i].b):
                        cuts[i].add(p)
                    if p not in (segs[j].a, segs[j].b):
                        cuts[j].add(p)
        active.append(i)
    out = []
    out_pairs = set()
    for i, s in enumerate(segs):
        if not cuts[i]:
            pieces = [s]
        else:
            pts = sorted(cuts[i] | {s.a, s.b}, key=lambda p: (p[0], p[1]))
            if (s.a[0], s.a[1]) > (s.b[0], s.b[1]):
                pts.reverse()
            pieces = [Segment(pts[k], pts[k + 1], id=(s.id, k))
                      for k in range(len(pts) - 1)]
        for piece in pieces:
            key = tuple(sorted(((piece.a[0], piece.a[1]), (piece.b[0], piece.b[1]))))
            if key not in out_pairs:
                out_pairs.add(key)
                out.append(piece)
    return out
