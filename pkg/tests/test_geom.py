import random

import pytest

from planarmpc.rational import rat, bit_length
from planarmpc.geom import (
    CellComplex,
    CrossKind,
    CrossingInput,
    MonochromaticCrossing,
    Point,
    Segment,
    cell_contains,
    cells_meeting_segment,
    conflict_counts,
    count_bichromatic_intersections,
    locate,
    orient,
    segment_intersection_point,
    segments_cross,
    split_crossing_segments,
    vertical_decomposition,
)


def P(x, y):
    return Point(x, y)


def S(ax, ay, bx, by, sid=None):
    return Segment(P(ax, ay), P(bx, by), sid)


# -- orient -----------------------------------------------------------------

def test_orient_ccw():
    assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1


def test_orient_collinear():
    assert orient(P(0, 0), P(1, 1), P(2, 2)) == 0


def test_orient_cw():
    assert orient(P(0, 0), P(0, 1), P(1, 0)) == -1


def test_orient_antisymmetric_random():
    rng = random.Random(7)
    for _ in range(200):
        pts = [P(rat(rng.randint(-50, 50), rng.randint(1, 9)),
                 rat(rng.randint(-50, 50), rng.randint(1, 9))) for _ in range(3)]
        assert orient(pts[0], pts[1], pts[2]) == -orient(pts[0], pts[2], pts[1])


# -- segments_cross ----------------------------------------------------------

def test_cross_x_configuration():
    assert segments_cross(S(0, 0, 2, 2), S(0, 2, 2, 0)) is CrossKind.CROSSING


def test_cross_shared_endpoint():
    assert segments_cross(S(0, 0, 1, 0), S(1, 0, 2, 1)) is CrossKind.TOUCHING


def test_cross_parallel_disjoint():
    assert segments_cross(S(0, 0, 1, 0), S(0, 1, 1, 1)) is CrossKind.DISJOINT


def test_cross_t_junction_is_crossing():
    # endpoint of one in the interior of the other: not an endpoint of both
    assert segments_cross(S(0, 0, 2, 0), S(1, 0, 1, 1)) is CrossKind.CROSSING


def test_cross_collinear_overlap():
    assert segments_cross(S(0, 0, 2, 0), S(1, 0, 3, 0)) is CrossKind.CROSSING


def test_cross_collinear_touching():
    assert segments_cross(S(0, 0, 1, 0), S(1, 0, 2, 0)) is CrossKind.TOUCHING


def test_intersection_point_exact():
    p = segment_intersection_point(S(0, 0, 2, 2), S(0, 2, 2, 0))
    assert p == P(1, 1)
    p = segment_intersection_point(S(0, 0, 1, 3), S(0, 1, 1, 1))
    assert p == P(rat(1, 3), 1)


# -- vertical decomposition ---------------------------------------------------

def test_vd_empty_plane():
    c = vertical_decomposition([])
    assert len(c.cells) == 1
    assert locate(c, P(5, 5)) == 0


def test_vd_single_segment_four_cells():
    c = vertical_decomposition([S(0, 0, 1, 0, "s")])
    assert len(c.cells) == 4


def test_vd_locate_middle_above():
    c = vertical_decomposition([S(0, 0, 1, 0, "s")])
    cid = locate(c, P(rat(1, 2), 1))
    cell = c.cells[cid]
    assert cell.bottom is not None and cell.bottom.id == "s"
    assert cell.top is None
    assert cell_contains(c, cid, P(rat(1, 2), 1))


def test_vd_locate_on_wall_left_rule():
    # wall at x=1, point exactly on it resolves to the left cell
    c = vertical_decomposition([S(1, 0, 2, 0, "s")])
    cid = locate(c, P(1, 5))
    cell = c.cells[cid]
    assert cell.right_x == 1 and cell.left_x is None


def test_vd_rejects_crossing():
    with pytest.raises(CrossingInput):
        vertical_decomposition([S(0, 0, 2, 2), S(0, 2, 2, 0)])


def test_vd_rejects_t_junction():
    with pytest.raises(CrossingInput):
        vertical_decomposition([S(0, 0, 2, 0), S(1, -1, 1, 0)])


def test_vd_vertical_segment():
    c = vertical_decomposition([S(0, 0, 0, 1, "v")])
    # lone vertical: plane split into left and right of its wall
    assert len(c.cells) == 2


def test_vd_fig_style_five_segments_matches_sweep_oracle():
    segs = [
        S(0, 0, 4, 0, "a"),
        S(1, 1, 3, 2, "b"),
        S(0, 3, 2, 4, "c"),
        S(5, 1, 7, 1, "d"),
        S(4, -2, 6, -1, "e"),
    ]
    c = vertical_decomposition(segs)
    assert len(c.cells) == _sweep_cell_count_oracle(segs)
    _assert_cell_interiors_empty(c, segs)


def _sweep_cell_count_oracle(segs):
    """Independent slab-scan union-find cell counter."""
    xs = sorted({p.x for s in segs for p in (s.a, s.b)})
    slabs = []
    for k in range(len(xs) + 1):
        if k == 0:
            mid = xs[0] - 1
        elif k == len(xs):
            mid = xs[-1] + 1
        else:
            mid = (xs[k - 1] + xs[k]) / rat(2)
        stack = sorted(
            (s for s in segs if not s.is_vertical()
             and s.xspan()[0] < mid < s.xspan()[1]),
            key=lambda s: s.y_at(mid))
        slabs.append((mid, stack))

    # nodes: (slab, gap); union across boundaries when same top/bottom and no
    # endpoint or vertical blocks the gap
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for k, (mid, stack) in enumerate(slabs):
        for g in range(len(stack) + 1):
            parent[(k, g)] = (k, g)
    endpoints = {}
    for s in segs:
        for p in (s.a, s.b):
            endpoints.setdefault(p.x, []).append(p.y)
    verts = {}
    for s in segs:
        if s.is_vertical():
            lo, hi = sorted((s.a.y, s.b.y))
            verts.setdefault(s.a.x, []).append((lo, hi))
    for k in range(len(slabs) - 1):
        bx = xs[k]
        _, stack_l = slabs[k]
        _, stack_r = slabs[k + 1]
        for gl in range(len(stack_l) + 1):
            top_l = stack_l[gl] if gl < len(stack_l) else None
            bot_l = stack_l[gl - 1] if gl > 0 else None
            for gr in range(len(stack_r) + 1):
                top_r = stack_r[gr] if gr < len(stack_r) else None
                bot_r = stack_r[gr - 1] if gr > 0 else None
                if (top_l is top_r or (top_l and top_r and top_l.id == top_r.id)) and \
                   (bot_l is bot_r or (bot_l and bot_r and bot_l.id == bot_r.id)):
                    lo = bot_l.y_at(bx) if bot_l is not None else None
                    hi = top_l.y_at(bx) if top_l is not None else None
                    blocked = any(
                        (lo is None or y >= lo) and (hi is None or y <= hi)
                        for y in endpoints.get(bx, []))
                    blocked = blocked or any(
                        (hi is None or vlo < hi) and (lo is None or vhi > lo)
                        for vlo, vhi in verts.get(bx, []))
                    if not blocked:
                        union((k, gl), (k + 1, gr))
    return len({find(n) for n in parent})


def _assert_cell_interiors_empty(c, segs):
    # sample interior points of bounded cells and check no segment passes
    # strictly through them (the invariant is checked exactly elsewhere via
    # segment_meets_cell; this is a cheap smoke pass)
    for cell in c.cells:
        if not cell.is_bounded():
            continue
        xm = (cell.left_x + cell.right_x) / rat(2)
        ym = (cell.bottom.y_at(xm) + cell.top.y_at(xm)) / rat(2)
        p = Point(xm, ym)
        for s in segs:
            lo, hi = s.xspan()
            if lo < xm < hi and not s.is_vertical():
                assert s.y_at(xm) != ym


def _random_noncrossing_segments(rng, n, span=1000):
    """Disjoint short segments via grid placement: deterministic and fast."""
    out = []
    cells = rng.sample(range(span * span), n)
    for i, c in enumerate(cells):
        gx, gy = divmod(c, span)
        x0 = rat(4 * gx) + rat(rng.randint(0, 2))
        y0 = rat(4 * gy) + rat(rng.randint(0, 2))
        dx = rng.randint(0, 1)
        dy = rng.randint(0, 1) if dx else 1
        out.append(Segment(Point(x0, y0), Point(x0 + dx, y0 + dy), i))
    return out


def test_vd_tiles_plane_random_queries():
    rng = random.Random(13)
    segs = _random_noncrossing_segments(rng, 60, span=12)
    c = vertical_decomposition(segs)
    for _ in range(300):
        p = P(rat(rng.randint(-10, 200), 3), rat(rng.randint(-10, 200), 3))
        hits = [cell.id for cell in c.cells if cell_contains(c, cell.id, p)]
        assert hits, p
        assert locate(c, p) in hits


def test_vd_interiors_exactly_empty_random():
    rng = random.Random(5)
    segs = _random_noncrossing_segments(rng, 40, span=10)
    c = vertical_decomposition(segs)
    counts = conflict_counts(c, segs)
    # every cell meets at least something only via closure; interiors stay empty:
    # a bounded cell's midpoint never lies strictly inside any segment's span at
    # equal height
    _assert_cell_interiors_empty(c, segs)
    assert sum(counts) >= len(segs)


def test_walk_matches_bruteforce_cell_sets():
    rng = random.Random(99)
    segs = _random_noncrossing_segments(rng, 30, span=9)
    c = vertical_decomposition(segs)
    from planarmpc.geom import segment_meets_cell
    for q in _random_noncrossing_segments(random.Random(100), 15, span=9):
        walked = set(cells_meeting_segment(c, q))
        brute = {cell.id for cell in c.cells if segment_meets_cell(c, cell.id, q)}
        assert walked == brute


# -- bichromatic counting ------------------------------------------------------

def test_bichromatic_two_vertical_crossings():
    red = [S(0, 0, 4, 0, "r")]
    blue = [S(1, -1, 1, 1, "b1"), S(3, -1, 3, 1, "b2")]
    assert count_bichromatic_intersections(red, blue) == [2]


def test_bichromatic_empty_blue():
    assert count_bichromatic_intersections([S(0, 0, 1, 0)], []) == [0]


def test_bichromatic_rejects_monochromatic_crossing():
    red = [S(0, 0, 2, 2, 1), S(0, 2, 2, 0, 2)]
    with pytest.raises(MonochromaticCrossing):
        count_bichromatic_intersections(red, [S(5, 5, 6, 6, "b")])


def test_bichromatic_random_vs_bruteforce():
    rng = random.Random(42)
    red = _random_noncrossing_segments(rng, 50, span=40)
    # blue family: shifted grid, long diagonals crossing many reds
    blue = []
    for i in range(50):
        x0 = rat(3 * i, 2)
        blue.append(Segment(Point(x0, rat(-5)), Point(x0 + 40, rat(90)), ("b", i)))
    # blue segments here are parallel so they never cross each other
    got = count_bichromatic_intersections(red, blue)
    want = [
        sum(1 for b in blue if segments_cross(r, b) is CrossKind.CROSSING)
        for r in red
    ]
    assert got == want


# -- crossing pre-split ---------------------------------------------------------

def test_split_crossing_segments_resolves_x():
    out = split_crossing_segments([S(0, 0, 2, 2, "a"), S(0, 2, 2, 0, "b")])
    assert len(out) == 4
    vertical_decomposition(out)  # must not raise


def test_split_handles_duplicates_and_overlap():
    out = split_crossing_segments([
        S(0, 0, 4, 0, "a"),
        S(1, 0, 3, 0, "b"),
        S(0, 0, 4, 0, "dup"),
    ])
    vertical_decomposition(out)
    total = sorted((min(s.a.x, s.b.x), max(s.a.x, s.b.x)) for s in out)
    assert total == [(0, 1), (1, 3), (3, 4)]


# -- bit growth audit -----------------------------------------------------------

def test_bit_growth_bounded():
    segs = [S(0, 0, 7, 3, "a"), S(1, 5, 6, -2, "b")]
    pieces = split_crossing_segments(segs)
    in_bits = max(p.bit_len() for s in segs for p in (s.a, s.b))
    out_bits = max(p.bit_len() for s in pieces for p in (s.a, s.b))
    assert out_bits <= 6 * max(in_bits, 1) + 8
