"""Geometry of the hexagonal lattice, its triangular dual, and finite domains.

Vertices of the hexagonal lattice are addressed as ``(r, s, c)`` where
``c = 0`` marks the sublattice whose neighbours sit up-right, up-left and
straight below ("up" vertices) and ``c = 1`` the other sublattice ("down"
vertices).  Hexagonal faces carry axial coordinates ``(r, s)``; they are at
the same time the sites of the triangular lattice.

Everything is anchored to an integer embedding in doubled coordinates::

    up   (r, s) -> (X, Y) = (2r + s + 1, 3s + 1)
    down (r, s) -> (X, Y) = (2r + s + 2, 3s + 2)
    face (r, s) -> (X, Y) = (2r + s,     3s)

with real position ``(X * sqrt(3) / 2, Y / 2)`` (unit edge length).  Every
geometric predicate
in this module (interiors, reflections, direction classes, windings) is
evaluated in these integer coordinates, so the lattice layer is free of
floating-point error.  Hexagons are pointy-side-up; the vertical edges are
the pairs ``{up(r, s), down(r, s - 1)}``.

A :class:`Domain` is the region bounded by a self-avoiding polygon: its
interior vertices, the edge set incident to them, the boundary vertices, and
the hexagons it contains.  Constructors are provided for explicit polygons,
explicit interior sets, unions of hexagons, triangles with marked sides, and
concentric balls of hexagons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DisconnectedInterior,
    EmptyInterior,
    HexloopError,
    NotAPath,
    NotSelfAvoiding,
    OddSide,
    OutOfRange,
    PathNotInDomain,
)

TriVertex = tuple[int, int]
HexVertex = tuple[int, int, int]
HexEdge = tuple[HexVertex, HexVertex]

UP = 0
DOWN = 1

SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------------------
# vertices, edges, faces
# ---------------------------------------------------------------------------

def hex_xy(v: HexVertex) -> tuple[int, int]:
    """Integer doubled coordinates of a lattice vertex."""
    r, s, c = v
    if c == UP:
        return (2 * r + s + 1, 3 * s + 1)
    if c == DOWN:
        return (2 * r + s + 2, 3 * s + 2)
    raise OutOfRange(f"vertex class must be 0 or 1, got {c!r}")


def hex_position(v: HexVertex) -> tuple[float, float]:
    """Real-plane position of a lattice vertex (unit edge length)."""
    x, y = hex_xy(v)
    return (x * SQRT3 / 2.0, y / 2.0)


def tri_xy(h: TriVertex) -> tuple[int, int]:
    """Integer doubled coordinates of a hexagon center."""
    r, s = h
    return (2 * r + s, 3 * s)


def tri_position(h: TriVertex) -> tuple[float, float]:
    """Real-plane position of a hexagon center."""
    x, y = tri_xy(h)
    return (x * SQRT3 / 2.0, y / 2.0)


def vertex_from_xy(x: int, y: int) -> HexVertex:
    """Invert :func:`hex_xy`.  Raises OutOfRange for non-vertex coordinates."""
    rem = y % 3
    if rem == 1:
        s = (y - 1) // 3
        num = x - 1 - s
        c = UP
    elif rem == 2:
        s = (y - 2) // 3
        num = x - 2 - s
        c = DOWN
    else:
        raise OutOfRange(f"({x}, {y}) is not a vertex of the lattice")
    if num % 2 != 0:
        raise OutOfRange(f"({x}, {y}) is not a vertex of the lattice")
    return (num // 2, s, c)


def hex_neighbors(v: HexVertex) -> tuple[HexVertex, HexVertex, HexVertex]:
    """The three lattice neighbours of a vertex."""
    r, s, c = v
    if c == UP:
        return ((r, s, DOWN), (r - 1, s, DOWN), (r, s - 1, DOWN))
    return ((r, s, UP), (r + 1, s, UP), (r, s + 1, UP))


def are_adjacent(u: HexVertex, v: HexVertex) -> bool:
    return v in hex_neighbors(u)


def edge(u: HexVertex, v: HexVertex) -> HexEdge:
    """Canonical (sorted) form of the edge between two adjacent vertices."""
    if not are_adjacent(u, v):
        raise OutOfRange(f"{u} and {v} are not adjacent")
    return (u, v) if u < v else (v, u)


def vertex_hexagons(v: HexVertex) -> tuple[TriVertex, TriVertex, TriVertex]:
    """The three hexagons meeting at a vertex."""
    r, s, c = v
    if c == UP:
        return ((r, s), (r + 1, s), (r, s + 1))
    return ((r + 1, s), (r + 1, s + 1), (r, s + 1))


def hexagon_corners(h: TriVertex) -> tuple[HexVertex, ...]:
    """The six corners of a hexagon, counterclockwise from 30 degrees."""
    r, s = h
    return (
        (r, s, UP),
        (r - 1, s, DOWN),
        (r - 1, s, UP),
        (r - 1, s - 1, DOWN),
        (r, s - 1, UP),
        (r, s - 1, DOWN),
    )


def hexagon_edges(h: TriVertex) -> tuple[HexEdge, ...]:
    """The six edges of a hexagon, canonical form, counterclockwise."""
    cs = hexagon_corners(h)
    return tuple(edge(cs[i], cs[(i + 1) % 6]) for i in range(6))


def edge_hexagons(e: HexEdge) -> tuple[TriVertex, TriVertex]:
    """The two hexagons separated by an edge."""
    u, v = e
    if u[2] == DOWN:
        u, v = v, u
    r, s, _ = u
    dr, ds, dc = v
    if dc != DOWN or u[2] != UP:
        raise OutOfRange(f"{e} is not an edge")
    if (dr, ds) == (r, s):
        return ((r + 1, s), (r, s + 1))
    if (dr, ds) == (r - 1, s):
        return ((r, s), (r, s + 1))
    if (dr, ds) == (r, s - 1):
        return ((r, s), (r + 1, s))
    raise OutOfRange(f"{e} is not an edge")


def shared_edge(a: TriVertex, b: TriVertex) -> HexEdge:
    """The unique lattice edge separating two adjacent hexagons."""
    common = set(hexagon_edges(a)) & set(hexagon_edges(b))
    if len(common) != 1:
        raise OutOfRange(f"hexagons {a} and {b} are not adjacent")
    return next(iter(common))


def tri_neighbors(h: TriVertex) -> tuple[TriVertex, ...]:
    """The six hexagons sharing an edge with ``h``."""
    r, s = h
    return ((r + 1, s), (r - 1, s), (r, s + 1), (r, s - 1),
            (r + 1, s - 1), (r - 1, s + 1))


def tri_distance(a: TriVertex, b: TriVertex) -> int:
    """Graph distance on the triangular lattice of hexagons."""
    dr = a[0] - b[0]
    ds = a[1] - b[1]
    return (abs(dr) + abs(ds) + abs(dr + ds)) // 2


def hexagon_ball(radius: int, center: TriVertex = (0, 0)) -> frozenset[TriVertex]:
    """All hexagons within triangular-lattice distance ``radius`` of center."""
    if radius < 0:
        raise OutOfRange("radius must be nonnegative")
    r0, s0 = center
    out = set()
    for dr in range(-radius, radius + 1):
        for ds in range(-radius, radius + 1):
            if (abs(dr) + abs(ds) + abs(dr + ds)) // 2 <= radius:
                out.add((r0 + dr, s0 + ds))
    return frozenset(out)


# ---------------------------------------------------------------------------
# directions, turns, windings
# ---------------------------------------------------------------------------

# Direction class j of a step u -> v: the step's angle is 30 + 60 j degrees.
# Classes 0, 2, 4 go up -> down; classes 1, 3, 5 go down -> up.
_DIRECTION_BY_DELTA = {
    (1, 1): 0,
    (0, 2): 1,
    (-1, 1): 2,
    (-1, -1): 3,
    (0, -2): 4,
    (1, -1): 5,
}


def direction_class(u: HexVertex, v: HexVertex) -> int:
    """Direction class (0..5) of the step from ``u`` to its neighbour ``v``."""
    xu, yu = hex_xy(u)
    xv, yv = hex_xy(v)
    try:
        return _DIRECTION_BY_DELTA[(xv - xu, yv - yu)]
    except KeyError:
        raise OutOfRange(f"{u} -> {v} is not a lattice step") from None


def direction_angle(j: int) -> float:
    """Angle in radians of direction class ``j``."""
    return math.pi / 6.0 + (j % 6) * math.pi / 3.0


def turn_sign(j_in: int, j_out: int) -> int:
    """+1 for a left (counterclockwise) turn, -1 for a right turn.

    Consecutive steps of a lattice walk always turn by exactly 60 degrees
    one way or the other, so any other pair of classes is an error.
    """
    d = (j_out - j_in) % 6
    if d == 1:
        return 1
    if d == 5:
        return -1
    raise OutOfRange(f"direction classes {j_in} -> {j_out} are not consecutive")


def path_winding(vertices: Sequence[HexVertex]) -> int:
    """Total winding of a walk, in units of 60 degrees (signed)."""
    if len(vertices) < 3:
        return 0
    total = 0
    prev = direction_class(vertices[0], vertices[1])
    for i in range(1, len(vertices) - 1):
        cur = direction_class(vertices[i], vertices[i + 1])
        total += turn_sign(prev, cur)
        prev = cur
    return total


def is_path(vertices: Sequence[HexVertex]) -> bool:
    """True if the sequence is a self-avoiding walk in the lattice."""
    if len(set(vertices)) != len(vertices):
        return False
    return all(are_adjacent(vertices[i], vertices[i + 1])
               for i in range(len(vertices) - 1))


def path_edges(vertices: Sequence[HexVertex]) -> tuple[HexEdge, ...]:
    """Canonical edges traversed by a walk (validates the walk)."""
    if not is_path(vertices):
        raise NotAPath(f"not a self-avoiding lattice walk: {list(vertices)!r}")
    return tuple(edge(vertices[i], vertices[i + 1])
                 for i in range(len(vertices) - 1))


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

def mirror_vertex(v: HexVertex, axis_x: int = 0) -> HexVertex:
    """Reflect a vertex about the vertical line X = axis_x (doubled coords)."""
    r, s, c = v
    if c == UP:
        return (axis_x - 1 - r - s, s, UP)
    return (axis_x - 2 - r - s, s, DOWN)


def mirror_tri(h: TriVertex, axis_x: int = 0) -> TriVertex:
    """Reflect a hexagon about the vertical line X = axis_x (doubled coords)."""
    r, s = h
    return (axis_x - r - s, s)


def swap_vertex(v: HexVertex) -> HexVertex:
    """Reflect a vertex through the r = s diagonal."""
    r, s, c = v
    return (s, r, c)


def swap_tri(h: TriVertex) -> TriVertex:
    """Reflect a hexagon through the r = s diagonal."""
    r, s = h
    return (s, r)


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """A finite region of the hexagonal lattice bounded by a polygon.

    Attributes
    ----------
    polygon:
        The bounding self-avoiding cycle, canonically rotated (starts at its
        smallest vertex, then towards the smaller cycle neighbour).
    interior:
        Vertices strictly inside the polygon.
    edges:
        All lattice edges with at least one endpoint in the interior, in
        canonical sorted order.  This is the edge set configurations live on.
    boundary:
        Endpoints of ``edges`` that are not interior (all lie on the
        polygon), sorted.
    interior_hexagons:
        Hexagons whose six corners are all interior.
    enclosed_hexagons:
        Hexagons whose six corners all lie in interior union polygon, i.e.
        every hexagon inside the polygon.
    """

    polygon: tuple[HexVertex, ...]
    interior: frozenset[HexVertex]
    edges: tuple[HexEdge, ...]
    boundary: tuple[HexVertex, ...]
    interior_hexagons: frozenset[TriVertex]
    enclosed_hexagons: frozenset[TriVertex]

    @cached_property
    def edge_index(self) -> dict[HexEdge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def vertex_edges(self) -> dict[HexVertex, tuple[HexEdge, ...]]:
        out: dict[HexVertex, list[HexEdge]] = {}
        for e in self.edges:
            out.setdefault(e[0], []).append(e)
            out.setdefault(e[1], []).append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def spokes(self) -> dict[HexVertex, HexEdge]:
        """The unique domain edge at each boundary vertex."""
        out = {}
        for b in self.boundary:
            es = self.vertex_edges[b]
            if len(es) != 1:
                raise NotSelfAvoiding(
                    f"boundary vertex {b} has {len(es)} domain edges")
            out[b] = es[0]
        return out

    def degree(self, v: HexVertex) -> int:
        return len(self.vertex_edges.get(v, ()))

    def __contains__(self, item) -> bool:
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], tuple):
            return item in self.edge_index
        return item in self.interior

    def to_json(self) -> dict:
        return {"kind": "polygon", "polygon": [list(v) for v in self.polygon]}

    def __repr__(self) -> str:  # the dataclass default is unreadably large
        return (f"Domain(|interior|={len(self.interior)}, "
                f"|edges|={len(self.edges)}, |boundary|={len(self.boundary)})")


def _canonical_cycle(cycle: Sequence[HexVertex]) -> tuple[HexVertex, ...]:
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    rot = tuple(cycle[(k + i) % len(cycle)] for i in range(len(cycle)))
    if rot[-1] < rot[1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


def _vertices_in_box(xmin: int, xmax: int, ymin: int, ymax: int) -> list[HexVertex]:
    out = []
    for c in (UP, DOWN):
        base = 1 + c
        s_lo = -((-(ymin - base)) // 3)
        s_hi = (ymax - base) // 3
        for s in range(s_lo, s_hi + 1):
            r_lo = -((-(xmin - s - base)) // 2)
            r_hi = (xmax - s - base) // 2
            for r in range(r_lo, r_hi + 1):
                out.append((r, s, c))
    return out


def _interior_of_polygon(polygon: Sequence[HexVertex]) -> frozenset[HexVertex]:
    pset = set(polygon)
    xs = [hex_xy(v)[0] for v in polygon]
    ys = [hex_xy(v)[1] for v in polygon]
    xmin, xmax = min(xs) - 5, max(xs) + 5
    ymin, ymax = min(ys) - 7, max(ys) + 7
    box = set(_vertices_in_box(xmin, xmax, ymin, ymax))

    seeds = []
    for v in box:
        if v in pset:
            continue
        if any(w not in box for w in hex_neighbors(v)):
            seeds.append(v)
    outside = set(seeds)
    stack = list(seeds)
    while stack:
        v = stack.pop()
        for w in hex_neighbors(v):
            if w in box and w not in pset and w not in outside:
                outside.add(w)
                stack.append(w)
    return frozenset(box - pset - outside)


def _connected(vertices: set[HexVertex]) -> bool:
    if not vertices:
        return False
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in hex_neighbors(v):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def build_domain(polygon: Sequence[HexVertex]) -> Domain:
    """Build the domain bounded by a self-avoiding polygon.

    The polygon is a cyclic vertex sequence (without the repeated closing
    vertex); it may be given in either orientation and any rotation.
    """
    poly = [tuple(v) for v in polygon]
    if len(poly) < 6:
        raise NotSelfAvoiding("a lattice polygon has at least 6 vertices")
    if len(set(poly)) != len(poly):
        raise NotSelfAvoiding("polygon repeats a vertex")
    for i, v in enumerate(poly):
        w = poly[(i + 1) % len(poly)]
        if not are_adjacent(v, w):
            raise NotSelfAvoiding(f"{v} and {w} are consecutive but not adjacent")

    interior = _interior_of_polygon(poly)
    if not interior:
        raise EmptyInterior("the polygon encloses no vertices")
    if not _connected(set(interior)):
        raise DisconnectedInterior(
            "the polygon pinches its interior into several components")

    pset = set(poly)
    edges = set()
    for v in interior:
        for w in hex_neighbors(v):
            edges.add((v, w) if v < w else (w, v))
    edges_t = tuple(sorted(edges))

    boundary = sorted({u for e in edges_t for u in e} - interior)
    for b in boundary:
        if b not in pset:
            raise NotSelfAvoiding(
                f"vertex {b} touches the interior but is not on the polygon")

    closure = interior | pset
    candidates = {h for v in interior for h in vertex_hexagons(v)}
    interior_hex = frozenset(
        h for h in candidates if all(c in interior for c in hexagon_corners(h)))
    enclosed_hex = frozenset(
        h for h in candidates if all(c in closure for c in hexagon_corners(h)))

    return Domain(
        polygon=_canonical_cycle(poly),
        interior=interior,
        edges=edges_t,
        boundary=tuple(boundary),
        interior_hexagons=interior_hex,
        enclosed_hexagons=enclosed_hex,
    )


def domain_from_interior(interior: Iterable[HexVertex]) -> Domain:
    """Build the domain whose interior is exactly the given vertex set.

    Raises if the set is empty, disconnected, or admits no bounding
    self-avoiding polygon (for instance horseshoe shapes whose notch pinches
    down to a single vertex).
    """
    want = {tuple(v) for v in interior}
    if not want:
        raise EmptyInterior("interior set is empty")
    if not _connected(set(want)):
        raise DisconnectedInterior("interior set is not connected")

    patch = {h for v in want for h in vertex_hexagons(v)}
    wall_edges = set()
    for h in patch:
        for e in hexagon_edges(h):
            a, b = edge_hexagons(e)
            other = b if a == h else a
            if other not in patch:
                wall_edges.add(e)

    adj: dict[HexVertex, list[HexVertex]] = {}
    for u, v in wall_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v, ns in adj.items():
        if len(ns) != 2:
            raise NotSelfAvoiding(
                f"interior set admits no bounding polygon (wall degree "
                f"{len(ns)} at {v})")

    start = min(adj)
    cycle = [start, min(adj[start])]
    while True:
        a, b = cycle[-2], cycle[-1]
        nxt = adj[b][0] if adj[b][0] != a else adj[b][1]
        if nxt == start:
            break
        cycle.append(nxt)
    if len(cycle) != len(adj):
        raise NotSelfAvoiding(
            "interior set admits no bounding polygon (wall is not one cycle)")

    dom = build_domain(cycle)
    if dom.interior != frozenset(want):
        raise NotSelfAvoiding(
            "interior set admits no bounding polygon (trace disagrees)")
    return dom


def domain_from_hexagons(hexagons: Iterable[TriVertex]) -> Domain:
    """Domain whose interior is the corner set of the given hexagons."""
    hs = {tuple(h) for h in hexagons}
    if not hs:
        raise EmptyInterior("no hexagons given")
    corners = {c for h in hs for c in hexagon_corners(h)}
    return domain_from_interior(corners)


# ---------------------------------------------------------------------------
# triangle domains with marked sides
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriangleDomain:
    """A triangular domain with its three sides marked.

    ``side`` is the (even) number of hexagons along each side of the
    triangle.  ``bottom/left/right_hexagons`` are the hexagons whose centers
    the three cut lines pass through, listed corner to corner (the corner
    hexagons belong to two sides).  ``bottom/left/right_boundary`` are the
    boundary vertices on each side; every boundary vertex of the domain is
    in exactly one of them, and all spokes on one side are parallel: they
    leave the domain at 270 degrees (bottom), 150 degrees (left) and
    30 degrees (right).  ``start_vertex`` is the middle bottom boundary
    vertex and ``start_edge`` its (vertical) spoke.
    """

    domain: Domain
    side: int
    bottom_hexagons: tuple[TriVertex, ...]
    left_hexagons: tuple[TriVertex, ...]
    right_hexagons: tuple[TriVertex, ...]
    bottom_boundary: tuple[HexVertex, ...]
    left_boundary: tuple[HexVertex, ...]
    right_boundary: tuple[HexVertex, ...]
    start_vertex: HexVertex
    start_edge: HexEdge


def triangle_domain(side: int) -> TriangleDomain:
    """Build the triangular domain of even side length ``side`` >= 2.

    The interior is cut out by three straight lines through the centers of
    the side hexagons; in doubled coordinates the interior is exactly
    ``{Y > 0} & {Y < 3X} & {Y < 6(side-1) - 3X}``.
    """
    if side < 2:
        raise OutOfRange("triangle side must be at least 2")
    if side % 2 != 0:
        raise OddSide("triangle side must be even")

    k = side
    interior = set()
    for s in range(0, 2 * k):
        for r in range(-1, 2 * k):
            for c in (UP, DOWN):
                x, y = hex_xy((r, s, c))
                if y > 0 and y < 3 * x and y < 6 * (k - 1) - 3 * x:
                    interior.add((r, s, c))
    dom = domain_from_interior(interior)

    bottom_h = tuple((r, 0) for r in range(k))
    left_h = tuple((0, s) for s in range(k))
    right_h = tuple((k - 1 - s, s) for s in range(k))
    bottom_b = tuple((r, -1, DOWN) for r in range(k - 1))
    left_b = tuple((-1, s, DOWN) for s in range(k - 1))
    right_b = tuple((k - 2 - s, s, DOWN) for s in range(k - 1))

    marked = set(bottom_b) | set(left_b) | set(right_b)
    if marked != set(dom.boundary):
        raise NotSelfAvoiding("triangle boundary does not match its marks")

    a = ((k - 2) // 2, -1, DOWN)
    start_edge = edge(a, ((k - 2) // 2, 0, UP))
    return TriangleDomain(
        domain=dom,
        side=k,
        bottom_hexagons=bottom_h,
        left_hexagons=left_h,
        right_hexagons=right_h,
        bottom_boundary=bottom_b,
        left_boundary=left_b,
        right_boundary=right_b,
        start_vertex=a,
        start_edge=start_edge,
    )


# ---------------------------------------------------------------------------
# removing paths from a domain
# ---------------------------------------------------------------------------

def _edge_components(edges: Iterable[HexEdge]) -> tuple[tuple[HexEdge, ...], ...]:
    """Connected components of an edge set, each sorted, sorted overall."""
    pool = sorted(set(edges))
    incident: dict[HexVertex, list[int]] = {}
    for i, (u, v) in enumerate(pool):
        incident.setdefault(u, []).append(i)
        incident.setdefault(v, []).append(i)
    seen = [False] * len(pool)
    comps = []
    for i in range(len(pool)):
        if seen[i]:
            continue
        seen[i] = True
        stack = [i]
        comp = []
        while stack:
            j = stack.pop()
            comp.append(pool[j])
            for v in pool[j]:
                for k in incident[v]:
                    if not seen[k]:
                        seen[k] = True
                        stack.append(k)
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))


def remove_path(domain: Domain,
                path: Sequence[HexVertex]) -> tuple[tuple[HexEdge, ...], ...]:
    """Remove a self-avoiding walk from a domain's edge set.

    Removes the walk's edges together with every remaining domain edge at the
    two endpoint vertices (at most two each; a boundary endpoint has none).
    Edges elsewhere stay, including edges at inner walk vertices that end up
    with a dangling endpoint; such edges can never be occupied by an even
    configuration, so they do not change any weighted sum.

    Returns the remaining edges as connected components.  A walk with fewer
    than two vertices removes nothing.
    """
    verts = [tuple(v) for v in path]
    if len(verts) < 2:
        return _edge_components(domain.edges)
    walk = path_edges(verts)
    for e in walk:
        if e not in domain.edge_index:
            raise PathNotInDomain(f"edge {e} is not in the domain")
    removed = set(walk)
    removed.update(domain.vertex_edges.get(verts[0], ()))
    removed.update(domain.vertex_edges.get(verts[-1], ()))
    return _edge_components(e for e in domain.edges if e not in removed)


def remove_paths(domain: Domain,
                 paths: Sequence[Sequence[HexVertex]]
                 ) -> tuple[tuple[HexEdge, ...], ...]:
    """Remove a union of vertex-disjoint walks, as in :func:`remove_path`."""
    removed = set()
    used: set[HexVertex] = set()
    for path in paths:
        verts = [tuple(v) for v in path]
        if used & set(verts):
            raise NotAPath("walks in a union must be vertex-disjoint")
        used.update(verts)
        if len(verts) < 2:
            continue
        walk = path_edges(verts)
        for e in walk:
            if e not in domain.edge_index:
                raise PathNotInDomain(f"edge {e} is not in the domain")
        removed.update(walk)
        removed.update(domain.vertex_edges.get(verts[0], ()))
        removed.update(domain.vertex_edges.get(verts[-1], ()))
    return _edge_components(e for e in domain.edges if e not in removed)


def try_domain_from_edges(edges: Iterable[HexEdge]) -> Domain | None:
    """Reconstruct a Domain from a bare edge set, or None if there is none.

    An edge set is a domain exactly when taking its degree-3 vertices as the
    interior reproduces it: every edge touches the interior and the interior
    admits a bounding polygon.  Components left over by :func:`remove_path`
    with both walk endpoints on the boundary are domains; stray pieces such
    as a single dangling edge are not, and yield None.
    """
    es = set(edges)
    if not es:
        return None
    deg: dict[HexVertex, int] = {}
    for u, v in es:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    interior = {v for v, d in deg.items() if d == 3}
    if not interior:
        return None
    covered = {e for e in es if e[0] in interior or e[1] in interior}
    if covered != es:
        return None
    try:
        dom = domain_from_interior(interior)
    except HexloopError:
        return None
    if set(dom.edges) != es:
        return None
    return dom


# ---------------------------------------------------------------------------
# standard hexagon families and the ball-with-annulus pair
# ---------------------------------------------------------------------------

def rhombus_hexagons(k: int) -> frozenset[TriVertex]:
    """The rhombus of hexagons {(r, s): 0 <= r, s <= k}."""
    if k < 0:
        raise OutOfRange("rhombus size must be nonnegative")
    return frozenset((r, s) for r in range(k + 1) for s in range(k + 1))


def rectangle_hexagons(width: int, height: int) -> frozenset[TriVertex]:
    """An axial box of hexagons, ``width`` columns by ``height`` rows."""
    if width < 1 or height < 1:
        raise OutOfRange("rectangle sides must be positive")
    return frozenset((r, s) for r in range(width) for s in range(height))


def ball_and_annulus(k: int) -> tuple[frozenset[TriVertex], frozenset[HexEdge]]:
    """The ball of radius ``k`` and the edge annulus around it.

    Returns ``(ball, annulus)`` where ``ball`` is the radius-``k`` ball of
    hexagons around the origin and ``annulus`` is the set of lattice edges
    both of whose endpoints are corners of ring hexagons at distance
    ``k+1 .. 2k`` from the origin.  Every annulus edge borders a hexagon
    within distance ``2k + 1``.
    """
    if k < 1:
        raise OutOfRange("annulus radius must be at least 1")
    ball = hexagon_ball(k)
    ring = hexagon_ball(2 * k) - ball
    ring_corners = {c for h in ring for c in hexagon_corners(h)}
    annulus = set()
    for v in ring_corners:
        for w in hex_neighbors(v):
            if w in ring_corners:
                annulus.add((v, w) if v < w else (w, v))
    return ball, frozenset(annulus)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def domain_from_json(obj: dict) -> Domain:
    """Build a domain from its JSON description.

    Accepted kinds: ``polygon`` (list of [r, s, c]), ``interior`` (list of
    [r, s, c]), ``hexagons`` (list of [r, s]), ``triangle`` (``side``),
    ``ball`` (``radius``).
    """
    kind = obj.get("kind")
    if kind == "polygon":
        return build_domain([tuple(v) for v in obj["polygon"]])
    if kind == "interior":
        return domain_from_interior([tuple(v) for v in obj["interior"]])
    if kind == "hexagons":
        return domain_from_hexagons([tuple(h) for h in obj["hexagons"]])
    if kind == "triangle":
        return triangle_domain(int(obj["side"])).domain
    if kind == "ball":
        return domain_from_hexagons(hexagon_ball(int(obj["radius"])))
    raise OutOfRange(f"unknown domain kind {kind!r}")
