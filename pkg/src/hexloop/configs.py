"""Configurations: loop configurations on edges, spin configurations on hexagons.

A *loop configuration* is a set of lattice edges in which every vertex has
even degree (0 or 2), except for a designated set of defect vertices of
degree 1.  Its weight is ``x^(#edges) * n^(#loops)`` where a loop is a
connected component containing no defect.

A *spin configuration* assigns ``+1`` or ``-1`` to every hexagon.  A
:class:`SpinSystem` fixes the scene: a set of *free* hexagons, a *context*
superset whose remaining spins are frozen, and a uniform *sea* sign filling
the rest of the plane (the exterior beyond the context is assumed
connected).  The weight of an assignment is::

    n^k * x^e * exp(h * r + hp * rp)

where, writing Q for the free hexagons together with their neighbours,

- ``k + 1``  is the number of monochromatic clusters meeting Q (the sea
  merges same-sign context hexagons that touch the exterior; a cluster made
  of the sea alone does not count),
- ``e``      is the number of unequal adjacent pairs touching a free hexagon,
- ``r``      is the sum of the free spins,
- ``rp``     is half the difference between the numbers of all-plus and
  all-minus triangles touching a free hexagon (triangles of hexagons
  correspond one-to-one to lattice vertices).

Spins and loops are two views of the same model: the domain walls of a spin
assignment form an even edge set on the edges bordering the free hexagons,
and with a constant fixed boundary the correspondence is one to one
(:func:`spins_to_loops` / :func:`loops_to_spins`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InconsistentParity, OutOfRange
from .lattice import (
    HexEdge,
    HexVertex,
    TriVertex,
    edge_hexagons,
    hexagon_corners,
    hexagon_edges,
    shared_edge,
    tri_neighbors,
    vertex_hexagons,
)


# ---------------------------------------------------------------------------
# model parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Params:
    """Loop-weight ``n``, edge-weight ``x``, and external fields ``h, hp``."""

    n: float
    x: float
    h: float = 0.0
    hp: float = 0.0

    def __post_init__(self):
        if not (self.n > 0):
            raise OutOfRange(f"loop weight n must be positive, got {self.n}")
        if not (self.x > 0):
            raise OutOfRange(f"edge weight x must be positive, got {self.x}")

    @property
    def in_monotone_region(self) -> bool:
        """True where the spin measure is monotone (FKG): n >= 1 and
        n * x^2 <= exp(-|hp|)."""
        return self.n >= 1.0 and self.n * self.x * self.x <= math.exp(-abs(self.hp))


# ---------------------------------------------------------------------------
# loop configurations
# ---------------------------------------------------------------------------

def config_degrees(edges: Iterable[HexEdge]) -> dict[HexVertex, int]:
    deg: dict[HexVertex, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return deg


def is_even_config(edges: Iterable[HexEdge],
                   defects: Iterable[HexVertex] = ()) -> bool:
    """True if every vertex has degree 0 or 2, except the defects which must
    have degree exactly 1."""
    dset = set(defects)
    deg = config_degrees(edges)
    if any(deg.get(d, 0) != 1 for d in dset):
        return False
    return all(c == 2 for v, c in deg.items() if v not in dset)


def loop_components(edges: Iterable[HexEdge]) -> tuple[frozenset[HexEdge], ...]:
    """Connected components of an edge set, as frozensets of edges."""
    es = list(edges)
    parent: dict[HexVertex, HexVertex] = {}

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for u, v in es:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[HexVertex, list[HexEdge]] = {}
    for e in es:
        groups.setdefault(find(e[0]), []).append(e)
    return tuple(frozenset(g) for g in groups.values())


def loop_count(edges: Iterable[HexEdge],
               defects: Iterable[HexVertex] = ()) -> int:
    """Number of loops: components that contain no defect vertex."""
    dset = set(defects)
    count = 0
    for comp in loop_components(edges):
        if not any(u in dset for e in comp for u in e):
            count += 1
    return count


def log_loop_weight(params: Params, n_edges: int, n_loops: int) -> float:
    return n_edges * math.log(params.x) + n_loops * math.log(params.n)


# ---------------------------------------------------------------------------
# spin systems
# ---------------------------------------------------------------------------

def border_edges(hexagons: Iterable[TriVertex]) -> tuple[HexEdge, ...]:
    """All lattice edges bordering at least one of the given hexagons."""
    hs = set(hexagons)
    out = {e for h in hs for e in hexagon_edges(h)}
    return tuple(sorted(out))


def _check_spin(value) -> int:
    if value not in (-1, 1):
        raise OutOfRange(f"spins must be +1 or -1, got {value!r}")
    return int(value)


class SpinSystem:
    """Free hexagons inside a frozen context, with a uniform sea beyond.

    Parameters
    ----------
    free:
        The hexagons whose spins vary.
    fixed:
        Spins for context hexagons.  May cover any superset of the
        neighbours of ``free`` (minus ``free`` itself); hexagons of the
        neighbourhood not listed default to the sea sign.
    sea:
        Sign of every hexagon beyond the context (default ``+1``).  The
        exterior of the context must be connected; the constructors used in
        this package only build such systems.
    """

    def __init__(self, free: Iterable[TriVertex],
                 fixed: Mapping[TriVertex, int] | int | None = None,
                 sea: int = 1):
        self.sea = _check_spin(sea)
        self.free: tuple[TriVertex, ...] = tuple(sorted({tuple(h) for h in free}))
        if not self.free:
            raise OutOfRange("a spin system needs at least one free hexagon")
        fset = set(self.free)
        ring = {g for h in fset for g in tri_neighbors(h)} - fset

        if fixed is None:
            fixed_map: dict[TriVertex, int] = {}
        elif isinstance(fixed, int):
            fixed_map = {h: _check_spin(fixed) for h in ring}
        else:
            fixed_map = {tuple(h): _check_spin(v) for h, v in fixed.items()}
            overlap = set(fixed_map) & fset
            if overlap:
                raise OutOfRange(f"fixed spins overlap free hexagons: {overlap}")
        for h in ring:
            fixed_map.setdefault(h, self.sea)
        self.fixed: dict[TriVertex, int] = fixed_map
        self.context: tuple[TriVertex, ...] = tuple(sorted(fset | set(fixed_map)))

    # -- cached structure ---------------------------------------------------

    @cached_property
    def _index(self) -> dict[TriVertex, int]:
        return {h: i for i, h in enumerate(self.context)}

    @cached_property
    def free_index(self) -> dict[TriVertex, int]:
        return {h: i for i, h in enumerate(self.free)}

    @cached_property
    def _pairs(self) -> tuple[tuple[int, int], ...]:
        """Adjacent context pairs (i < j by context index)."""
        idx = self._index
        out = set()
        for h in self.context:
            i = idx[h]
            for g in tri_neighbors(h):
                j = idx.get(g)
                if j is not None and i < j:
                    out.add((i, j))
        return tuple(sorted(out))

    @cached_property
    def _free_pairs(self) -> tuple[tuple[int, int], ...]:
        """Adjacent context pairs with at least one free hexagon."""
        fset = set(self.free)
        return tuple((i, j) for i, j in self._pairs
                     if self.context[i] in fset or self.context[j] in fset)

    @cached_property
    def _exterior_touching(self) -> tuple[int, ...]:
        ctx = set(self.context)
        return tuple(self._index[h] for h in self.context
                     if any(g not in ctx for g in tri_neighbors(h)))

    @cached_property
    def _counted(self) -> tuple[int, ...]:
        """Indices of hexagons in free union neighbours-of-free."""
        fset = set(self.free)
        q = set(fset)
        for h in fset:
            q.update(tri_neighbors(h))
        return tuple(sorted(self._index[h] for h in q))

    @cached_property
    def _triangles(self) -> tuple[tuple[int, int, int], ...]:
        """Index triples of triangles touching a free hexagon.

        Triangles of hexagons are in bijection with lattice vertices: the
        three hexagons meeting at a vertex are pairwise adjacent.
        """
        fset = set(self.free)
        idx = self._index
        seen = set()
        out = []
        for h in self.free:
            for corner in hexagon_corners(h):
                if corner in seen:
                    continue
                seen.add(corner)
                tri = vertex_hexagons(corner)
                if any(t in fset for t in tri):
                    out.append(tuple(sorted(idx[t] for t in tri)))
        return tuple(sorted(set(out)))

    # -- assignments ----------------------------------------------------------

    def full_spins(self, spins) -> list[int]:
        """Spins for the whole context, from free spins given as a mapping or
        a sequence aligned with ``self.free``."""
        if isinstance(spins, Mapping):
            values = [_check_spin(spins[h]) for h in self.free]
        else:
            values = [_check_spin(v) for v in spins]
            if len(values) != len(self.free):
                raise OutOfRange(
                    f"expected {len(self.free)} spins, got {len(values)}")
        full = [0] * len(self.context)
        for i, h in enumerate(self.context):
            if h in self.free_index:
                full[i] = values[self.free_index[h]]
            else:
                full[i] = self.fixed[h]
        return full

    def __repr__(self) -> str:
        return (f"SpinSystem(|free|={len(self.free)}, "
                f"|context|={len(self.context)}, sea={self.sea:+d})")


@dataclass(frozen=True)
class SpinCounts:
    """Integer statistics of a spin assignment.

    ``twice_rp`` is kept doubled so that everything stays integral; the
    field term uses ``rp = twice_rp / 2``.
    """

    k: int
    e: int
    r: int
    twice_rp: int

    @property
    def rp(self) -> float:
        return self.twice_rp / 2.0


def spin_counts(system: SpinSystem, spins) -> SpinCounts:
    """Cluster, wall, magnetization and triangle counts of an assignment."""
    full = system.full_spins(spins)
    m = len(full)

    parent = list(range(m + 1))  # last slot is the sea
    sea_node = m

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i, j in system._pairs:
        if full[i] == full[j]:
            union(i, j)
    for i in system._exterior_touching:
        if full[i] == system.sea:
            union(i, sea_node)

    k = len({find(i) for i in system._counted}) - 1

    e = 0
    for i, j in system._free_pairs:
        if full[i] != full[j]:
            e += 1

    fidx = system._index
    r = sum(full[fidx[h]] for h in system.free)

    twice_rp = 0
    for a, b, c in system._triangles:
        t = full[a] + full[b] + full[c]
        if t == 3:
            twice_rp += 1
        elif t == -3:
            twice_rp -= 1

    return SpinCounts(k=k, e=e, r=r, twice_rp=twice_rp)


def log_spin_weight(params: Params, counts: SpinCounts) -> float:
    return (counts.k * math.log(params.n)
            + counts.e * math.log(params.x)
            + params.h * counts.r
            + params.hp * (counts.twice_rp / 2.0))


# ---------------------------------------------------------------------------
# spins <-> loops
# ---------------------------------------------------------------------------

def spins_to_loops(system: SpinSystem, spins) -> frozenset[HexEdge]:
    """Domain walls of an assignment, on the edges bordering the free set."""
    full = system.full_spins(spins)
    idx = system._index
    fset = set(system.free)
    walls = set()
    for h in system.free:
        sh = full[idx[h]]
        for e in hexagon_edges(h):
            a, b = edge_hexagons(e)
            other = b if a == h else a
            if other in fset and other < h:
                continue  # counted from the other side
            so = full[idx[other]] if other in idx else system.sea
            if so != sh:
                walls.add(e)
    return frozenset(walls)


def loops_to_spins(system: SpinSystem, walls: Iterable[HexEdge]) -> dict[TriVertex, int]:
    """Reconstruct free spins from their domain walls.

    The wall set must be a subset of the edges bordering the free hexagons;
    propagation starts from the fixed spins, and any contradiction (a wall
    set that is not realizable with these boundary spins) raises
    :class:`InconsistentParity`.
    """
    wset = set(walls)
    allowed = set(border_edges(system.free))
    if not wset <= allowed:
        raise InconsistentParity(
            "wall set uses edges that do not border the free hexagons")

    fset = set(system.free)
    sigma: dict[TriVertex, int] = dict(system.fixed)
    stack = list(system.fixed)
    assigned_free: dict[TriVertex, int] = {}

    # breadth-first propagation over pairs touching a free hexagon
    while stack:
        h = stack.pop()
        for g in tri_neighbors(h):
            if not (h in fset or g in fset):
                continue
            if g not in fset and g not in sigma:
                continue
            sign = -1 if shared_edge(h, g) in wset else 1
            want = sigma[h] * sign
            if g in sigma:
                if sigma[g] != want:
                    raise InconsistentParity(
                        f"walls are inconsistent at hexagon {g}")
            else:
                sigma[g] = want
                if g in fset:
                    assigned_free[g] = want
                stack.append(g)

    if len(assigned_free) != len(fset):
        missing = fset - set(assigned_free)
        raise InconsistentParity(f"walls leave hexagons unassigned: {missing}")

    # every wall edge must actually be a wall of the reconstruction
    for e in allowed:
        a, b = edge_hexagons(e)
        sa = sigma.get(a, system.sea)
        sb = sigma.get(b, system.sea)
        if (sa != sb) != (e in wset):
            raise InconsistentParity(f"walls are inconsistent across {e}")

    return {h: assigned_free[h] for h in system.free}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def loops_to_json(edges: Iterable[HexEdge]) -> list:
    return [[list(u), list(v)] for u, v in sorted(edges)]


def loops_from_json(data: Iterable) -> frozenset[HexEdge]:
    out = set()
    for u, v in data:
        a, b = tuple(u), tuple(v)
        out.add((a, b) if a < b else (b, a))
    return frozenset(out)


def spins_to_json(system: SpinSystem, spins) -> dict:
    full = system.full_spins(spins)
    idx = system._index
    return {
        "free": [[*h, full[idx[h]]] for h in system.free],
        "fixed": [[*h, s] for h, s in sorted(system.fixed.items())],
        "sea": system.sea,
    }


def spins_from_json(data: Mapping) -> tuple[SpinSystem, dict[TriVertex, int]]:
    """Invert :func:`spins_to_json`: rebuild the system and its assignment."""
    spins = {(q, r): s for q, r, s in data["free"]}
    fixed = {(q, r): s for q, r, s in data.get("fixed", [])}
    system = SpinSystem(spins, fixed or None, sea=data.get("sea", 1))
    return system, spins
