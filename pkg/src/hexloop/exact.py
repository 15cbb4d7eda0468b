"""Exact weighted sums over loop configurations, and derived observables.

Two independent engines compute the weighted sum over all configurations on
an edge set with a prescribed defect set: a depth-first enumeration with
degree pruning (:func:`brute_force_Z`) and a left-to-right sweep over link
states (:func:`sweep_Z`).  Both reduce an instance to an integer table
``{(edge count, loop count): multiplicity}`` that is independent of the
weights, so one combinatorial pass serves a whole parameter grid; tables are
evaluated by log-sum-exp into a :class:`WeightSum`.

On top of the engines sit the relative weight of a self-avoiding walk (the
walk's edge weight times the ratio of the sums with and without the walk
carved out), the two-route defect-pair sum of :func:`path_sum`, the complex
edge-midpoint observable of :func:`parafermion_field` with its local
three-term relation, and exact event probabilities for the spin form of the
model.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from .configs import (
    Params,
    SpinSystem,
    loop_count,
    log_spin_weight,
    spin_counts,
    spins_to_loops,
)
from .errors import (
    BoundaryVertex,
    NotAPath,
    OutOfRange,
    Overflow,
    PathNotInDomain,
    TooLarge,
    WidthExceeded,
)
from .lattice import (
    Domain,
    HexEdge,
    HexVertex,
    _edge_components,
    direction_class,
    edge,
    hex_position,
    hex_xy,
    path_edges,
    remove_paths,
    turn_sign,
)

MAX_BRUTE_EDGES = 26
MAX_SWEEP_WIDTH = 16
MAX_FIELD_EDGES = 40
MAX_SPIN_SITES = 16

#: table of a configuration sum: (number of edges, number of loops) -> count
Table = dict[tuple[int, int], int]

_DEFECT_END = -1


# ---------------------------------------------------------------------------
# log-magnitude arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSum:
    """A possibly huge positive, negative, or complex number in log form.

    ``log_magnitude`` is the natural log of the absolute value and ``phase``
    a unit-modulus complex factor (``0j`` for an exactly zero sum, in which
    case the magnitude is ``-inf``).
    """

    log_magnitude: float
    phase: complex = 1.0 + 0j

    @classmethod
    def zero(cls) -> "WeightSum":
        return cls(float("-inf"), 0j)

    @classmethod
    def from_value(cls, value: complex) -> "WeightSum":
        if value == 0:
            return cls.zero()
        mag = abs(value)
        return cls(math.log(mag), value / mag)

    @classmethod
    def sum_terms(cls, terms: Iterable[tuple[float, complex]]) -> "WeightSum":
        """Log-sum-exp of ``(log magnitude, phase)`` terms, scaled by the
        largest magnitude so intermediate exponentials stay tame."""
        live = [(lg, ph) for lg, ph in terms if ph != 0 and lg != float("-inf")]
        if not live:
            return cls.zero()
        top = max(lg for lg, _ in live)
        acc = 0j
        for lg, ph in live:
            acc += ph * math.exp(lg - top)
        if acc == 0:
            return cls.zero()
        mag = abs(acc)
        return cls(top + math.log(mag), acc / mag)

    @property
    def is_zero(self) -> bool:
        return self.phase == 0

    @property
    def value(self) -> complex:
        """The plain complex value (raises if too large for a double)."""
        if self.is_zero:
            return 0j
        if self.log_magnitude > math.log(sys.float_info.max):
            raise Overflow(f"magnitude exp({self.log_magnitude:.6g}) "
                           "does not fit in a double")
        return self.phase * math.exp(self.log_magnitude)

    @property
    def real(self) -> float:
        return self.value.real

    def __mul__(self, other: "WeightSum") -> "WeightSum":
        if self.is_zero or other.is_zero:
            return WeightSum.zero()
        return WeightSum(self.log_magnitude + other.log_magnitude,
                         self.phase * other.phase)

    def __truediv__(self, other: "WeightSum") -> "WeightSum":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero WeightSum")
        if self.is_zero:
            return WeightSum.zero()
        return WeightSum(self.log_magnitude - other.log_magnitude,
                         self.phase / other.phase)


# ---------------------------------------------------------------------------
# model constants
# ---------------------------------------------------------------------------

def x_critical(n: float) -> float:
    """Critical edge weight ``1 / sqrt(2 + sqrt(2 - n))`` for ``0 < n <= 2``."""
    if not 0 < n <= 2:
        raise OutOfRange(f"critical point defined for 0 < n <= 2, got {n}")
    return 1.0 / math.sqrt(2.0 + math.sqrt(2.0 - n))


def sigma_exponent(n: float) -> float:
    """Winding exponent ``1 - (3 / 4 pi) arccos(-n / 2)`` for ``0 <= n <= 2``."""
    if not 0 <= n <= 2:
        raise OutOfRange(f"winding exponent defined for 0 <= n <= 2, got {n}")
    return 1.0 - 3.0 / (4.0 * math.pi) * math.acos(-n / 2.0)


def catalan(k: int) -> int:
    """The k-th Catalan number ``C(2k, k) / (k + 1)`` as an exact integer."""
    if k != int(k) or k < 0:
        raise OutOfRange(f"catalan numbers are indexed by k >= 0, got {k}")
    k = int(k)
    c = math.comb(2 * k, k) // (k + 1)
    if c > sys.float_info.max:
        raise Overflow(f"catalan({k}) exceeds double range")
    return c


# ---------------------------------------------------------------------------
# region plumbing
# ---------------------------------------------------------------------------

def _edges_of(region) -> tuple[HexEdge, ...]:
    """Edge tuple of a Domain, a wrapper holding one, or a raw edge set."""
    region = getattr(region, "domain", region)
    got = getattr(region, "edges", region)
    return tuple(sorted({edge(u, v) for u, v in got}))


def _as_walks(gamma) -> list[tuple[HexVertex, ...]]:
    """Normalize a single vertex walk or a collection of walks."""
    walks = list(gamma)
    if not walks:
        return []
    head = walks[0]
    if isinstance(head, tuple) and len(head) == 3 and isinstance(head[0], int):
        return [tuple(tuple(v) for v in walks)]
    return [tuple(tuple(v) for v in w) for w in walks]


def _remove_from_edges(edges: Iterable[HexEdge],
                       walks: Sequence[Sequence[HexVertex]],
                       ) -> tuple[tuple[HexEdge, ...], ...]:
    """Set-difference walk removal on a bare edge set.

    Unlike :func:`hexloop.lattice.remove_path` this does not require the
    walk's edges to be present: carving a walk out of a region that already
    lost the walk's first edge (as happens when a longer walk is peeled off
    one piece at a time) removes whatever is still there.  Endpoint edges are
    removed within the current set.
    """
    pool = set(edges)
    incident: dict[HexVertex, list[HexEdge]] = {}
    for e in pool:
        incident.setdefault(e[0], []).append(e)
        incident.setdefault(e[1], []).append(e)
    removed: set[HexEdge] = set()
    met: set[HexVertex] = set()
    for walk in walks:
        if met & set(walk):
            raise NotAPath("walks in a union must be vertex-disjoint")
        met.update(walk)
        if len(walk) < 2:
            continue
        removed.update(path_edges(walk))
        for end in (walk[0], walk[-1]):
            removed.update(incident.get(end, ()))
    return _edge_components(pool - removed)


# ---------------------------------------------------------------------------
# brute-force engine
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _brute_table(edges: tuple[HexEdge, ...],
                 defects: frozenset[HexVertex]) -> Table:
    verts = sorted({u for e in edges for u in e})
    vid = {v: i for i, v in enumerate(verts)}
    if any(d not in vid for d in defects):
        return {}
    nv = len(verts)
    total = [0] * nv
    for u, v in edges:
        total[vid[u]] += 1
        total[vid[v]] += 1
    cap = [1 if v in defects else 2 for v in verts]
    want_one = [v in defects for v in verts]

    deg = [0] * nv
    seen = [0] * nv
    chosen: list[HexEdge] = []
    table: Table = {}

    def rec(k: int) -> None:
        if k == len(edges):
            key = (len(chosen), loop_count(chosen, defects))
            table[key] = table.get(key, 0) + 1
            return
        u, v = edges[k]
        iu, iv = vid[u], vid[v]
        for take in (False, True):
            if take and (deg[iu] >= cap[iu] or deg[iv] >= cap[iv]):
                break
            if take:
                deg[iu] += 1
                deg[iv] += 1
                chosen.append(edges[k])
            seen[iu] += 1
            seen[iv] += 1
            ok = True
            for i in (iu, iv):
                if seen[i] == total[i]:
                    d = deg[i]
                    ok = ok and (d == 1 if want_one[i] else d % 2 == 0)
            if ok:
                rec(k + 1)
            seen[iu] -= 1
            seen[iv] -= 1
            if take:
                deg[iu] -= 1
                deg[iv] -= 1
                chosen.pop()

    rec(0)
    return table


def brute_force_table(edges: Iterable[HexEdge],
                      defects: Iterable[HexVertex] = (),
                      *, max_edges: int = MAX_BRUTE_EDGES) -> Table:
    """Configuration table by exhaustive search with degree pruning."""
    es = tuple(sorted({edge(u, v) for u, v in edges}))
    if len(es) > max_edges:
        raise TooLarge(f"{len(es)} edges exceed the brute-force cap "
                       f"of {max_edges}")
    return dict(_brute_table(es, frozenset(tuple(d) for d in defects)))


# ---------------------------------------------------------------------------
# sweep engine
# ---------------------------------------------------------------------------

def sweep_width(edges: Iterable[HexEdge]) -> int:
    """Largest number of edges crossing the left-to-right sweep frontier."""
    es = tuple(sorted({edge(u, v) for u, v in edges}))
    verts = sorted({u for e in es for u in e}, key=hex_xy)
    order = {v: i for i, v in enumerate(verts)}
    open_at = [0] * (len(verts) + 1)
    for u, v in es:
        lo, hi = sorted((order[u], order[v]))
        open_at[lo + 1] += 1
        open_at[hi + 1] -= 1
    width = best = 0
    for d in open_at:
        width += d
        best = max(best, width)
    return best


def _link(pairing: dict[int, int], end0, end1) -> int:
    """Join two strand ends at a degree-2 vertex; return 1 on a closed loop.

    An end is ``(arriving, edge id)``: an arriving edge consumes its open
    slot and exposes the far end of its strand, a fresh edge opens a slot.
    """
    arr0, e0 = end0
    arr1, e1 = end1
    if arr0 and arr1 and pairing[e0] == e1:
        del pairing[e0]
        del pairing[e1]
        return 1
    far0 = pairing.pop(e0) if arr0 else e0
    far1 = pairing.pop(e1) if arr1 else e1
    if far0 == _DEFECT_END and far1 == _DEFECT_END:
        pass  # a strand now runs defect to defect
    elif far0 == _DEFECT_END:
        pairing[far1] = _DEFECT_END
    elif far1 == _DEFECT_END:
        pairing[far0] = _DEFECT_END
    else:
        pairing[far0] = far1
        pairing[far1] = far0
    return 0


def _terminate(pairing: dict[int, int], end) -> None:
    """Stop a strand at a defect vertex of degree one."""
    arr, e = end
    if not arr:
        pairing[e] = _DEFECT_END
        return
    far = pairing.pop(e)
    if far != _DEFECT_END:
        pairing[far] = _DEFECT_END


@lru_cache(maxsize=None)
def _sweep_table(edges: tuple[HexEdge, ...],
                 defects: frozenset[HexVertex]) -> Table:
    verts = sorted({u for e in edges for u in e}, key=hex_xy)
    order = {v: i for i, v in enumerate(verts)}
    if any(d not in order for d in defects):
        return {}
    arriving: list[list[int]] = [[] for _ in verts]
    fresh: list[list[int]] = [[] for _ in verts]
    for i, (u, v) in enumerate(edges):
        if order[u] < order[v]:
            fresh[order[u]].append(i)
            arriving[order[v]].append(i)
        else:
            fresh[order[v]].append(i)
            arriving[order[u]].append(i)

    states: dict[tuple, Table] = {(): {(0, 0): 1}}
    for vi, v in enumerate(verts):
        want_one = v in defects
        nxt: dict[tuple, Table] = {}
        for key, poly in states.items():
            base = dict(key)
            present = [e for e in arriving[vi] if e in base]
            for r in range(len(fresh[vi]) + 1):
                degree = len(present) + r
                if want_one:
                    if degree != 1:
                        continue
                elif degree % 2:
                    continue
                for taken in combinations(fresh[vi], r):
                    pairing = dict(base)
                    ends = ([(True, e) for e in present]
                            + [(False, e) for e in taken])
                    closed = 0
                    if degree == 2:
                        closed = _link(pairing, ends[0], ends[1])
                    elif degree == 1:
                        _terminate(pairing, ends[0])
                    key2 = tuple(sorted(pairing.items()))
                    bucket = nxt.setdefault(key2, {})
                    for (m, l), c in poly.items():
                        mk = (m + r, l + closed)
                        bucket[mk] = bucket.get(mk, 0) + c
        states = nxt
    return states.get((), {})


def sweep_table(edges: Iterable[HexEdge],
                defects: Iterable[HexVertex] = (),
                *, max_width: int = MAX_SWEEP_WIDTH) -> Table:
    """Configuration table by dynamic programming over link states."""
    es = tuple(sorted({edge(u, v) for u, v in edges}))
    width = sweep_width(es)
    if width > max_width:
        raise WidthExceeded(f"sweep frontier width {width} exceeds the cap "
                            f"of {max_width}")
    return dict(_sweep_table(es, frozenset(tuple(d) for d in defects)))


# ---------------------------------------------------------------------------
# weighted sums
# ---------------------------------------------------------------------------

def evaluate_table(table: Table, params: Params) -> WeightSum:
    """Evaluate a configuration table at given weights by log-sum-exp."""
    log_x = math.log(params.x)
    log_n = math.log(params.n)
    return WeightSum.sum_terms(
        (m * log_x + l * log_n + math.log(c), 1.0 + 0j)
        for (m, l), c in sorted(table.items()))


def brute_force_Z(region, defects: Iterable[HexVertex],
                  params: Params, *, max_edges: int = MAX_BRUTE_EDGES,
                  ) -> WeightSum:
    """Weighted configuration sum with the given defect set, by brute force."""
    return evaluate_table(
        brute_force_table(_edges_of(region), defects, max_edges=max_edges),
        params)


def sweep_Z(region, defects: Iterable[HexVertex],
            params: Params, *, max_width: int = MAX_SWEEP_WIDTH) -> WeightSum:
    """Weighted configuration sum with the given defect set, by sweeping."""
    return evaluate_table(
        sweep_table(_edges_of(region), defects, max_width=max_width),
        params)


def _table(edges: tuple[HexEdge, ...], defects: frozenset[HexVertex],
           engine: str) -> Table:
    if engine == "sweep":
        width = sweep_width(edges)
        if width > MAX_SWEEP_WIDTH:
            raise WidthExceeded(f"sweep frontier width {width} exceeds "
                                f"{MAX_SWEEP_WIDTH}")
        return _sweep_table(edges, defects)
    if engine == "brute":
        if len(edges) > MAX_BRUTE_EDGES:
            raise TooLarge(f"{len(edges)} edges exceed the brute-force cap")
        return _brute_table(edges, defects)
    raise OutOfRange(f"unknown engine {engine!r}")


def _log_Z(edges: tuple[HexEdge, ...], defects: frozenset[HexVertex],
           params: Params, engine: str) -> float:
    ws = evaluate_table(_table(edges, defects, engine), params)
    return ws.log_magnitude


# ---------------------------------------------------------------------------
# relative weights of walks
# ---------------------------------------------------------------------------

def relative_weight(region, gamma, params: Params, *,
                    engine: str = "sweep") -> float:
    """Relative weight of a self-avoiding walk (or disjoint union of walks).

    This is ``x`` to the walk length times the ratio of configuration sums
    after and before carving the walk out of the region.  Carving removes the
    walk's edges and the remaining edges at its two endpoints.  For a
    :class:`Domain` the walk must lie inside it; for a raw edge set the
    removal is set-theoretic, so a walk may overhang edges that are already
    missing (this is what makes the two-step and one-step ways of carving a
    concatenated walk agree).
    """
    walks = _as_walks(gamma)
    edges = _edges_of(region)
    if isinstance(region, Domain):
        comps = remove_paths(region, walks)
    else:
        comps = _remove_from_edges(edges, walks)
    length = sum(len(w) - 1 for w in walks if len(w) >= 2)
    log_rest = sum(_log_Z(c, frozenset(), params, engine) for c in comps)
    log_full = _log_Z(edges, frozenset(), params, engine)
    return math.exp(length * math.log(params.x) + log_rest - log_full)


@dataclass(frozen=True)
class PathSum:
    """Both evaluation routes of the defect-pair sum ``Z^{a,b} / Z``.

    ``from_defects`` sums partition functions with defect pairs;
    ``from_walks`` enumerates self-avoiding walks and adds their relative
    weights.  The two are equal up to rounding.
    """

    from_defects: float
    from_walks: float
    n_walks: int

    @property
    def value(self) -> float:
        return self.from_defects


def _walk_enumeration(domain: Domain, a: HexVertex,
                      targets: frozenset[HexVertex]):
    """Yield every self-avoiding walk in the domain from ``a`` to a target."""
    walk = [a]
    on_walk = {a}

    def rec(v: HexVertex):
        for e in domain.vertex_edges.get(v, ()):
            w = e[1] if e[0] == v else e[0]
            if w in on_walk:
                continue
            walk.append(w)
            on_walk.add(w)
            if w in targets:
                yield tuple(walk)
            yield from rec(w)
            on_walk.discard(w)
            walk.pop()

    yield from rec(a)


def path_sum(domain: Domain, a: HexVertex, b, params: Params, *,
             engine: str = "sweep") -> PathSum:
    """Sum of relative weights of walks from ``a`` to ``b``, both ways.

    ``b`` may be a single vertex or a collection of target vertices (e.g. one
    side of a triangular domain); the sum then runs over walks ending at any
    of them.
    """
    a = tuple(a)
    if domain.degree(a) == 0:
        raise OutOfRange(f"{a} is not a vertex of the domain")
    if isinstance(b, tuple) and len(b) == 3 and isinstance(b[0], int):
        targets = frozenset([b])
    else:
        targets = frozenset(tuple(v) for v in b)
    if not targets:
        raise OutOfRange("no target vertices")
    for t in targets:
        if domain.degree(t) == 0:
            raise OutOfRange(f"{t} is not a vertex of the domain")

    edges = _edges_of(domain)
    log_full = _log_Z(edges, frozenset(), params, engine)
    from_defects = 0.0
    for t in sorted(targets):
        if t == a:
            continue
        lz = _log_Z(edges, frozenset((a, t)), params, engine)
        if lz != float("-inf"):
            from_defects += math.exp(lz - log_full)

    from_walks = 0.0
    count = 0
    for walk in _walk_enumeration(domain, a, targets):
        from_walks += relative_weight(domain, walk, params, engine=engine)
        count += 1
    return PathSum(from_defects, from_walks, count)


# ---------------------------------------------------------------------------
# the edge-midpoint observable
# ---------------------------------------------------------------------------

def _midpoint(e: HexEdge) -> complex:
    pu = hex_position(e[0])
    pv = hex_position(e[1])
    return complex((pu[0] + pv[0]) / 2.0, (pu[1] + pv[1]) / 2.0)


def parafermion_field(domain: Domain, z0: HexEdge, params: Params,
                      sigma: float | None = None, *,
                      max_edges: int = MAX_FIELD_EDGES,
                      engine: str = "sweep") -> dict[HexEdge, complex]:
    """The complex observable at every edge midpoint of the domain.

    The value at a midpoint ``z`` sums, over all self-avoiding midpoint
    walks from ``z0`` to ``z``, the walk's relative weight times
    ``exp(-i * sigma * winding)``.  A walk's two half-edges count one half
    each toward its length; carving it out removes the two parent edges
    fully, together with the interior edges.  The start ``z0`` must be the
    midpoint of an edge with one endpoint on the domain boundary, and its
    own value is exactly 1 (only the empty walk reaches it).
    """
    z0 = edge(*z0)
    if z0 not in domain.edge_index:
        raise PathNotInDomain(f"{z0} is not an edge of the domain")
    if len(domain.edges) > max_edges:
        raise TooLarge(f"{len(domain.edges)} edges exceed the observable cap "
                       f"of {max_edges}")
    if sigma is None:
        sigma = sigma_exponent(params.n)
    bset = set(domain.boundary)
    anchors = [w for w in z0 if w in bset]
    if len(anchors) != 1:
        raise OutOfRange("the start midpoint must lie on an edge with "
                         "exactly one boundary endpoint")
    a = anchors[0]
    u0 = z0[1] if z0[0] == a else z0[0]

    log_x = math.log(params.x)
    log_full = _log_Z(_edges_of(domain), frozenset(), params, engine)
    all_edges = domain.edges
    terms: dict[HexEdge, list[tuple[float, complex]]] = {z0: [(0.0, 1.0 + 0j)]}
    on_walk = {u0}
    used = {z0}
    depth = 1  # number of interior vertices visited so far

    def rec(v: HexVertex, dir_in: int, turns: int) -> None:
        nonlocal depth
        for e in domain.vertex_edges[v]:
            if e in used:
                continue
            w = e[1] if e[0] == v else e[0]
            dir_out = direction_class(v, w)
            wound = turns + turn_sign(dir_in, dir_out)
            # end the walk at the midpoint of e
            used.add(e)
            remainder = [ed for ed in all_edges if ed not in used]
            log_rest = sum(_log_Z(c, frozenset(), params, engine)
                           for c in _edge_components(remainder))
            log_w = depth * log_x + log_rest - log_full
            phase = cmath.exp(-1j * sigma * wound * math.pi / 3.0)
            terms.setdefault(e, []).append((log_w, phase))
            # or step through to w and continue
            if w not in on_walk and len(domain.vertex_edges.get(w, ())) > 1:
                on_walk.add(w)
                depth += 1
                rec(w, dir_out, wound)
                depth -= 1
                on_walk.discard(w)
            used.discard(e)

    rec(u0, direction_class(a, u0), 0)
    return {z: WeightSum.sum_terms(ts).value
            for z, ts in sorted(terms.items())}


def parafermion(domain: Domain, z0: HexEdge, z: HexEdge, params: Params,
                sigma: float | None = None, *,
                max_edges: int = MAX_FIELD_EDGES,
                engine: str = "sweep") -> complex:
    """The observable at one midpoint; see :func:`parafermion_field`."""
    z = edge(*z)
    if z not in domain.edge_index:
        raise PathNotInDomain(f"{z} is not an edge of the domain")
    field = parafermion_field(domain, z0, params, sigma,
                              max_edges=max_edges, engine=engine)
    return field.get(z, 0j)


def vertex_relation_residual(domain: Domain, z0: HexEdge, v: HexVertex,
                             params: Params, sigma: float | None = None, *,
                             field: Mapping[HexEdge, complex] | None = None,
                             max_edges: int = MAX_FIELD_EDGES,
                             engine: str = "sweep") -> complex:
    """Residual of the three-term midpoint relation around an interior vertex.

    Returns ``sum over the three edges e at v of (mid(e) - v) F(e)``, which
    vanishes exactly at the critical edge weight.  A precomputed ``field``
    (from :func:`parafermion_field` with the same start) avoids re-running
    the walk enumeration for every vertex.
    """
    v = tuple(v)
    if v not in domain.interior:
        raise BoundaryVertex(f"{v} is not an interior vertex")
    if field is None:
        field = parafermion_field(domain, z0, params, sigma,
                                  max_edges=max_edges, engine=engine)
    pv = complex(*hex_position(v))
    res = 0j
    for e in domain.vertex_edges[v]:
        res += (_midpoint(e) - pv) * field.get(e, 0j)
    return res


# ---------------------------------------------------------------------------
# exact probabilities through the spin form
# ---------------------------------------------------------------------------

def _spin_system(region, tau) -> SpinSystem:
    if isinstance(region, SpinSystem):
        return region
    inner = getattr(region, "domain", region)
    if isinstance(inner, Domain):
        free = sorted(inner.interior_hexagons)
    else:
        free = sorted({tuple(h) for h in region})
    if isinstance(tau, Mapping):
        return SpinSystem(free, {tuple(h): s for h, s in tau.items()})
    return SpinSystem(free, int(tau), sea=int(tau))


def spin_partition(system: SpinSystem, params: Params,
                   event: Callable | None = None, *, side: str = "spins",
                   max_sites: int = MAX_SPIN_SITES) -> WeightSum:
    """Weighted sum over free-spin assignments, optionally within an event.

    With ``side="spins"`` the event predicate sees a mapping from free
    hexagon to sign; with ``side="loops"`` it sees the frozen set of domain
    wall edges of the assignment.
    """
    if side not in ("spins", "loops"):
        raise OutOfRange(f"unknown side {side!r}")
    m = len(system.free)
    if m > max_sites:
        raise TooLarge(f"{m} free hexagons exceed the enumeration cap "
                       f"of {max_sites}")
    terms = []
    for signs in product((-1, 1), repeat=m):
        if event is not None:
            if side == "spins":
                keep = event(dict(zip(system.free, signs)))
            else:
                keep = event(spins_to_loops(system, signs))
            if not keep:
                continue
        counts = spin_counts(system, signs)
        terms.append((log_spin_weight(params, counts), 1.0 + 0j))
    return WeightSum.sum_terms(terms)


def exact_event_probability(region, tau, params: Params, event: Callable, *,
                            side: str = "spins",
                            max_sites: int = MAX_SPIN_SITES) -> float:
    """Exact probability of an event under the finite-volume spin measure.

    ``region`` is a set of free hexagons, a :class:`Domain` (whose strictly
    interior hexagons become the free set, making the wall configurations
    range over exactly the cycle space of the domain), or a ready-made
    :class:`SpinSystem`.  ``tau`` gives the frozen surrounding spins: a
    single sign or a mapping.  ``event`` is a predicate as in
    :func:`spin_partition`; probabilities of wall events equal the loop
    measure's by the spin-loop correspondence.

    A named event that carries its own ``side`` and support requirements
    (see ``observables.event_from_json``) is validated against the system
    and routed to the representation it consumes.
    """
    system = _spin_system(region, tau)
    if hasattr(event, "side") and hasattr(event, "validate_support"):
        event.validate_support(system)
        side = event.side
    total = spin_partition(system, params, None, side=side,
                           max_sites=max_sites)
    wanted = spin_partition(system, params, event, side=side,
                            max_sites=max_sites)
    if wanted.is_zero:
        return 0.0
    return math.exp(wanted.log_magnitude - total.log_magnitude)
