"""Seedable single-site Monte Carlo for the cluster representation.

A heat-bath chain over the free hexagons of a :class:`SpinSystem`, with the
cluster, wall, magnetization and triangle counts maintained incrementally.
The cluster-count delta of a single flip equals q - t, where q is the number
of connected groups the flipped site's old-sign neighbors fall into once the
site is removed, and t is the same count for its new-sign neighbors; both
are usually read off the neighbor ring directly and otherwise resolved by a
bounded breadth-first search with an exact full-recount fallback.

Randomness comes from a counter-based generator (Philox) keyed by a 64-bit
seed and a stream index, with one uniform block drawn per sweep and a fixed
scan order, so runs are reproducible bit for bit.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .configs import (
    Params,
    SpinCounts,
    SpinSystem,
    spin_counts,
    spins_to_loops,
)
from .errors import InconsistentParity, OutOfRange
from .exact import _spin_system
from .lattice import (
    ball_and_annulus,
    edge_hexagons,
    hexagon_corners,
    vertex_hexagons,
)
from .observables import EventSpec, event_from_json, loop_surrounds

# neighbor offsets in rotational order: consecutive offsets are themselves
# adjacent, so same-sign runs around a site are connected sets
_CYCLE = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class ChainState:
    """Mutable state of one chain: spins, cached counts, and the generator.

    The cached counts always equal ``spin_counts`` of the current spins;
    with ``debug=True`` that is asserted after every accepted flip.  Frame
    spins are immutable; ``init`` sets the starting free spins (a sign or a
    mapping from hexagon to sign).
    """

    def __init__(self, system: SpinSystem, params: Params, seed: int = 0,
                 stream: int = 0, debug: bool = False, init=1):
        self.system = system
        self.params = params
        self.debug = debug
        self.sweep_count = 0
        key = np.array([seed & 0xFFFFFFFFFFFFFFFF,
                        stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
        self.rng = np.random.Generator(np.random.Philox(key=key))

        ctx = system.context
        idx = {h: i for i, h in enumerate(ctx)}
        self._ctx = ctx
        self._idx = idx
        self._free_ctx = tuple(idx[h] for h in system.free)

        if isinstance(init, Mapping):
            start = {h: (1 if init[h] > 0 else -1) for h in system.free}
        else:
            start = {h: (1 if init > 0 else -1) for h in system.free}
        self._full = [0] * len(ctx)
        for i, h in enumerate(ctx):
            if h in system.free_index:
                self._full[i] = start[h]
            else:
                self._full[i] = system.fixed[h]

        # six neighbors of each free site in rotational order (all of them
        # lie in the context by construction of the system)
        nb6 = []
        for h in system.free:
            r, s = h
            nb6.append(tuple(idx[(r + dr, s + ds)] for dr, ds in _CYCLE))
        self._nb6 = tuple(nb6)

        # context sites at distance two from each free site, with a bitmask
        # of the neighbor-ring positions they touch: two same-sign arcs are
        # certainly one group when such a site of their sign touches both
        ring2 = []
        for h in system.free:
            r, s = h
            ring = {(r + dr, s + ds) for dr, ds in _CYCLE}
            touch: dict[int, int] = {}
            for pos, (dr, ds) in enumerate(_CYCLE):
                nr, ns = r + dr, s + ds
                for dr2, ds2 in _CYCLE:
                    w = (nr + dr2, ns + ds2)
                    if w == h or w in ring:
                        continue
                    j = idx.get(w)
                    if j is not None:
                        touch[j] = touch.get(j, 0) | (1 << pos)
            ring2.append(tuple(touch.items()))
        self._ring2 = tuple(ring2)

        # context adjacency and sea attachment, for connectivity searches
        adj = []
        exterior = []
        for h in ctx:
            r, s = h
            row = []
            outside = False
            for dr, ds in _CYCLE:
                j = idx.get((r + dr, s + ds))
                if j is None:
                    outside = True
                else:
                    row.append(j)
            adj.append(tuple(row))
            exterior.append(outside)
        self._adj = tuple(adj)
        self._exterior = tuple(exterior)
        self._sea = system.sea
        self._budget = 4 * len(system.free)
        self._ln_n = math.log(params.n)
        self._ln_x = math.log(params.x)

        c = spin_counts(system, self.free_signs())
        self._k, self._e, self._r, self._tw = c.k, c.e, c.r, c.twice_rp

    # -- views ----------------------------------------------------------------

    def free_signs(self) -> list[int]:
        """Current free spins, aligned with ``system.free``."""
        full = self._full
        return [full[i] for i in self._free_ctx]

    @property
    def sigma(self) -> dict:
        """Mapping from free hexagon to its current sign."""
        return dict(zip(self.system.free, self.free_signs()))

    @property
    def counts(self) -> SpinCounts:
        """Cached statistics of the current spins."""
        return SpinCounts(k=self._k, e=self._e, r=self._r, twice_rp=self._tw)

    def components(self) -> dict:
        """Cluster labels over the context, sea-linked clusters unified."""
        n = len(self._ctx)
        parent = list(range(n + 1))
        sea_node = n

        def find(a):
            root = a
            while parent[root] != root:
                root = parent[root]
            while parent[a] != root:
                parent[a], a = root, parent[a]
            return root

        full = self._full
        for i in range(n):
            for j in self._adj[i]:
                if j > i and full[i] == full[j]:
                    ra, rb = find(i), find(j)
                    if ra != rb:
                        parent[ra] = rb
            if self._exterior[i] and full[i] == self._sea:
                ra, rb = find(i), find(sea_node)
                if ra != rb:
                    parent[ra] = rb
        labels = {}
        names: dict[int, int] = {}
        for i, h in enumerate(self._ctx):
            root = find(i)
            labels[h] = names.setdefault(root, len(names))
        return labels

    # -- single-site updates ----------------------------------------------------

    def _arc_groups(self, seeds, sign: int, skip: int, budget: int):
        """Number of connected groups the seed arcs form in the sign's
        subgraph of the context, with one site removed.

        Seeds are disjoint site lists; the virtual sea links exterior
        sites of the sea's sign.  Searches breadth first from all seeds in
        rotation, so a merge is noticed where regions meet and a split as
        soon as the smallest region is exhausted: an exhausted region is
        maximal, hence final, except that a live search may still join it
        through the sea.  Returns None when the budget runs out.
        """
        a = len(seeds)
        parent = list(range(a + 1))
        sea_slot = a

        def find(i):
            root = i
            while parent[root] != root:
                root = parent[root]
            while parent[i] != root:
                parent[i], i = root, parent[i]
            return root

        owner: dict[int, int] = {}
        fronts = []
        full = self._full
        adj = self._adj
        exterior = self._exterior
        sea_linked = sign == self._sea
        for ai, seed in enumerate(seeds):
            fronts.append(deque(seed))
            for site in seed:
                owner[site] = ai
                if sea_linked and exterior[site]:
                    ra, rb = find(ai), find(sea_slot)
                    if ra != rb:
                        parent[ra] = rb
        live = list(range(a))

        def settled():
            """The final count, or None while merges are still possible."""
            roots = {find(x) for x in range(a)}
            if len(roots) == 1:
                return 1
            live_roots = {find(x) for x in live}
            if not live_roots:
                return len(roots)
            if len(live_roots) == 1:
                if not sea_linked:
                    return len(roots)
                sr = find(sea_slot)
                if sr not in roots or sr in live_roots:
                    return len(roots)
            return None

        done = settled()
        if done is not None:
            return done

        spent = 0
        p = 0
        while live:
            ai = live[p]
            front = fronts[ai]
            site = front.popleft()
            spent += 1
            if spent > budget:
                return None
            changed = False
            for w in adj[site]:
                if w == skip or full[w] != sign:
                    continue
                prev = owner.get(w)
                if prev is None:
                    owner[w] = ai
                    front.append(w)
                    if sea_linked and exterior[w]:
                        ra, rb = find(ai), find(sea_slot)
                        if ra != rb:
                            parent[ra] = rb
                            changed = True
                elif prev != ai:
                    ra, rb = find(prev), find(ai)
                    if ra != rb:
                        parent[ra] = rb
                        changed = True
            if front:
                p += 1
            else:
                live.pop(p)
                changed = True
            if p >= len(live):
                p = 0
            if changed:
                done = settled()
                if done is not None:
                    return done
        return len({find(x) for x in range(a)})

    def _site_delta(self, iu: int, budget=None):
        """Exact (dk, de, dr, dtw) for flipping the iu-th free spin."""
        if budget is None:
            budget = self._budget
        full = self._full
        cu = self._free_ctx[iu]
        s = full[cu]
        nbs = self._nb6[iu]
        sgn = [full[j] for j in nbs]

        same = 0
        for v in sgn:
            if v == s:
                same += 1
        de = 2 * same - 6
        dr = -2 * s

        dtw = 0
        for i in range(6):
            t = s + sgn[i] + sgn[i - 5]
            tp = t - 2 * s
            if tp == 3:
                dtw += 1
            elif tp == -3:
                dtw -= 1
            if t == 3:
                dtw -= 1
            elif t == -3:
                dtw += 1

        dk = self._dk(iu, cu, s, nbs, sgn, budget)
        if dk is None:
            flipped = self.free_signs()
            flipped[iu] = -s
            c = spin_counts(self.system, flipped)
            return (c.k - self._k, c.e - self._e,
                    c.r - self._r, c.twice_rp - self._tw)
        return dk, de, dr, dtw

    def _dk(self, iu: int, cu: int, s: int, nbs, sgn, budget):
        """Cluster-count change q - t, or None when the search budget ran
        out and a full recount is needed."""
        q = self._ring_components(iu, cu, s, nbs, sgn, budget)
        if q is None:
            return None
        t = self._ring_components(iu, cu, -s, nbs, sgn, budget)
        if t is None:
            return None
        return (q - 1) + (1 - t)

    def _ring_components(self, iu, cu, sign, nbs, sgn, budget):
        """Connected groups formed by the sign's arcs of the neighbor ring,
        in the sign subgraph without the center site."""
        arcs = []
        current = None
        for i in range(6):
            if sgn[i] == sign:
                if current is None:
                    current = [1 << i, [nbs[i]]]
                else:
                    current[0] |= 1 << i
                    current[1].append(nbs[i])
            else:
                if current is not None:
                    arcs.append(current)
                    current = None
        if current is not None:
            if arcs and sgn[0] == sign and sgn[5] == sign:
                arcs[0][0] |= current[0]
                arcs[0][1] = current[1] + arcs[0][1]
            else:
                arcs.append(current)
        a = len(arcs)
        if a <= 1:
            return a

        # cheap certificate before searching: arcs touched by a common
        # same-sign site at distance two, or jointly reaching the sea,
        # are surely one group
        group = list(range(a))

        def root(i):
            while group[i] != i:
                group[i] = group[group[i]]
                i = group[i]
            return i

        full = self._full
        for j, m in self._ring2[iu]:
            if full[j] != sign:
                continue
            anchor = -1
            for ai in range(a):
                if arcs[ai][0] & m:
                    if anchor < 0:
                        anchor = ai
                    else:
                        ra, rb = root(anchor), root(ai)
                        if ra != rb:
                            group[rb] = ra
        if sign == self._sea:
            exterior = self._exterior
            anchor = -1
            for ai in range(a):
                if any(exterior[site] for site in arcs[ai][1]):
                    if anchor < 0:
                        anchor = ai
                    else:
                        ra, rb = root(anchor), root(ai)
                        if ra != rb:
                            group[rb] = ra
        if len({root(ai) for ai in range(a)}) == 1:
            return 1
        return self._arc_groups([sites for _, sites in arcs], sign, cu, budget)

    def _update(self, iu: int, u01: float) -> bool:
        """One heat-bath update of the iu-th free spin; True if it flipped."""
        full = self._full
        cu = self._free_ctx[iu]
        s = full[cu]
        dk, de, dr, dtw = self._site_delta(iu)
        p = self.params
        dlog = (dk * self._ln_n + de * self._ln_x
                + p.h * dr + p.hp * dtw * 0.5)
        # dlog is log W(flipped) - log W(current); express the plus weight
        if s == 1:
            gap = dlog  # log W- minus log W+
        else:
            gap = -dlog
        if gap > 700.0:
            p_plus = 0.0
        elif gap < -700.0:
            p_plus = 1.0
        else:
            p_plus = 1.0 / (1.0 + math.exp(gap))
        new = 1 if u01 < p_plus else -1
        if new == s:
            return False
        full[cu] = new
        self._k += dk
        self._e += de
        self._r += dr
        self._tw += dtw
        if self.debug:
            fresh = spin_counts(self.system, self.free_signs())
            assert self.counts == fresh, (self.counts, fresh)
        return True

    def plus_probability(self, u) -> float:
        """The heat-bath probability of setting the spin at ``u`` to +1."""
        iu = self.system.free_index[tuple(u)]
        s = self._full[self._free_ctx[iu]]
        dk, de, dr, dtw = self._site_delta(iu)
        p = self.params
        dlog = (dk * self._ln_n + de * self._ln_x
                + p.h * dr + p.hp * dtw * 0.5)
        gap = dlog if s == 1 else -dlog
        if gap > 700.0:
            return 0.0
        if gap < -700.0:
            return 1.0
        return 1.0 / (1.0 + math.exp(gap))

    def sweep(self) -> int:
        """One pass over all free sites in fixed order; returns flip count."""
        us = self.rng.random(len(self._free_ctx))
        flips = 0
        for i in range(len(self._free_ctx)):
            if self._update(i, us[i]):
                flips += 1
        self.sweep_count += 1
        return flips


def delta_counts(state: ChainState, u, *, budget=None) -> SpinCounts:
    """Exact count changes for flipping the spin at ``u``.

    The cluster-count part searches locally with the given budget (default
    four times the number of free sites) and falls back to a full recount,
    so the result is exact either way.
    """
    iu = state.system.free_index.get(tuple(u))
    if iu is None:
        raise OutOfRange(f"{u} is not a free hexagon of this chain")
    dk, de, dr, dtw = state._site_delta(iu, budget=budget)
    return SpinCounts(k=dk, e=de, r=dr, twice_rp=dtw)


def heat_bath_step(state: ChainState, u, rng=None) -> ChainState:
    """One heat-bath update at ``u``: sets the spin to +1 with probability
    W+/(W+ + W-) of the two local weights, updating the cached counts."""
    iu = state.system.free_index.get(tuple(u))
    if iu is None:
        raise OutOfRange(f"{u} is not a free hexagon of this chain")
    gen = state.rng if rng is None else rng
    state._update(iu, float(gen.random()))
    return state


# ---------------------------------------------------------------------------
# estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Estimate:
    """A sample mean with an autocorrelation-aware error bar."""

    mean: float
    stderr: float
    n_samples: int
    tau_int: float


def integrated_autocorrelation(xs: np.ndarray) -> float:
    """Integrated autocorrelation time with a self-consistent cutoff.

    Sums the empirical autocorrelations up to the first window W with
    W >= 6*tau(W); at least 0.5 (the value for independent samples).
    """
    x = np.asarray(xs, dtype=float)
    n = len(x)
    if n < 2:
        return 0.5
    x = x - x.mean()
    var = float(np.dot(x, x)) / n
    if var <= 0.0:
        return 0.5
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, size)
    acov = np.fft.irfft(f * np.conj(f), size)[:n].real / n
    rho = acov / acov[0]
    tau = 0.5
    for w in range(1, n // 2):
        tau += float(rho[w])
        if w >= 6.0 * tau:
            break
    return max(tau, 0.5)


def estimate_from_series(xs: np.ndarray) -> Estimate:
    """Mean, autocorrelation time, and stderr of a stationary series."""
    x = np.asarray(xs, dtype=float)
    n = len(x)
    mean = float(x.mean()) if n else 0.0
    if n < 2:
        return Estimate(mean=mean, stderr=0.0, n_samples=n, tau_int=0.5)
    var = float(x.var())
    tau = integrated_autocorrelation(x)
    stderr = math.sqrt(2.0 * tau * var / n)
    return Estimate(mean=mean, stderr=stderr, n_samples=n, tau_int=tau)


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

def check_defect_free_walls(system: SpinSystem) -> None:
    """Raise unless every assignment of the system yields defect-free walls.

    Walls appear on the edges bordering free hexagons, so a corner of a
    free hexagon whose two other hexagons are frozen with opposite signs
    carries wall degree one whenever the free spin disagrees with either.
    """
    fset = set(system.free)
    fixed = system.fixed
    sea = system.sea
    seen = set()
    for h in system.free:
        for corner in hexagon_corners(h):
            if corner in seen:
                continue
            seen.add(corner)
            others = [g for g in vertex_hexagons(corner) if g not in fset]
            if len(others) == 2:
                if fixed.get(others[0], sea) != fixed.get(others[1], sea):
                    raise InconsistentParity(
                        f"frozen spins change sign at {corner}, a corner of "
                        f"the free region; walls would end there, so loop "
                        f"events are not defined for this boundary")


def annulus_signs_event(system: SpinSystem, k: int) -> Callable:
    """Evaluator of the surrounding-annulus-loop event straight from the
    free signs, touching only the annulus edges.

    Defect-free wall configurations have vertex degrees zero and two, so a
    cycle component of the walls restricted to the annulus is a full wall
    loop lying inside the annulus, and only such loops can witness the
    event.  Walls appear only on edges bordering a free hexagon, matching
    how assignments are turned into loops.
    """
    check_defect_free_walls(system)
    _, annulus = ball_and_annulus(k)
    fidx = system.free_index
    fixed = system.fixed
    sea = system.sea
    probes = []
    for e in sorted(annulus):
        g1, g2 = edge_hexagons(e)
        i1, i2 = fidx.get(g1), fidx.get(g2)
        if i1 is None and i2 is None:
            continue
        c1 = None if i1 is not None else fixed.get(g1, sea)
        c2 = None if i2 is not None else fixed.get(g2, sea)
        probes.append((e, i1, c1, i2, c2))

    def event(signs) -> bool:
        walls = []
        deg: dict = {}
        for e, i1, c1, i2, c2 in probes:
            s1 = signs[i1] if i1 is not None else c1
            s2 = signs[i2] if i2 is not None else c2
            if s1 != s2:
                walls.append(e)
                u, v = e
                deg.setdefault(u, []).append(v)
                deg.setdefault(v, []).append(u)
        seen = set()
        for start in deg:
            if start in seen or len(deg[start]) != 2:
                continue
            comp, todo, cycle = {start}, [start], True
            while todo:
                u = todo.pop()
                if len(deg[u]) != 2:
                    cycle = False
                for v in deg[u]:
                    if v not in comp:
                        comp.add(v)
                        todo.append(v)
            seen |= comp
            if cycle:
                loop = [e for e in walls if e[0] in comp]
                if loop_surrounds(loop):
                    return True
        return False

    return event


def _normalize_events(events, system: SpinSystem):
    """Named/JSON/callable events -> (name, mode, predicate) triples.

    The mode names what the predicate consumes each sweep: the spin
    mapping, the wall edges, or the raw sign sequence.
    """
    out = []
    for ev in events:
        if isinstance(ev, EventSpec):
            spec = ev
        elif isinstance(ev, Mapping):
            spec = event_from_json(ev)
        else:
            out.append((getattr(ev, "__name__", "event"), "spins", ev))
            continue
        spec.validate_support(system)
        if spec.kind == "annulus_loop":
            k = dict(spec.params)["k"]
            out.append((str(spec.to_json()), "signs",
                        annulus_signs_event(system, k)))
        else:
            out.append((str(spec.to_json()), spec.side, spec))
    return out


def run_chain(region, tau, params: Params, sweeps: int, burn_in=None,
              seed: int = 0, events: Iterable = (), *, stream: int = 0,
              debug: bool = False, init=1) -> list[Estimate]:
    """Run one chain and estimate the given events.

    ``region``/``tau`` are as in ``exact.exact_event_probability``: free
    hexagons (or a domain, or a ready system) plus the frozen surrounding
    spins.  Samples are taken once per sweep after ``burn_in`` sweeps
    (default a tenth of ``sweeps``); estimates come back in event order,
    deterministically for a fixed seed and stream.
    """
    if sweeps < 1:
        raise OutOfRange("need at least one sweep")
    system = _spin_system(region, tau)
    if burn_in is None:
        burn_in = sweeps // 10
    if not params.in_monotone_region:
        warnings.warn(
            "parameters are outside the monotone region (n >= 1 and "
            "n*x^2 <= exp(-|h'|)); the chain is still valid but nothing "
            "is known about its mixing", stacklevel=2)
    specs = _normalize_events(events, system)
    state = ChainState(system, params, seed=seed, stream=stream,
                       debug=debug, init=init)
    need_spins = any(mode == "spins" for _, mode, _ in specs)
    need_walls = any(mode == "loops" for _, mode, _ in specs)
    series = np.zeros((len(specs), sweeps), dtype=np.uint8)
    for _ in range(burn_in):
        state.sweep()
    free = system.free
    for t in range(sweeps):
        state.sweep()
        signs = state.free_signs()
        sigma = dict(zip(free, signs)) if need_spins else None
        walls = spins_to_loops(system, signs) if need_walls else None
        for j, (_, mode, fn) in enumerate(specs):
            if mode == "spins":
                val = fn(sigma)
            elif mode == "loops":
                val = fn(walls)
            else:
                val = fn(signs)
            series[j, t] = 1 if val else 0
    return [estimate_from_series(series[j]) for j in range(len(specs))]
