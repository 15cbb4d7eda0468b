"""Tests for the exact engines, walk weights, and derived observables.

Numeric oracles are hand enumerations on the one-hexagon domain (two even
subgraphs, two defect-pair walks) and closed forms on the smallest triangular
domain, whose three edges make every sum a one-liner.
"""

import cmath
import math

import pytest

from hexloop.configs import Params, SpinSystem, border_edges, loop_count
from hexloop.errors import (
    BoundaryVertex,
    NotAPath,
    OutOfRange,
    Overflow,
    PathNotInDomain,
    TooLarge,
    WidthExceeded,
)
from hexloop.exact import (
    PathSum,
    WeightSum,
    brute_force_Z,
    brute_force_table,
    catalan,
    evaluate_table,
    exact_event_probability,
    parafermion,
    parafermion_field,
    path_sum,
    relative_weight,
    sigma_exponent,
    spin_partition,
    sweep_Z,
    sweep_table,
    sweep_width,
    vertex_relation_residual,
    x_critical,
)
from hexloop.lattice import (
    domain_from_hexagons,
    hex_neighbors,
    hex_xy,
    hexagon_corners,
    hexagon_edges,
    remove_paths,
    rhombus_hexagons,
    triangle_domain,
)


def flower():
    """One-hexagon domain with its corners v[i] and outer tips w[i]."""
    dom = domain_from_hexagons([(0, 0)])
    v = list(hexagon_corners((0, 0)))
    w = [next(u for u in hex_neighbors(c) if u not in v) for c in v]
    return dom, v, w


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def test_critical_point_values():
    assert x_critical(2.0) == pytest.approx(0.7071067811865476, abs=1e-15)
    assert x_critical(1.0) == pytest.approx(0.5773502691896258, abs=1e-15)
    assert abs(x_critical(1.4) - 0.6) < 1e-3
    for bad in (0.0, -1.0, 2.0001):
        with pytest.raises(OutOfRange):
            x_critical(bad)


def test_winding_exponent_values():
    assert sigma_exponent(1.0) == pytest.approx(0.5, abs=1e-15)
    assert sigma_exponent(2.0) == pytest.approx(0.25, abs=1e-15)
    assert sigma_exponent(0.0) == pytest.approx(0.625, abs=1e-15)
    # on 1 <= n <= 2 the exponent stays in [1/4, 1/2], where cos(sigma pi)
    # is nonnegative
    for i in range(11):
        n = 1.0 + i / 10
        s = sigma_exponent(n)
        assert 0.25 - 1e-12 <= s <= 0.5 + 1e-12
        assert math.cos(s * math.pi) >= 0
    # the critical point solves 2x * (-cos((2 + sigma) pi / 3)) = 1
    for i in range(6):
        n = 1.0 + 0.2 * i
        lhs = -math.cos((2 + sigma_exponent(n)) * math.pi / 3) * 2 * x_critical(n)
        assert abs(lhs - 1.0) < 1e-12
    for bad in (-0.1, 2.1):
        with pytest.raises(OutOfRange):
            sigma_exponent(bad)


def test_catalan_numbers():
    assert [catalan(k) for k in range(7)] == [1, 1, 2, 5, 14, 42, 132]
    assert catalan(30) == math.comb(60, 30) // 31
    with pytest.raises(OutOfRange):
        catalan(-1)
    with pytest.raises(Overflow):
        catalan(600)


# ---------------------------------------------------------------------------
# log-magnitude arithmetic
# ---------------------------------------------------------------------------

def test_weight_sum_arithmetic():
    a = WeightSum.from_value(-3.0)
    assert a.value == pytest.approx(-3.0)
    assert a.phase == -1.0
    b = WeightSum.from_value(2j)
    assert (a * b).value == pytest.approx(-6j)
    assert (a / b).value == pytest.approx(1.5j)
    z = WeightSum.zero()
    assert z.is_zero and z.value == 0j
    assert (a * z).is_zero
    with pytest.raises(ZeroDivisionError):
        a / z
    # exact cancellation collapses to zero
    s = WeightSum.sum_terms([(0.0, 1.0 + 0j), (0.0, -1.0 + 0j)])
    assert s.is_zero
    assert WeightSum.sum_terms([]).is_zero
    big = WeightSum(1e6, 1.0 + 0j)
    with pytest.raises(Overflow):
        big.value


def test_evaluate_table_is_a_polynomial():
    table = {(0, 0): 1, (6, 1): 1}
    for n, x in ((1.4, 0.6), (2.0, 0.25)):
        got = evaluate_table(table, Params(n=n, x=x)).real
        assert got == pytest.approx(1 + n * x**6, rel=1e-15)
    # counts may exceed double range, the log does not
    huge = evaluate_table({(1, 0): 10**400}, Params(n=1.0, x=1.0))
    assert huge.log_magnitude == pytest.approx(400 * math.log(10), rel=1e-12)


# ---------------------------------------------------------------------------
# the two engines
# ---------------------------------------------------------------------------

def test_brute_force_flower_oracles():
    dom, v, w = flower()
    for n, x in ((1.4, 0.6), (2.0, 2**-0.5)):
        p = Params(n=n, x=x)
        assert brute_force_Z(dom, (), p).real == pytest.approx(
            1 + n * x**6, rel=1e-12)
        assert brute_force_Z(dom, (w[0], w[3]), p).real == pytest.approx(
            2 * x**5, rel=1e-12)
    p = Params(n=1.4, x=0.6)
    assert brute_force_Z(dom, (w[0],), p).is_zero
    assert brute_force_Z(dom, (w[0], w[1], w[2]), p).is_zero
    # a defect off the domain kills every configuration
    assert brute_force_Z(dom, ((5, 5, 0), (5, 5, 1)), p).is_zero


def test_sweep_matches_brute_tables():
    doms = [domain_from_hexagons([(0, 0)]),
            domain_from_hexagons([(0, 0), (1, 0)]),
            domain_from_hexagons([(0, 0), (0, 1)]),
            domain_from_hexagons([(0, 0), (1, 0), (2, 0)]),
            domain_from_hexagons([(0, 0), (1, 0), (0, 1)]),
            triangle_domain(4).domain]
    p1 = Params(n=1.4, x=x_critical(1.4))
    p2 = Params(n=1.0, x=0.9)
    for dom in doms:
        bnd = list(dom.boundary)
        for A in ((), (bnd[0], bnd[1]), (bnd[0], bnd[len(bnd) // 2]),
                  tuple(bnd[:4]), (bnd[0], bnd[1], bnd[2])):
            tb = brute_force_table(dom.edges, A)
            ts = sweep_table(dom.edges, A)
            assert tb == ts
            for p in (p1, p2):
                zb = brute_force_Z(dom, A, p)
                zs = sweep_Z(dom, A, p)
                if zb.is_zero:
                    assert zs.is_zero
                else:
                    assert abs(zs.value - zb.value) <= 1e-10 * abs(zb.value)


def test_empty_edge_set():
    p = Params(n=1.4, x=0.6)
    assert sweep_table(()) == {(0, 0): 1}
    assert brute_force_table(()) == {(0, 0): 1}
    assert sweep_Z((), (), p).real == 1.0
    assert sweep_table((), defects=((0, 0, 0),)) == {}


def test_engine_caps():
    chain = domain_from_hexagons([(0, 0), (1, 0), (2, 0)])
    assert len(chain.edges) == 26
    with pytest.raises(TooLarge):
        brute_force_table(chain.edges, max_edges=10)
    dom, _, _ = flower()
    w = sweep_width(dom.edges)
    assert 2 <= w <= 6
    with pytest.raises(WidthExceeded):
        sweep_table(dom.edges, max_width=w - 1)


def test_sweep_reaches_beyond_the_brute_cap():
    big = triangle_domain(6).domain
    assert len(big.edges) == 45
    p = Params(n=1.5, x=x_critical(1.5))
    with pytest.raises(TooLarge):
        brute_force_Z(big, (), p)
    z = sweep_Z(big, (), p)
    assert z.real >= 1.0  # the empty configuration alone contributes 1


# ---------------------------------------------------------------------------
# relative weights
# ---------------------------------------------------------------------------

def test_relative_weight_flower():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    got = relative_weight(dom, [w[0], v[0], v[1], w[1]], p)
    assert got == pytest.approx(0.6**3 / (1 + 1.4 * 0.6**6), rel=1e-12)
    assert relative_weight(dom, [], p) == 1.0
    assert relative_weight(dom, [w[0]], p) == pytest.approx(1.0, rel=1e-15)


def test_relative_weight_errors():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    with pytest.raises(PathNotInDomain):
        relative_weight(dom, [(5, 5, 0), (5, 5, 1)], p)
    with pytest.raises(NotAPath):
        relative_weight(dom, [w[0], v[0], w[0]], p)
    with pytest.raises(NotAPath):
        relative_weight(dom, [[w[0], v[0]], [v[0], v[1]]], p)
    with pytest.raises(NotAPath):
        relative_weight(list(dom.edges), [[w[0], v[0]], [v[0], v[1]]], p)


def test_chain_rule_exact_on_flower():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    gamma = [w[0], v[0], v[1]]
    eta = [v[1], v[2], v[3], w[3]]
    whole = relative_weight(dom, gamma + eta[1:], p)
    assert whole == pytest.approx(0.6**5 / (1 + 1.4 * 0.6**6), rel=1e-12)
    # cutting out gamma first: eta then overhangs the removed junction edge
    after_gamma = [e for comp in remove_paths(dom, [gamma]) for e in comp]
    left = relative_weight(dom, gamma, p) * relative_weight(after_gamma, eta, p)
    assert abs(whole - left) <= 1e-15
    after_eta = [e for comp in remove_paths(dom, [eta]) for e in comp]
    right = relative_weight(after_eta, gamma, p) * relative_weight(dom, eta, p)
    assert abs(whole - right) <= 1e-15


def test_chain_rule_on_triangle_walks():
    tri = triangle_domain(4)
    dom = tri.domain
    p = Params(n=1.7, x=x_critical(1.7))
    a = tri.start_vertex
    # one walk from the bottom tip to the left side, split at every junction
    walks = [wk for wk in _all_walks(dom, a) if len(wk) >= 4]
    assert walks
    for wk in walks[:8]:
        for cut in range(1, len(wk) - 1):
            gamma, eta = list(wk[:cut + 1]), list(wk[cut:])
            whole = relative_weight(dom, wk, p)
            rest = [e for comp in remove_paths(dom, [gamma]) for e in comp]
            split = relative_weight(dom, gamma, p) * relative_weight(rest, eta, p)
            assert abs(whole - split) <= 1e-12 * whole


def _all_walks(dom, a):
    """All self-avoiding walks from a to any other boundary vertex."""
    targets = frozenset(b for b in dom.boundary if b != a)
    out = []
    walk = [a]

    def rec(u):
        for e in dom.vertex_edges[u]:
            nxt = e[1] if e[0] == u else e[0]
            if nxt in walk:
                continue
            walk.append(nxt)
            if nxt in targets:
                out.append(tuple(walk))
            rec(nxt)
            walk.pop()

    rec(a)
    return out


def test_disjoint_union_weight():
    chain = domain_from_hexagons([(0, 0), (1, 0), (2, 0)])
    p = Params(n=1.4, x=0.6)
    bnd = sorted(chain.boundary)
    spoke0 = chain.spokes[bnd[0]]
    spoke1 = chain.spokes[bnd[-1]]
    g1 = [bnd[0], spoke0[0] if spoke0[1] == bnd[0] else spoke0[1]]
    g2 = [bnd[-1], spoke1[0] if spoke1[1] == bnd[-1] else spoke1[1]]
    union = relative_weight(chain, [g1, g2], p)
    rest = [e for comp in remove_paths(chain, [g1]) for e in comp]
    stepwise = relative_weight(chain, g1, p) * relative_weight(rest, g2, p)
    assert union == pytest.approx(stepwise, rel=1e-12)


def test_union_removal_with_touching_endpoint_stars():
    # two one-edge walks whose endpoints are adjacent: the shared incident
    # edge is removed once, not twice
    dom, v, w = flower()
    comps = remove_paths(dom, [[w[0], v[0]], [w[1], v[1]]])
    assert sum(len(c) for c in comps) == 7


# ---------------------------------------------------------------------------
# defect-pair sums
# ---------------------------------------------------------------------------

def test_path_sum_flower():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    ps = path_sum(dom, w[0], w[3], p)
    want = 2 * 0.6**5 / (1 + 1.4 * 0.6**6)
    assert ps.value == pytest.approx(want, rel=1e-12)
    assert ps.n_walks == 2
    assert abs(ps.from_defects - ps.from_walks) <= 1e-10 * ps.from_defects


def test_path_sum_triangle_sides():
    for side in (2, 4):
        tri = triangle_domain(side)
        for n in (1.0, 1.5, 2.0):
            xc = x_critical(n)
            p = Params(n=n, x=xc)
            ps = path_sum(tri.domain, tri.start_vertex, tri.left_boundary, p)
            assert abs(ps.from_defects - ps.from_walks) <= \
                1e-10 * ps.from_defects
            assert ps.from_defects >= xc * xc * (1 - 1e-9)
            if side == 2:
                # the smallest triangle attains the bound exactly
                assert ps.from_defects == pytest.approx(xc * xc, rel=1e-12)


def test_path_sum_respects_defect_pair_bound():
    # Z^{a,b}/Z is at most 1/sqrt(n) whenever x <= 1/sqrt(n)
    fixtures = [flower()[0],
                domain_from_hexagons([(0, 0), (1, 0)]),
                triangle_domain(4).domain]
    for dom in fixtures:
        bnd = sorted(dom.boundary)
        pairs = [(bnd[0], bnd[-1]), (bnd[0], bnd[len(bnd) // 2])]
        for n in (1.0, 1.4, 2.0):
            for x in (x_critical(n), n**-0.5):
                p = Params(n=n, x=x)
                for a, b in pairs:
                    ps = path_sum(dom, a, b, p)
                    assert ps.value <= n**-0.5 + 1e-12


def test_path_sum_arguments():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    with pytest.raises(OutOfRange):
        path_sum(dom, (9, 9, 0), w[3], p)
    with pytest.raises(OutOfRange):
        path_sum(dom, w[0], (), p)
    # a target collection containing the source just drops it
    every = path_sum(dom, w[0], w, p)
    others = sum(path_sum(dom, w[0], b, p).value for b in w[1:])
    assert every.value == pytest.approx(others, rel=1e-12)


# ---------------------------------------------------------------------------
# the edge-midpoint observable
# ---------------------------------------------------------------------------

def test_observable_is_one_at_the_start():
    cases = [(triangle_domain(2).domain, triangle_domain(2).start_edge),
             (triangle_domain(4).domain, triangle_domain(4).start_edge)]
    dom, v, w = flower()
    cases.append((dom, dom.spokes[sorted(dom.boundary)[0]]))
    for d, z0 in cases:
        for n, x in ((1.0, 0.5), (1.6, x_critical(1.6))):
            field = parafermion_field(d, z0, Params(n=n, x=x))
            assert field[z0] == 1.0 + 0j
            assert set(field) == set(d.edges)


def test_smallest_triangle_observable_closed_forms():
    tri = triangle_domain(2)
    d = tri.domain
    n = 1.5
    xc = x_critical(n)
    sig = sigma_exponent(n)
    p = Params(n=n, x=xc)
    field = parafermion_field(d, tri.start_edge, p)
    z_left = d.spokes[tri.left_boundary[0]]
    z_right = d.spokes[tri.right_boundary[0]]
    assert field[z_left] == pytest.approx(
        xc * cmath.exp(-1j * sig * math.pi / 3), abs=1e-14)
    assert field[z_right] == pytest.approx(
        xc * cmath.exp(1j * sig * math.pi / 3), abs=1e-14)
    v0 = next(iter(d.interior))
    res = vertex_relation_residual(d, tri.start_edge, v0, p, field=field)
    assert abs(res) <= 1e-12
    lhs = (cmath.exp(-2j * math.pi / 3) * field[z_left]
           + cmath.exp(2j * math.pi / 3) * field[z_right]
           + field[tri.start_edge])
    assert abs(lhs) <= 1e-12
    # off criticality the local relation visibly fails
    p_off = Params(n=n, x=xc + 0.05)
    res_off = vertex_relation_residual(d, tri.start_edge, v0, p_off)
    assert abs(res_off) > 1e-3


def test_triangle_vertex_relation_across_weights():
    tri = triangle_domain(4)
    d = tri.domain
    for n in (1.0, 1.4, 2.0):
        p = Params(n=n, x=x_critical(n))
        field = parafermion_field(d, tri.start_edge, p)
        fmax = max(abs(z) for z in field.values())
        for v in d.interior:
            res = vertex_relation_residual(d, tri.start_edge, v, p,
                                           field=field)
            assert abs(res) <= 1e-9 * fmax
    p_off = Params(n=1.4, x=x_critical(1.4) + 0.05)
    field = parafermion_field(d, tri.start_edge, p_off)
    fmax = max(abs(z) for z in field.values())
    worst = max(abs(vertex_relation_residual(d, tri.start_edge, v, p_off,
                                             field=field))
                for v in d.interior)
    assert worst > 1e-3 * fmax


def test_triangle_contour_identity():
    tri = triangle_domain(4)
    d = tri.domain
    for n in (1.0, 1.5, 2.0):
        p = Params(n=n, x=x_critical(n))
        field = parafermion_field(d, tri.start_edge, p)
        left = sum(field[d.spokes[b]] for b in tri.left_boundary)
        right = sum(field[d.spokes[b]] for b in tri.right_boundary)
        bottom = sum(field[d.spokes[b]] for b in tri.bottom_boundary)
        lhs = (cmath.exp(-2j * math.pi / 3) * left
               + cmath.exp(2j * math.pi / 3) * right + bottom)
        assert abs(lhs) <= 1e-12


def test_boundary_midpoint_windings():
    # every walk from the start to a fixed boundary vertex shares one
    # winding: pi/3 to the left side, -pi/3 to the right side, and +-pi on
    # the bottom according to the side of the start edge
    tri = triangle_domain(4)
    d = tri.domain
    n = 1.7
    sig = sigma_exponent(n)
    p = Params(n=n, x=x_critical(n))
    field = parafermion_field(d, tri.start_edge, p)
    a = tri.start_vertex
    ax = hex_xy(a)[0]

    def expected_winding(side, b):
        if side == "left":
            return math.pi / 3
        if side == "right":
            return -math.pi / 3
        return math.pi if hex_xy(b)[0] < ax else -math.pi

    for side, verts in (("left", tri.left_boundary),
                        ("right", tri.right_boundary),
                        ("bottom", tri.bottom_boundary)):
        for b in verts:
            if b == a:
                continue
            total = path_sum(d, a, b, p).from_defects
            want = total / p.x * cmath.exp(-1j * sig * expected_winding(side, b))
            assert field[d.spokes[b]] == pytest.approx(want, abs=1e-12)


def test_observable_arguments():
    tri = triangle_domain(4)
    d = tri.domain
    p = Params(n=1.5, x=0.5)
    with pytest.raises(PathNotInDomain):
        parafermion_field(d, ((9, 9, 0), (9, 9, 1)), p)
    inner = hexagon_edges((1, 1))[0]  # both endpoints interior
    with pytest.raises(OutOfRange):
        parafermion_field(d, inner, p)
    with pytest.raises(TooLarge):
        parafermion_field(d, tri.start_edge, p, max_edges=5)
    with pytest.raises(PathNotInDomain):
        parafermion(d, tri.start_edge, ((9, 9, 0), (9, 9, 1)), p)
    z = d.spokes[tri.left_boundary[0]]
    field = parafermion_field(d, tri.start_edge, p)
    assert parafermion(d, tri.start_edge, z, p) == field[z]


def test_vertex_relation_rejects_boundary_vertices():
    tri = triangle_domain(4)
    p = Params(n=1.5, x=0.5)
    with pytest.raises(BoundaryVertex):
        vertex_relation_residual(tri.domain, tri.start_edge,
                                 tri.domain.boundary[0], p)


def test_observable_is_deterministic():
    tri = triangle_domain(4)
    p = Params(n=1.3, x=x_critical(1.3))
    f1 = parafermion_field(tri.domain, tri.start_edge, p)
    f2 = parafermion_field(tri.domain, tri.start_edge, p)
    assert f1 == f2


# ---------------------------------------------------------------------------
# exact probabilities through spins
# ---------------------------------------------------------------------------

def test_event_probability_normalization():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6, h=0.1, hp=-0.2)
    assert exact_event_probability(dom, -1, p, lambda s: True) == 1.0
    assert exact_event_probability([(0, 0)], 1, p, lambda s: True) == 1.0
    assert exact_event_probability(dom, -1, p, lambda walls: True,
                                   side="loops") == 1.0
    assert exact_event_probability(dom, -1, p, lambda s: False) == 0.0


def test_flower_spin_probabilities():
    dom, v, w = flower()
    n, x = 1.4, 0.6
    p = Params(n=n, x=x)
    plus = exact_event_probability(dom, -1, p, lambda s: s[(0, 0)] == 1)
    assert plus == pytest.approx(n * x**6 / (1 + n * x**6), rel=1e-12)
    walls = exact_event_probability(dom, -1, p, lambda ws: len(ws) == 6,
                                    side="loops")
    assert walls == pytest.approx(plus, rel=1e-15)
    # with fields, by direct hand enumeration of the two assignments
    p2 = Params(n=1.4, x=0.6, h=0.3, hp=0.2)
    num = 1.4 * 0.6**6 * math.exp(0.3)
    den = num + math.exp(-0.3 - 3 * 0.2)
    plus2 = exact_event_probability(dom, -1, p2, lambda s: s[(0, 0)] == 1)
    assert plus2 == pytest.approx(num / den, rel=1e-12)


def test_wall_distribution_matches_loop_weights():
    # the law of the wall configuration is the loop measure on the edges
    # bordering the free hexagons
    for hexes, tau in (([(0, 0)], -1), ([(0, 0)], 1),
                       ([(0, 0), (1, 0)], -1), ([(0, 0), (1, 0), (0, 1)], 1)):
        dom = domain_from_hexagons(hexes)
        p = Params(n=1.4, x=x_critical(1.4))
        edges = border_edges(dom.interior_hexagons)
        table = sweep_table(edges)
        z = evaluate_table(table, p).real
        # enumerate the even subgraphs via the spin side and check each
        seen = {}

        def record(walls, seen=seen):
            seen[frozenset(walls)] = seen.get(frozenset(walls), 0) + 1
            return False

        exact_event_probability(dom, tau, p, record, side="loops")
        assert sum(seen.values()) == 2 ** len(dom.interior_hexagons)
        for walls, mult in seen.items():
            assert mult == 1  # the spin-wall correspondence is one to one
            got = exact_event_probability(
                dom, tau, p, lambda ws, W=walls: ws == W, side="loops")
            want = p.x ** len(walls) * p.n ** loop_count(walls) / z
            assert got == pytest.approx(want, rel=1e-12)


def test_spin_partition_inputs():
    dom, v, w = flower()
    p = Params(n=1.4, x=0.6)
    sys = SpinSystem([(0, 0)], -1, sea=-1)
    direct = spin_partition(sys, p)
    assert direct.real == pytest.approx(1 + 1.4 * 0.6**6, rel=1e-12)
    via_region = exact_event_probability(sys, -1, p, lambda s: True)
    assert via_region == 1.0
    ring = {h: -1 for h in sorted(SpinSystem([(0, 0)], -1).fixed)}
    by_mapping = exact_event_probability([(0, 0)], ring, p,
                                         lambda s: s[(0, 0)] == 1)
    assert by_mapping == pytest.approx(1.4 * 0.6**6 / (1 + 1.4 * 0.6**6),
                                       rel=1e-12)
    with pytest.raises(TooLarge):
        spin_partition(SpinSystem(sorted(rhombus_hexagons(5)), -1), p,
                       max_sites=8)
    with pytest.raises(OutOfRange):
        spin_partition(sys, p, side="edges")
