"""Tests for the frozen fixture sets and their loaders."""

from hexloop.checks import check_domain_monotonicity, check_symmetric_domain
from hexloop.configs import Params
from hexloop.exact import x_critical
from hexloop.fixtures import (
    defect_sets,
    load_default_grid,
    load_domains,
    load_monotone_pairs,
    load_symmetric_fixtures,
    resolve_x,
)


def test_domain_corpus_size_and_budget():
    fixtures = load_domains()
    assert len(fixtures) >= 30
    names = [f.name for f in fixtures]
    assert len(set(names)) == len(names)
    edge_sets = set()
    for fixture in fixtures:
        dom = fixture.build()
        assert len(dom.edges) <= 26
        edge_sets.add(frozenset(dom.edges))
    assert len(edge_sets) == len(fixtures)


def test_defect_picks_lie_on_boundary():
    for fixture in load_domains()[:6]:
        dom = fixture.build()
        picks = defect_sets(dom)
        assert picks[0] == ((),)
        for size in (2, 4):
            for pick in picks[size]:
                assert len(pick) == size
                assert len(set(pick)) == size
                assert set(pick) <= set(dom.boundary)


def test_monotone_pairs_hold():
    pairs = load_monotone_pairs()
    assert len(pairs) >= 10
    params = Params(1.0, x_critical(1.0))
    for pair in pairs:
        inner, outer = pair.build()
        report = check_domain_monotonicity(inner, outer, pair.gamma, params)
        assert report.holds, pair.name
        assert report.details["w_inner"] > 0


def test_symmetric_fixtures_hold():
    fixtures = load_symmetric_fixtures()
    assert len(fixtures) >= 5
    for fixture in fixtures:
        for n in (1.0, 2.0):
            report = check_symmetric_domain(
                fixture.region, (fixture.arc_a, fixture.arc_b), n,
                x_critical(n))
            assert report.holds, (fixture.name, n)
            assert report.in_region


def test_grid_loads_and_x_resolves():
    grid = load_default_grid()
    assert grid["version"] == 1
    for point in grid["spin_params"]:
        x = resolve_x(point["x"], point["n"])
        Params(point["n"], x, point["h"], point["hp"])
    assert resolve_x("auto", 2.0) == x_critical(2.0)
    assert resolve_x(0.5, 1.4) == 0.5
    assert grid["triangle"]["sides"] == [2, 4]
