"""Tests for the SVG renderer.

The palette fixture has loops of lengths 10, 6, and 6 so the tie between
the two hexagon loops must fall to the one with the smaller first edge.
Golden files freeze the exact bytes of one loop picture and one spin
picture with wall overlay.
"""

import pathlib
import re

from hexloop.configs import (
    SpinSystem,
    loops_from_json,
    loops_to_json,
    spins_to_loops,
)
from hexloop.lattice import hexagon_ball, hexagon_edges
from hexloop.render import render_loops, render_spins

GOLDEN = pathlib.Path(__file__).parent / "golden"


def three_loops():
    """A 10-edge loop and two 6-edge loops, pairwise disjoint."""
    two_cell = frozenset(hexagon_edges((-1, 0))) ^ frozenset(hexagon_edges((-1, 1)))
    return (two_cell
            | frozenset(hexagon_edges((1, 0)))
            | frozenset(hexagon_edges((2, -2))))


def checker_system():
    system = SpinSystem(hexagon_ball(1), -1)
    spins = {h: (1 if (h[0] + h[1]) % 2 == 0 else -1) for h in system.free}
    return system, spins


def highlight_paths(svg):
    return re.findall(r'<path d="([^"]+)" fill="none" stroke="([a-z]+)"', svg)


def plain_paths(svg):
    return re.findall(r'<path d="([^"]+)"/>', svg)


def segment_count(d):
    return d.count("L ") + d.count("Z")


class TestRenderLoops:
    def test_empty_config_is_outline_only(self):
        svg = render_loops([], 5)
        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
        assert "<path" not in svg
        assert svg.count("<polygon") == len(hexagon_ball(2))

    def test_single_hexagon_loop(self):
        svg = render_loops(hexagon_edges((0, 0)), 1)
        paths = highlight_paths(svg)
        assert len(paths) == 1
        d, color = paths[0]
        assert color == "red"
        assert d.strip().endswith("Z")
        assert segment_count(d) == 6

    def test_palette_order_and_tie_break(self):
        svg = render_loops(three_loops(), 5, hexagons=hexagon_ball(2))
        paths = highlight_paths(svg)
        assert [color for _, color in paths] == ["red", "blue", "green"]
        assert [segment_count(d) for d, _ in paths] == [10, 6, 6]
        # The tie between the two hexagon loops falls to (1, 0), whose
        # smallest vertex precedes every vertex of (2, -2); its path data
        # is the same as when that loop is rendered alone.
        alone = highlight_paths(render_loops(hexagon_edges((1, 0)), 1))
        assert paths[1][0] == alone[0][0]

    def test_highlight_cap(self):
        svg = render_loops(three_loops(), 0)
        assert not highlight_paths(svg)
        assert len(plain_paths(svg)) == 3
        svg = render_loops(three_loops(), 99)
        assert len(highlight_paths(svg)) == 3
        assert not plain_paths(svg)

    def test_serialization_round_trip_renders_identically(self):
        omega = three_loops()
        back = loops_from_json(loops_to_json(omega))
        assert render_loops(back, 5) == render_loops(omega, 5)

    def test_golden_loops(self):
        svg = render_loops(three_loops(), 5, hexagons=hexagon_ball(2))
        assert svg == (GOLDEN / "loops_sample.svg").read_text()


class TestRenderSpins:
    def test_constant_field_is_single_color(self):
        system = SpinSystem(hexagon_ball(1), +1)
        svg = render_spins(system, {h: 1 for h in system.free})
        assert svg.count('fill="#4878b0"') == len(system.context)
        assert 'fill="#f5f0e6"' not in svg

    def test_two_colors_and_frame_opacity(self):
        system, spins = checker_system()
        svg = render_spins(system, spins)
        pluses = sum(1 for h in system.context
                     if (h in spins and spins[h] == 1))
        assert svg.count('fill="#4878b0"') == pluses
        assert svg.count("fill-opacity") == len(system.fixed)

    def test_overlay_matches_loop_geometry(self):
        system, spins = checker_system()
        walls = spins_to_loops(system, spins)
        overlay = plain_paths(render_spins(system, spins, overlay=True))
        loops = plain_paths(render_loops(walls, 0))
        assert overlay
        assert overlay == loops

    def test_deterministic_bytes(self):
        system, spins = checker_system()
        first = render_spins(system, spins, overlay=True)
        second = render_spins(system, spins, overlay=True)
        assert first == second

    def test_golden_spins(self):
        system, spins = checker_system()
        svg = render_spins(system, spins, overlay=True)
        assert svg == (GOLDEN / "spins_sample.svg").read_text()
