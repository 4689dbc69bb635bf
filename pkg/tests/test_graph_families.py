import json
from unittest import TestCase

import ddt

from twistable import graph_families
from twistable.atlas import get_surface, slope_weights
from twistable.classes.graph import Ball, GraphSpec, TightGeodesic
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.exceptions import ConfigurationError, Disconnected
from twistable.surface_core import cut_along, generate_pool, intersection_number, spanned_subsurface


@ddt.ddt
class GraphSpecTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S0,4")

    @ddt.data(
        ("sep", "sep", None, 1),
        ("curve_graph", "curve_graph", None, 1),
        ("pants", "pants", None, 2),
        ("k_of(pants)", "k_of", "pants", 2),
        ("k_of: sep", "k_of", "sep", 2),
    )
    @ddt.unpack
    def test_parse(self, text, family, base, bound):
        spec = GraphSpec.parse(text, self.surface)

        self.assertEqual(spec.family, family)
        self.assertEqual(spec.base, base)
        self.assertEqual(spec.bound, bound)

    def test_family_id(self):
        self.assertEqual(GraphSpec.parse("k_of(nonsep)", self.surface).family_id, "k_of(nonsep)")
        self.assertEqual(GraphSpec.parse("k_of(nonsep)", self.surface).witness_family, "nonsep")

    def test_arc_companion(self):
        spec = GraphSpec.parse("arc_companion(2,1)", self.surface)

        self.assertEqual(spec.delta, frozenset({"1", "2"}))
        self.assertEqual(spec.family_id, "arc_companion(1,2)")
        self.assertEqual(spec.bound, 4)

    def test_arc_companion_default_delta(self):
        self.assertEqual(GraphSpec.parse("arc_companion", self.surface).delta, frozenset({"0"}))
        self.assertEqual(GraphSpec.parse("arc_companion", self.surface, ("3",)).delta, frozenset({"3"}))

    @ddt.data("wiggly", "k_of(wiggly)", "arc_companion(9)")
    def test_unknown(self, text):
        with self.assertRaises(ConfigurationError):
            GraphSpec.parse(text, self.surface)


@ddt.ddt
class OnceHoledTorusTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S1,1")
        self.whole = Subsurface.whole(self.surface)

        self.a = self.slope(0, 1)
        self.b = self.slope(1, 0)
        self.c = self.slope(1, 1)
        self.d = self.slope(2, 1)
        self.pool = CurvePool(self.surface, [self.d, self.c, self.b, self.a], {"size_cap": 4})

    def slope(self, p, q) -> NormalMulticurve:
        return NormalMulticurve(self.surface, slope_weights(self.surface, p, q))

    def spec(self, text) -> GraphSpec:
        return GraphSpec.parse(text, self.surface)

    @ddt.data(
        ("curve_graph", True),
        ("nonsep", True),
        ("sep", False),
        ("pants", True),
        ("k_of(curve_graph)", True),
    )
    @ddt.unpack
    def test_is_vertex(self, family, expected):
        self.assertEqual(graph_families.is_vertex(self.spec(family), self.a), expected)

    def test_empty_is_never_a_vertex(self):
        empty = NormalMulticurve(self.surface, [0, 0, 0])

        self.assertFalse(graph_families.is_vertex(self.spec("curve_graph"), empty))
        self.assertFalse(graph_families.is_separating(self.a))

    def test_minimal_intersection(self):
        self.assertEqual(graph_families.minimal_intersection(self.whole), 1)

    def test_adjacent(self):
        spec = self.spec("curve_graph")

        self.assertTrue(graph_families.adjacent(spec, self.a, self.b))
        self.assertTrue(graph_families.adjacent(spec, self.c, self.d))
        self.assertFalse(graph_families.adjacent(spec, self.a, self.d))
        self.assertFalse(graph_families.adjacent(spec, self.a, self.a))

    def test_adjacent_in_kg(self):
        spec = self.spec("k_of(curve_graph)")

        self.assertTrue(graph_families.adjacent(spec, self.a, self.c))
        self.assertFalse(graph_families.adjacent(spec, self.a, self.d))

    @ddt.data(
        ((0, 1), (1, 0), 1),
        ((0, 1), (2, 1), 2),
        ((0, 1), (5, 2), 3),
    )
    @ddt.unpack
    def test_curve_distance(self, first, second, expected):
        d = graph_families.curve_distance(self.slope(*first), self.slope(*second), self.whole)

        self.assertEqual(d.value, expected)
        self.assertTrue(d.exact)
        self.assertEqual(d.criterion, "farey")

    def test_distance(self):
        d = graph_families.distance(self.spec("curve_graph"), self.a, self.d, self.pool)

        self.assertEqual(d.to_dict()["upper_bound"], 2)
        self.assertEqual(d.to_dict()["lower_bound"], 2)
        self.assertEqual(graph_families.distance(self.spec("curve_graph"), self.a, self.a, self.pool).value, 0)

    def test_ball(self):
        spec = self.spec("curve_graph")

        one = graph_families.ball(spec, self.a, 1, self.pool)
        self.assertEqual(one.distances, {self.a: 0, self.b: 1, self.c: 1})
        self.assertNotIn(self.d, one)

        two = graph_families.ball(spec, self.a, 2, self.pool)
        self.assertEqual(len(two), 4)
        self.assertEqual(two.distances[self.d], 2)
        self.assertEqual(two.to_dict()["vertices"][0]["weights"], list(self.a.weights))

    def test_ball_completeness(self):
        spec = self.spec("curve_graph")

        one = graph_families.ball(spec, self.a, 1, self.pool)
        self.assertEqual(one.complete, {self.a: True, self.b: False, self.c: False})

        two = graph_families.ball(spec, self.a, 2, self.pool)
        self.assertTrue(two.complete[self.b])
        self.assertFalse(two.complete[self.d])
        self.assertIsNone(two.pool["neighbour_cap"])

    def test_ball_neighbour_cap(self):
        capped = graph_families.ball(self.spec("curve_graph"), self.a, 1, self.pool, cap=1)

        self.assertFalse(capped.complete[self.a])
        self.assertEqual(len(capped), 2)
        self.assertEqual(capped.pool["neighbour_cap"], 1)

    def test_ball_in_a_truncated_pool(self):
        pool = CurvePool(self.surface, self.pool.curves, {"size_cap": 4}, complete=False)
        one = graph_families.ball(self.spec("curve_graph"), self.a, 1, pool)

        self.assertFalse(one.complete[self.a])
        self.assertFalse(one.pool["complete"])

    def test_ball_from_dict(self):
        spec = self.spec("curve_graph")
        two = graph_families.ball(spec, self.a, 2, self.pool, cap=2)

        again = Ball.from_dict(spec, json.loads(json.dumps(two.to_dict())))

        self.assertEqual(again.center, self.a)
        self.assertEqual(again.distances, two.distances)
        self.assertEqual(again.complete, two.complete)
        self.assertEqual(again.to_dict(), two.to_dict())

    def test_neighbors(self):
        found = graph_families.neighbors(self.spec("curve_graph"), self.b, self.pool)

        self.assertEqual(found, sorted([self.a, self.c, self.d]))

    def test_seed_vertices(self):
        vertices = graph_families.seed_vertices(self.spec("curve_graph"), self.pool, 2)

        self.assertEqual(vertices, [self.a, self.b])

    def test_tighten_short_path(self):
        geodesic = graph_families.tighten([self.a], self.whole)

        self.assertIsInstance(geodesic, TightGeodesic)
        self.assertEqual(len(geodesic), 0)
        self.assertEqual(geodesic.start, self.a)

    def test_tighten_needs_disjoint_terms(self):
        with self.assertRaises(AssertionError):
            graph_families.tighten([self.a, self.b], self.whole)


@ddt.ddt
class FiveHoledSphereTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S0,5")
        self.whole = Subsurface.whole(self.surface)
        self.pool = generate_pool(self.surface.generators, 1, 6, 40)

        curves = list(self.pool)
        self.a, self.b = next(
            (c, d) for i, c in enumerate(curves) for d in curves[i + 1 :] if intersection_number(c, d) == 2
        )

    def spec(self, text) -> GraphSpec:
        return GraphSpec.parse(text, self.surface)

    def test_pants_completion(self):
        for c in self.surface.generators:
            vertex = graph_families.pants_completion(c, self.pool)

            self.assertEqual(len(vertex), 2)
            self.assertIn(c, vertex.components)
            self.assertTrue(all(x.is_pants for x in cut_along(vertex)))
            self.assertTrue(graph_families.is_vertex(self.spec("pants"), vertex))

    @ddt.data("k_of(pants)", "k_of(curve_graph)")
    def test_flip_neighbors(self, family):
        spec = self.spec(family)
        start = graph_families.pants_completion(self.a, self.pool)

        found = graph_families.flip_neighbors(spec, start, self.pool)

        self.assertTrue(found)
        for v in found:
            self.assertTrue(graph_families.is_vertex(spec, v))
            self.assertTrue(graph_families.adjacent(spec, start, v))

    def test_tighten_keeps_the_span_boundary(self):
        middle = spanned_subsurface([self.a, self.b])

        geodesic = graph_families.tighten([self.a, middle, self.b], self.whole)

        self.assertEqual(geodesic.terms, (self.a, middle, self.b))
        self.assertEqual(len(geodesic), 2)

    def test_curve_distance_through_the_span(self):
        d = graph_families.curve_distance(self.a, self.b, self.whole)

        self.assertEqual((d.upper, d.lower), (2, 2))
        self.assertEqual(len(d.path), 3)

    def test_distance_in_a_disconnected_pool(self):
        spec = self.spec("curve_graph")
        pool = CurvePool(self.surface, [self.a, self.b], {"size_cap": 2})

        d = graph_families.distance(spec, self.a, self.b, pool)

        self.assertIsNone(d.upper)
        self.assertEqual(d.lower, 2)
        self.assertFalse(d.exact)
        self.assertEqual(d.path, ())
        self.assertIsNone(d.to_dict()["upper_bound"])

        with self.assertRaises(Disconnected):
            graph_families.distance(spec, self.a, self.b, pool, strict=True)

    def test_distance_through_the_pool(self):
        spec = self.spec("curve_graph")
        middle = spanned_subsurface([self.a, self.b])
        pool = CurvePool(self.surface, [self.a, self.b, middle], {"size_cap": 3})

        d = graph_families.distance(spec, self.a, self.b, pool)

        self.assertTrue(d.exact)
        self.assertEqual(d.value, 2)
        self.assertEqual(d.path, (self.a, middle, self.b))

    def test_graph_vertices_of_pants(self):
        vertices = graph_families.graph_vertices(self.spec("pants"), self.pool, 10)

        self.assertGreater(len(vertices), 1)
        self.assertLessEqual(len(vertices), 10)
        for v in vertices:
            self.assertTrue(graph_families.is_vertex(self.spec("pants"), v))
