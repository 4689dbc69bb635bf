from unittest import TestCase

import ddt

from twistable import ladders
from twistable.atlas import get_surface, slope_weights
from twistable.classes.annulus import Annulus, AnnulusSystem, Brick, KComplexity, Smallness
from twistable.classes.graph import GraphSpec, TightGeodesic
from twistable.classes.multicurve import NormalMulticurve, Subsurface
from twistable.graph_families import is_vertex
from twistable.exceptions import EndpointMismatch, NotMaximalComplexity, OracleFailure, Type2PlacementViolation
from twistable.surface_core import cut_along, generate_pool, intersection_number, spanned_subsurface


@ddt.ddt
class RecursionBoundsTest(TestCase):
    def test_two_levels(self):
        self.assertEqual(ladders.recursion_bounds(5, 2, 1), {2: (24, 1), 1: (10584, 49)})

    @ddt.data((1, 1, 4), (3, 2, 8), (0, 5, 2))
    @ddt.unpack
    def test_one_level(self, K, M, expected):
        self.assertEqual(ladders.recursion_bounds(K, 1, M), {1: (expected, 1)})

    def test_monotone(self):
        table = ladders.recursion_bounds(2, 3, 1)

        self.assertEqual(sorted(table), [1, 2, 3])
        self.assertLess(table[3][0], table[2][0])
        self.assertLess(table[2][0], table[1][0])


@ddt.ddt
class KComplexityTest(TestCase):
    @ddt.data(
        ((1, 0), (0, 5)),
        ((0, 2), (0, 1)),
        ((2, 0, 0), (1, 9, 9)),
    )
    @ddt.unpack
    def test_order(self, larger, smaller):
        self.assertGreater(KComplexity(larger), KComplexity(smaller))

    def test_zero(self):
        self.assertTrue(KComplexity((0, 0)).is_zero)
        self.assertFalse(KComplexity((0, 1)).is_zero)


class LadderTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S1,1")
        self.kspec = GraphSpec("k_of", self.surface, base="curve_graph")
        self.whole = Subsurface.whole(self.surface)

        self.a = self.slope(0, 1)
        self.b = self.slope(1, 0)
        self.c = self.slope(1, 1)
        self.d = self.slope(2, 1)
        self.empty = NormalMulticurve(self.surface, [0, 0, 0])

    def slope(self, p, q) -> NormalMulticurve:
        return NormalMulticurve(self.surface, slope_weights(self.surface, p, q))

    def via(self, middle):
        def oracle(minus, plus, y):
            return TightGeodesic(y, (minus, middle, plus))

        return oracle

    def test_initial_system(self):
        w = ladders.initial_system(self.a, self.b)

        self.assertEqual(w.events, (0, 1, 2, 3))
        self.assertEqual(w.annuli, (Annulus(self.a, 0, 1), Annulus(self.b, 2, 3)))
        self.assertEqual(w.gap_count, 3)
        self.assertEqual(w.next_event, 4)
        self.assertTrue(w.is_generic)

        self.assertEqual(w.cross_section(0), self.a)
        self.assertEqual(w.cross_section(1), self.empty)
        self.assertEqual(w.cross_section(2), self.b)
        self.assertEqual(w.curves, sorted([self.a, self.b]))

    def test_bricks(self):
        w = ladders.initial_system(self.a, self.b)
        found = ladders.bricks(w, self.kspec)

        self.assertEqual(len(found), 3)
        self.assertEqual([b.gaps for b in found], [1, 1, 1])

        first, middle, last = found
        self.assertEqual(first.smallness, Smallness.TYPE1)
        self.assertEqual(last.smallness, Smallness.TYPE1)

        self.assertEqual(middle.base, self.whole)
        self.assertTrue(middle.witness)
        self.assertEqual(middle.gamma_minus, self.a)
        self.assertEqual(middle.gamma_plus, self.b)
        self.assertEqual(middle.smallness, Smallness.TYPE2)

        self.assertTrue(ladders.k_complexity(w, self.kspec, found).is_zero)
        self.assertIsNone(ladders.select_brick(w, found))

    def test_far_curves_leave_a_large_brick(self):
        w = ladders.initial_system(self.a, self.d)
        found = ladders.bricks(w, self.kspec)

        self.assertEqual(ladders.k_complexity(w, self.kspec, found), KComplexity((1,)))

        brick = ladders.select_brick(w, found)
        self.assertEqual(brick.base, self.whole)
        self.assertEqual(brick.smallness, Smallness.NOT_SMALL)

    def test_insert_ladder(self):
        w = ladders.initial_system(self.a, self.d)
        brick = ladders.select_brick(w, ladders.bricks(w, self.kspec))
        geodesic = TightGeodesic(self.whole, (self.a, self.c, self.d))

        following = ladders.insert_ladder(w, brick, geodesic, self.kspec)

        self.assertEqual(following.events, (0, 1, 4, 5, 2, 3))
        self.assertIn(Annulus(self.c, 4, 5), following.annuli)
        self.assertEqual(
            [following.cross_section(g) for g in range(following.gap_count)],
            [self.a, self.empty, self.c, self.empty, self.d],
        )
        self.assertTrue(ladders.k_complexity(following, self.kspec).is_zero)

    def test_insert_ladder_endpoint_mismatch(self):
        w = ladders.initial_system(self.a, self.d)
        brick = ladders.select_brick(w, ladders.bricks(w, self.kspec))

        with self.assertRaises(EndpointMismatch):
            ladders.insert_ladder(w, brick, TightGeodesic(self.whole, (self.d, self.c, self.a)), self.kspec)

    def test_insert_ladder_without_changing_curves(self):
        w = ladders.initial_system(self.a, self.b)
        first = ladders.bricks(w, self.kspec)[0]

        with self.assertRaises(NotMaximalComplexity):
            ladders.insert_ladder(w, first, TightGeodesic(self.whole, (self.a, self.b)), self.kspec)

    def test_extract_path(self):
        w = ladders.initial_system(self.a, self.b)

        self.assertEqual(ladders.extract_path(w, self.kspec), [self.a, self.b])

    def test_extract_path_not_adjacent(self):
        w = ladders.initial_system(self.a, self.d)

        with self.assertRaises(OracleFailure):
            ladders.extract_path(w, self.kspec, current=[])

    def test_extract_path_type2_placement(self):
        w = ladders.initial_system(self.a, self.b)
        wide = Brick(self.whole, 0, 3, 2, True, Smallness.TYPE2)

        with self.assertRaises(Type2PlacementViolation):
            ladders.extract_path(w, self.kspec, current=[wide])

    def test_build_path_adjacent(self):
        path, certificate = ladders.build_path(self.kspec, self.a, self.b, 1)

        self.assertEqual(path, [self.a, self.b])
        self.assertEqual(certificate["stages"], [])
        self.assertEqual(certificate["length"], 1)
        self.assertEqual(certificate["T1"], 4)
        self.assertTrue(certificate["within_bound"])

    def test_build_path_same_vertex(self):
        path, certificate = ladders.build_path(self.kspec, self.a, self.a, 1)

        self.assertEqual(path, [self.a])
        self.assertEqual(certificate["length"], 0)

    def test_build_path_one_stage(self):
        path, certificate = ladders.build_path(self.kspec, self.a, self.d, 2, oracle=self.via(self.c))

        self.assertEqual(path, [self.a, self.c, self.d])
        self.assertEqual(len(certificate["stages"]), 1)

        stage = certificate["stages"][0]
        self.assertEqual(stage["ladder_length"], 2)
        self.assertEqual(stage["before"], [1])
        self.assertEqual(stage["after"], [0])
        self.assertLessEqual(stage["increment"], stage["increment_bound"])
        self.assertLessEqual(stage["bricks"], stage["brick_bound"])
        self.assertIsNone(stage["projection_growth"])
        self.assertTrue(certificate["within_bound"])

    def test_build_path_needs_decrease(self):
        # a rung meeting the start three times leaves a large brick behind
        with self.assertRaises(OracleFailure):
            ladders.build_path(self.kspec, self.a, self.d, 2, oracle=self.via(self.slope(3, 1)))

    def test_system_to_dict(self):
        w = AnnulusSystem(self.surface, (7, 3, 9), (Annulus(self.a, 7, 9),))

        self.assertEqual(
            w.to_dict(),
            {"surface": "S1,1", "events": 3, "annuli": [{"curve": [0, 1, 1], "start": 0, "end": 2}]},
        )
        self.assertEqual(w.position(9), 2)
        self.assertEqual(w.next_event, 10)


class FiveHoledSphereLadderTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S0,5")
        self.kspec = GraphSpec("k_of", self.surface, base="pants")
        self.pool = generate_pool(self.surface.generators, 1, 6, 40)

        curves = list(self.pool)
        a, b = next((c, d) for i, c in enumerate(curves) for d in curves[i + 1 :] if intersection_number(c, d) == 2)
        self.c = spanned_subsurface([a, b])
        self.first = NormalMulticurve.union(self.surface, [a, self.c])
        self.second = NormalMulticurve.union(self.surface, [b, self.c])

    def test_flip_across_a_shared_curve(self):
        path, certificate = ladders.build_path(self.kspec, self.first, self.second, 2, self.pool)

        self.assertEqual(path[0], self.first)
        self.assertEqual(path[-1], self.second)
        self.assertEqual(certificate["T1"], ladders.recursion_bounds(2, 2, 1)[1][0])
        self.assertTrue(certificate["within_bound"])
        for v in path:
            self.assertTrue(is_vertex(self.kspec, v))

    def test_geodesic_oracle_in_the_complement(self):
        x = next(p for p in cut_along(self.c) if p.complexity >= 1)
        a, b = [v for v in self.first.components if v != self.c] + [v for v in self.second.components if v != self.c]

        geodesic = ladders.geodesic_oracle(a, b, x)

        self.assertEqual((geodesic.start, geodesic.end), (a, b))
        self.assertEqual(len(geodesic), 1)
        self.assertEqual(geodesic.subsurface, x)
