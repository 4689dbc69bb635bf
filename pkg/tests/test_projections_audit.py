from unittest import TestCase

import ddt
import networkx as nx

from twistable import projections_audit
from twistable.atlas import get_surface, slope_weights
from twistable.classes.graph import Ball, GraphSpec
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.exceptions import AnnularTarget, EmptyProjection
from twistable.surface_core import cut_along, generate_pool, intersection_number, project_curves


@ddt.ddt
class FitConstantsTest(TestCase):
    @ddt.data(
        ([2, 4], [1, 2], (1.0, 2.0)),
        ([3, 3], [3, 3], (1.0, 0.0)),
        ([], [], (1.0, 0.0)),
        ([5, 1], [1, 1], (1.0, 4.0)),
    )
    @ddt.unpack
    def test_fit(self, lhs, rhs, expected):
        self.assertEqual(projections_audit.fit_constants(lhs, rhs), expected)

    def test_fit_holds_on_every_sample(self):
        lhs, rhs = [1, 7, 3, 9], [2, 3, 3, 4]
        k1, k2 = projections_audit.fit_constants(lhs, rhs)

        for left, right in zip(lhs, rhs):
            self.assertLessEqual(left, k1 * right + k2 + 1e-9)
            self.assertLessEqual(right, k1 * left + k2 + 1e-9)


class ProjectionsTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S1,1")
        self.whole = Subsurface.whole(self.surface)
        self.spec = GraphSpec("curve_graph", self.surface)

        self.a = self.slope(0, 1)
        self.b = self.slope(1, 0)
        self.c = self.slope(1, 1)
        self.d = self.slope(2, 1)
        self.pool = CurvePool(self.surface, [self.a, self.b, self.c, self.d], {"size_cap": 4})

    def slope(self, p, q) -> NormalMulticurve:
        return NormalMulticurve(self.surface, slope_weights(self.surface, p, q))

    def test_project(self):
        image = projections_audit.project(self.d, self.whole)

        self.assertEqual(image.curves, (self.d,))
        self.assertFalse(image.is_empty)
        self.assertEqual(image.to_dict()["curves"], [[2, 1, 1]])

    def test_project_to_pants(self):
        pants = cut_along(self.a)[0]

        with self.assertRaises(AnnularTarget):
            projections_audit.project(self.b, pants)

    def test_distances(self):
        self.assertEqual(projections_audit.diameter([self.a], self.whole), 0)
        self.assertEqual(projections_audit.diameter([self.a, self.b, self.d], self.whole), 2)
        self.assertEqual(projections_audit.set_distance([self.a], [self.c], self.whole), 1)
        self.assertEqual(projections_audit.proj_distance(self.a, self.d, self.whole), 2)

    def test_empty_projection(self):
        with self.assertRaises(EmptyProjection):
            projections_audit.set_distance([], [self.a], self.whole)

    def test_witness_pool_of_a_filling_pool(self):
        # every piece cut out by a slope is a pants
        self.assertEqual(projections_audit.witness_pool(self.pool), [self.whole])

    def test_distance_formula_on_one_witness(self):
        slopes = [self.a, self.b, self.c, self.d, self.slope(3, 1), self.slope(5, 2)]
        pairs = [(x, y) for i, x in enumerate(slopes) for y in slopes[i + 1 :]]
        witnesses = projections_audit.witness_pool(self.pool)

        report = projections_audit.distance_formula_report(self.spec, pairs, 1, witnesses, self.pool)

        self.assertTrue(report.verdict)
        self.assertEqual(report.constants["K1"], 1.0)
        self.assertEqual(report.constants["K2"], 0.0)
        self.assertEqual(report.constants["held_out"], {"K1": 1.0, "K2": 0.0})
        self.assertEqual(report.constants["certified"], len(pairs))
        for sample in report.samples:
            self.assertEqual(sample.values["lhs"], sample.values["rhs"])

    def test_distance_formula_judges_held_out_pairs(self):
        far = self.slope(5, 2)
        pairs = [(self.a, self.b), (self.a, far)]

        report = projections_audit.distance_formula_report(self.spec, pairs, 1, [], self.pool)

        self.assertEqual(report.constants["held_out"], {"K1": 1.0, "K2": 1.0})
        self.assertIsNone(report.samples[0].verdict)
        self.assertEqual(report.samples[1].values["lhs"], 3)
        self.assertFalse(report.samples[1].verdict)
        self.assertFalse(report.verdict)

    def test_phi_audit_without_edges(self):
        pool = CurvePool(self.surface, [self.a], {"size_cap": 1})

        report = projections_audit.phi_audit(self.spec, pool, samples=4)

        self.assertFalse(report.verdict)
        self.assertEqual(report.constants["vertices"], 1)
        self.assertEqual(report.constants["edges"], 0)
        self.assertIn({"kind": "samples"}, [s.inputs for s in report.samples])

    def test_projection_diameter_audit(self):
        report = projections_audit.projection_diameter_audit([self.a, self.d], [self.whole])

        self.assertTrue(report.verdict)
        self.assertEqual(len(report.samples), 2)
        self.assertEqual(report.constants["diameter"], 0)
        self.assertEqual(report.to_dict()["axiom_id"], "projection_diameter")

    def test_lipschitz_audit(self):
        report = projections_audit.lipschitz_audit([(self.a, self.b), (self.a, self.d)], [self.whole])

        self.assertTrue(report.verdict)
        self.assertEqual(report.constants["lipschitz"], 2)

        strict = projections_audit.lipschitz_audit([(self.a, self.d)], [self.whole], bound=1)
        self.assertFalse(strict.verdict)

    def test_uniqueness_audit(self):
        kspec = GraphSpec("k_of", self.surface, base="curve_graph")
        report = projections_audit.uniqueness_audit(
            kspec, [(self.a, self.b), (self.a, self.d)], 1, self.pool, [self.whole], 1
        )

        self.assertEqual(report.constants["T1"], 4)
        # the second pair projects two apart and is skipped
        self.assertEqual(len(report.samples), 1)
        self.assertEqual(report.samples[0].values["length"], 1)
        self.assertTrue(report.verdict)


@ddt.ddt
class DeltaEstimateTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S1,1")
        self.spec = GraphSpec("curve_graph", self.surface)
        self.vertices = [
            NormalMulticurve(self.surface, slope_weights(self.surface, p, 1)) for p in range(4)
        ]

    def ball(self, edges) -> Ball:
        v = self.vertices
        graph = nx.Graph([(v[i], v[j]) for i, j in edges])
        distances = nx.single_source_shortest_path_length(graph, v[0])
        return Ball(self.spec, v[0], 2, graph, dict(distances), {u: True for u in graph})

    @ddt.data(
        ([(0, 1), (0, 2), (1, 3)], 0.0),
        ([(0, 1), (1, 2), (2, 3), (3, 0)], 1.0),
    )
    @ddt.unpack
    def test_delta(self, edges, expected):
        report = projections_audit.delta_estimate(self.ball(edges), samples=100)

        self.assertEqual(report.constants["delta"], expected)
        self.assertEqual(len(report.constants["trend"]), 2)
        self.assertTrue(report.constants["hyperbolicity_criterion"])


class PantsSurfaceTest(TestCase):
    def setUp(self) -> None:
        self.surface = get_surface("S0,5")
        self.whole = Subsurface.whole(self.surface)
        self.spec = GraphSpec("curve_graph", self.surface)
        self.pool = generate_pool(self.surface.generators, 1, 12, 60)

        generators = self.surface.generators
        self.a, self.b = next(
            (c, d) for i, c in enumerate(generators) for d in generators[i + 1 :] if intersection_number(c, d)
        )

    def test_phi_audit_on_pants_decompositions(self):
        report = projections_audit.phi_audit(GraphSpec("pants", self.surface), self.pool, samples=6)

        self.assertGreater(report.constants["vertices"], 1)
        self.assertGreater(report.constants["edges"], 0)
        self.assertIn("edge", [s.inputs.get("kind") for s in report.samples])
        self.assertNotIn({"kind": "samples"}, [s.inputs for s in report.samples])

    def test_uncertified_pairs_left_out(self):
        pool = CurvePool(self.surface, [self.a, self.b], {"size_cap": 2})

        report = projections_audit.distance_formula_report(self.spec, [(self.a, self.b)], 1, [self.whole], pool)

        self.assertIsNone(report.samples[0].values["lhs"])
        self.assertFalse(report.samples[0].values["exact"])
        self.assertIsNone(report.samples[0].verdict)
        self.assertEqual(report.constants["certified"], 0)
        self.assertFalse(report.verdict)
        self.assertIn("1 pairs without a certified distance left out of the fit", report.notes)

    def test_partial_realization_in_a_piece(self):
        x = next(p for p in cut_along(self.a) if p.complexity >= 1)
        curve = project_curves(self.b, x)[0]

        vertex, report = projections_audit.partial_realization([x], [curve], self.pool, [self.whole])

        self.assertEqual(len(vertex), 2)
        self.assertIn(curve, vertex.components)
        self.assertIn(self.a, vertex.components)
        self.assertTrue(report.verdict)
        self.assertTrue(all(c.is_pants for c in cut_along(vertex)))
