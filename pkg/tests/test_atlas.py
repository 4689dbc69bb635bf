import json
import os
import tempfile
from unittest import TestCase

import ddt

from twistable import atlas
from twistable.classes.multicurve import NormalMulticurve
from twistable.classes.surface import MARKED, SurfaceType
from twistable.exceptions import ConfigurationError
from twistable.surface_core import generate_pool, intersection_number


@ddt.ddt
class AtlasTest(TestCase):
    @ddt.data(*atlas.SURFACES)
    def test_surface(self, name):
        surface = atlas.get_surface(name)
        triangulation = surface.triangulation

        self.assertEqual(surface.name, name)
        self.assertEqual(triangulation.euler_characteristic, surface.stype.euler_characteristic)
        self.assertEqual(len(surface.punctures), surface.stype.boundary)
        self.assertEqual(3 * triangulation.triangle_count, 2 * triangulation.edge_count)

        for side, other in enumerate(triangulation.gluing):
            self.assertEqual(triangulation.gluing[other], side)

    @ddt.data(
        ("S0,4", 4, 6),
        ("S1,1", 2, 3),
        ("S0,5", 6, 9),
        ("S2,0", 6, 9),
    )
    @ddt.unpack
    def test_counts(self, name, triangles, edges):
        triangulation = atlas.get_surface(name).triangulation

        self.assertEqual(triangulation.triangle_count, triangles)
        self.assertEqual(triangulation.edge_count, edges)

    def test_closed_surface_marked_point(self):
        surface = atlas.get_surface("S2,0")

        self.assertEqual(surface.triangulation.punctures, (MARKED,))
        self.assertEqual(surface.punctures, [])

    def test_same_entry(self):
        self.assertIs(atlas.get_surface("S1,2"), atlas.get_surface("S1,2"))
        self.assertEqual(atlas.get_surface("S1,2"), atlas.get_surface("1,2"))

    @ddt.data("S4,0", "S0,3", "S9,9")
    def test_not_in_atlas(self, name):
        with self.assertRaises(ConfigurationError):
            atlas.get_surface(name)

    @ddt.data("torus", "S1", "Sx,2")
    def test_malformed(self, name):
        with self.assertRaises(ConfigurationError):
            SurfaceType.parse(name)

    @ddt.data((1, 0), (0, 2), (0, 1))
    @ddt.unpack
    def test_no_ideal_triangulation(self, genus, boundary):
        with self.assertRaises(ConfigurationError):
            atlas.build_triangulation(SurfaceType(genus, boundary))

    @ddt.data(((1, 0), (1, 0, 1)), ((0, 1), (0, 1, 1)), ((1, 1), (1, 1, 0)), ((2, 1), (2, 1, 1)))
    @ddt.unpack
    def test_slope_weights(self, slope, expected):
        surface = atlas.get_surface("S1,1")

        self.assertEqual(atlas.slope_weights(surface, *slope), expected)
        self.assertEqual(atlas.decode_slope(surface, expected), slope)

    def test_slope_model_missing(self):
        with self.assertRaises(ConfigurationError):
            atlas.slope_weights(atlas.get_surface("S0,5"), 1, 0)

    def test_dump_and_load(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "atlas.json")
            atlas.dump(path)
            surfaces = atlas.load(path)

        self.assertEqual(sorted(surfaces), sorted(atlas.SURFACES))
        self.assertEqual(
            surfaces["S1,2"].triangulation,
            atlas.get_surface("S1,2").triangulation,
        )

    def test_load_reads_stored_generators(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "atlas.json")
            atlas.dump(path)

            with open(path, "r") as file:
                data = json.load(file)
            stored = data["surfaces"]["S1,1"]["generators"][:2]
            data["surfaces"]["S1,1"]["generators"] = stored
            with open(path, "w") as file:
                json.dump(data, file)

            surfaces = atlas.load(path)

        self.assertEqual([list(c.weights) for c in surfaces["S1,1"].generators], stored)
        self.assertEqual(
            [c.weights for c in surfaces["S1,2"].generators],
            [c.weights for c in atlas.get_surface("S1,2").generators],
        )

    def test_load_version_mismatch(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "atlas.json")
            with open(path, "w") as file:
                json.dump({"version": atlas.ATLAS_VERSION - 1, "surfaces": {}}, file)

            with self.assertRaises(ConfigurationError):
                atlas.load(path)


@ddt.ddt
class GeneratorsTest(TestCase):
    @ddt.data("S0,4", "S1,1", "S0,5", "S1,2", "S2,0")
    def test_generating(self, name):
        surface = atlas.get_surface(name)
        generators = surface.generators

        self.assertTrue(atlas.is_generating(generators))
        self.assertEqual(len(set(generators)), len(generators))
        for c in generators:
            self.assertTrue(c.is_curve)

    def test_not_generating(self):
        surface = atlas.get_surface("S1,1")
        a = NormalMulticurve(surface, atlas.slope_weights(surface, 0, 1))
        b = NormalMulticurve(surface, atlas.slope_weights(surface, 1, 0))

        self.assertFalse(atlas.is_generating([]))
        self.assertFalse(atlas.is_generating([a]))
        self.assertTrue(atlas.is_generating([a, b]))

    def test_disjoint_curves_do_not_generate(self):
        surface = atlas.get_surface("S0,5")
        curves = list(generate_pool(surface.generators, 1, 6, 40))
        a, b = next((c, d) for i, c in enumerate(curves) for d in curves[i + 1 :] if not intersection_number(c, d))

        self.assertFalse(atlas.is_generating([a, b]))
