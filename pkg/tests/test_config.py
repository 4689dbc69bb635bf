import json
import os
import tempfile
from argparse import Namespace
from unittest import TestCase

import ddt

from twistable import Cache, Twistable
from twistable.atlas import ATLAS_VERSION
from twistable.classes.config import RunConfig
from twistable.exceptions import ConfigurationError


@ddt.ddt
class RunConfigTest(TestCase):
    def test_defaults(self):
        config = RunConfig()

        self.assertEqual(config.pool_words, 2)
        self.assertEqual(config.pool_cap, 400)
        self.assertEqual(config.samples, 50)
        self.assertEqual(config.cutoff, 3)
        self.assertEqual(config.kappa_ceiling, 10)
        self.assertEqual(config.bgi_ceiling, 100)
        self.assertEqual(config.budget, {"word_length": 2, "intersection_cap": 12, "size_cap": 400})

    def test_runtime_fields_do_not_count(self):
        plain = RunConfig(surface="S0,5", family="pants")
        noisy = RunConfig(surface="S0,5", family="pants", cache="/tmp/pools", out="report.json", verbose=True)

        self.assertEqual(plain, noisy)
        self.assertEqual(plain.fingerprint(), noisy.fingerprint())
        self.assertNotIn("cache", noisy.to_dict())

    def test_fingerprint_follows_fields(self):
        self.assertNotEqual(RunConfig(seed=0).fingerprint(), RunConfig(seed=1).fingerprint())

    @ddt.data({"samples": -1}, {"pool_cap": 0}, {"cutoff": 0}, {"radius": -2})
    def test_invalid(self, values):
        with self.assertRaises(AssertionError):
            RunConfig(**values)

    def test_from_args(self):
        args = Namespace(command="arc-audit", surface="S0,5", delta="1,2,", seed=None, samples=7)
        config = RunConfig.from_args(args)

        self.assertEqual(config.surface, "S0,5")
        self.assertEqual(config.delta, ("1", "2"))
        self.assertEqual(config.samples, 7)
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.to_dict()["delta"], ["1", "2"])


class CacheTest(TestCase):
    def test_disabled(self):
        cache = Cache(None)
        cache.save("pool", {"curves": []}, surface="S1,1")

        self.assertIsNone(cache.load("pool", surface="S1,1"))

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as folder:
            cache = Cache(folder)
            cache.save("pool", {"curves": [[0, 1, 1]]}, surface="S1,1", word_length=1)

            self.assertEqual(cache.load("pool", surface="S1,1", word_length=1), {"curves": [[0, 1, 1]]})
            self.assertIsNone(cache.load("pool", surface="S1,1", word_length=2))
            self.assertTrue(cache.key("pool", surface="S1,1").startswith("pool/"))

    def test_stale_entry(self):
        with tempfile.TemporaryDirectory() as folder:
            cache = Cache(folder)
            path = os.path.join(folder, cache.key("pool", surface="S1,1") + ".json")
            os.makedirs(os.path.dirname(path))

            with open(path, "w+") as file:
                json.dump({"atlas": ATLAS_VERSION + 1, "value": {}}, file)

            self.assertIsNone(cache.load("pool", surface="S1,1"))


class TwistableTest(TestCase):
    def setUp(self) -> None:
        self.config = RunConfig(surface="S1,1", family="curve_graph", pool_words=1, samples=3)

    def test_kspec(self):
        self.assertEqual(Twistable(self.config).kspec.family_id, "k_of(curve_graph)")

        kspec = Twistable(RunConfig(surface="S1,1", family="k_of(sep)")).kspec
        self.assertEqual(kspec.family_id, "k_of(sep)")

        with self.assertRaises(ConfigurationError):
            _ = Twistable(RunConfig(surface="S0,4", family="arc_companion")).kspec

    def test_unknown_command(self):
        with self.assertRaises(ConfigurationError):
            Twistable(self.config).run("nope")

    def test_pool_from_cache(self):
        with tempfile.TemporaryDirectory() as folder:
            config = RunConfig(surface="S1,1", pool_words=1, cache=folder)
            first = Twistable(config).pool
            second = Twistable(config).pool

        self.assertEqual(first.curves, second.curves)
        self.assertEqual(second.budget, config.budget)

    def test_report(self):
        report = Twistable(self.config).rank()

        self.assertEqual(report["command"], "rank")
        self.assertEqual(report["rank"], 1)
        self.assertEqual(report["atlas_version"], ATLAS_VERSION)
        self.assertEqual(report["config_fingerprint"], self.config.fingerprint())
        self.assertTrue(report["verdict"])

    def test_dist(self):
        report = Twistable(self.config).dist()

        self.assertTrue(report["verdict"])
        self.assertEqual(len(report["distances"]), 3)

        for row in report["distances"]:
            self.assertTrue(row["exact"])
            self.assertEqual(row["criterion"], "farey")

    def test_ball_reports_edge_intersection(self):
        report = Twistable(self.config).ball()
        bound = report["intersection_bound"]

        self.assertEqual(bound["nominal"], 1)
        self.assertLessEqual(bound["measured"], bound["nominal"])
        self.assertEqual(report["ball"]["radius"], self.config.radius)

    def test_ball_from_cache(self):
        with tempfile.TemporaryDirectory() as folder:
            config = RunConfig(surface="S1,1", pool_words=1, samples=3, cache=folder)
            first = Twistable(config).ball()
            entries = os.listdir(os.path.join(folder, "ball"))
            second = Twistable(config).ball()

        self.assertEqual(len(entries), 1)
        self.assertEqual(first, second)

    def test_ball_cache_follows_neighbour_cap(self):
        with tempfile.TemporaryDirectory() as folder:
            Twistable(RunConfig(surface="S1,1", pool_words=1, samples=3, cache=folder)).ball()
            capped = Twistable(RunConfig(surface="S1,1", pool_words=1, samples=3, cache=folder, neighbour_cap=1)).ball()
            entries = os.listdir(os.path.join(folder, "ball"))

        self.assertEqual(len(entries), 2)
        self.assertEqual(capped["ball"]["pool"]["neighbour_cap"], 1)
        self.assertFalse(capped["ball"]["vertices"][0]["complete"])

    def test_axiom_audit_runs_every_audit(self):
        report = Twistable(self.config).axiom_audit()
        audits = {audit["axiom_id"]: audit for audit in report["audits"]}

        self.assertEqual(
            list(audits),
            [
                "behrstock",
                "bounded_geodesic_image",
                "lipschitz",
                "projection_diameter",
                "consistency",
                "nesting",
                "large_links",
                "partial_realization",
                "uniqueness",
            ],
        )
        self.assertTrue(audits["partial_realization"]["samples"])
        self.assertTrue(audits["partial_realization"]["verdict"])
        self.assertEqual(report["hierarchy_complexity"], 1)


class FiveHoledSphereTest(TestCase):
    def setUp(self) -> None:
        self.config = RunConfig(surface="S0,5", family="pants", pool_words=1, pool_cap=40, samples=2)

    def test_phi_audit(self):
        report = Twistable(self.config).phi_audit()
        audit = report["audit"]

        self.assertGreater(audit["constants"]["vertices"], 1)
        self.assertTrue(audit["samples"])

    def test_path(self):
        twistable = Twistable(self.config)
        report = twistable.path()

        self.assertEqual(report["command"], "path")
        self.assertTrue(report["paths"])
        for row in report["paths"]:
            self.assertEqual(row["path"][0], row["a"])
            self.assertEqual(row["path"][-1], row["b"])
            self.assertEqual(row["certificate"]["length"], len(row["path"]) - 1)
