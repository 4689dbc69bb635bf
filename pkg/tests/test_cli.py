import json
import os
import tempfile
from unittest import TestCase

import ddt

from twistable import cli
from twistable.api import COMMANDS
from twistable.classes.config import RunConfig


@ddt.ddt
class CliTest(TestCase):
    def setUp(self) -> None:
        self.folder = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.folder.name, "reports", "report.json")

    def tearDown(self) -> None:
        self.folder.cleanup()

    def main(self, *argv) -> int:
        return cli.main(list(argv) + ["--out", self.out])

    def read(self):
        with open(self.out, "r") as file:
            return json.load(file)

    def test_commands(self):
        self.assertEqual(
            sorted(COMMANDS),
            sorted(
                [
                    "witnesses",
                    "rank",
                    "hyp",
                    "ball",
                    "dist",
                    "proj",
                    "df-report",
                    "axiom-audit",
                    "path",
                    "phi-audit",
                    "arc-audit",
                ]
            ),
        )

    @ddt.data(
        ("sep", "S3,0", 2),
        ("pants", "S0,5", 1),
        ("pants", "S0,6", 2),
        ("curve_graph", "S2,2", 1),
    )
    @ddt.unpack
    def test_rank(self, family, surface, expected):
        self.assertEqual(self.main("rank", "--surface", surface, "--family", family), cli.EXIT_PASS)

        report = self.read()
        self.assertEqual(report["command"], "rank")
        self.assertEqual(report["rank"], expected)
        self.assertEqual(report["schema_version"], 1)
        self.assertEqual(report["config"]["surface"], surface)

    def test_hyp(self):
        self.assertEqual(self.main("hyp", "--surface", "S2,3", "--family", "sep"), cli.EXIT_PASS)
        self.assertTrue(self.read()["hyperbolic_criterion"])

        self.assertEqual(self.main("hyp", "--surface", "S3,0", "--family", "sep"), cli.EXIT_PASS)
        self.assertFalse(self.read()["hyperbolic_criterion"])

    def test_witnesses(self):
        self.assertEqual(self.main("witnesses", "--surface", "S0,5", "--family", "pants"), cli.EXIT_PASS)

        report = self.read()
        self.assertEqual(report["rank"], 1)
        self.assertEqual(len(report["configurations"]["1"]), 1)
        self.assertEqual(report["configurations"]["2"], [])

    def test_fingerprint(self):
        self.main("rank", "--surface", "S0,6", "--family", "pants", "--seed", "4")

        expected = RunConfig(surface="S0,6", family="pants", seed=4).fingerprint()
        self.assertEqual(self.read()["config_fingerprint"], expected)

    @ddt.data(
        ("rank", "--surface", "torus"),
        ("rank", "--family", "wiggly"),
        ("ball", "--surface", "S5,0"),
        ("path", "--surface", "S0,4", "--family", "arc_companion"),
    )
    def test_configuration_error(self, argv):
        self.assertEqual(self.main(*argv), cli.EXIT_CONFIG)
        self.assertIn("error", self.read())

    @ddt.data(("--samples", "-1"), ("--pool-cap", "0"), ("--cutoff", "0"))
    def test_invalid_budget(self, flags):
        self.assertEqual(self.main("rank", *flags), cli.EXIT_CONFIG)

    def test_unknown_command(self):
        with self.assertRaises(SystemExit):
            cli.build_parser().parse_args(["fly"])

    def test_parser_defaults(self):
        args = cli.build_parser().parse_args(["dist"])

        self.assertEqual(args.surface, "S1,1")
        self.assertEqual(args.family, "curve_graph")
        self.assertEqual(args.pool_words, 2)
        self.assertEqual(args.radius, 2)
        self.assertIsNone(args.delta)
        self.assertFalse(args.verbose)

    def test_parser_ball_options(self):
        args = cli.build_parser().parse_args(["ball", "--neighbour-cap", "3", "--certify"])
        config = RunConfig.from_args(args)

        self.assertEqual(config.neighbour_cap, 3)
        self.assertTrue(config.certify)
        self.assertNotEqual(config.fingerprint(), RunConfig().fingerprint())

    @ddt.data(
        ("df-report", "--surface", "S1,1", "--pool-words", "1", "--samples", "4"),
        ("ball", "--surface", "S1,1", "--pool-words", "1", "--samples", "2"),
    )
    def test_reports_are_reproducible(self, argv):
        cache = os.path.join(self.folder.name, "cache")
        outputs = []

        for name, extra in (("plain", []), ("cold", ["--cache", cache]), ("warm", ["--cache", cache])):
            out = os.path.join(self.folder.name, f"{name}.json")
            cli.main(list(argv) + ["--out", out] + extra)
            with open(out, "rb") as file:
                outputs.append(file.read())

        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[0], outputs[2])
