import json
from unittest import TestCase, main

from dualprobe.core.testing import run_cli

GEOMETRIC = '{"kind": "enumerated", "family": "geometric", "params": {"r": 2}}'


class TestMeasureCommands(TestCase):

    def _json(self, argv):
        status, out = run_cli([*argv, "--json", "--no-meta"])
        self.assertEqual(status, 0, out)
        return json.loads(out)

    def test_measure_low_density(self):
        report = self._json(
            [
                "measure", "--m", "16", "--N", "4", "--horizon", "16",
                "--samples", "20000", "--seed", "3",
            ]
        )
        self.assertEqual(report["exact"], "697/65536")
        self.assertEqual(report["samples"], 20000)
        self.assertTrue(report["within_3se"])

    def test_measure_threshold(self):
        report = self._json(
            ["measure", "--threshold", "10", "7", "--samples", "100"]
        )
        self.assertEqual(report["exact"], "11/64")
        self.assertEqual(report["event"], "|supp ∩ 10| >= 7")

    def test_measure_workers(self):
        argv = [
            "measure", "--m", "2", "--N", "3", "--horizon", "40",
            "--samples", "3000", "--seed", "5", "--block-size", "500",
        ]
        one = self._json(argv)
        two = self._json([*argv, "--workers", "2"])
        self.assertEqual(one, two)
        self.assertIsNone(one["exact"])
        self.assertIsNone(one["within_3se"])

    def test_measure_invalid(self):
        self.assertEqual(run_cli(["measure", "--N", "1"])[0], 2)
        self.assertEqual(run_cli(["measure", "--samples", "0"])[0], 2)
        self.assertEqual(
            run_cli(["measure", "--m", "8", "--horizon", "4"])[0], 2
        )

    def test_cover(self):
        report = self._json(
            [
                "cover", f"[{GEOMETRIC}]",
                "--grid", "16,4,4096", "--grid", "32,4,4096",
            ]
        )
        (sample,) = report["samples"]
        self.assertTrue(sample["assigned"])
        self.assertEqual(sample["params"], {"m": 32, "N": 4, "H": 4096})
        self.assertTrue(report["conclusive"])

    def test_cover_strict(self):
        argv = [
            "cover",
            '[{"kind": "periodic", "pattern": [1, 0]}]',
            "--grid", "1,2,64",
        ]
        status, out = run_cli(argv)
        self.assertEqual(status, 0)
        self.assertIn("skipped, NOT_THIN", out)
        self.assertEqual(run_cli([*argv, "--strict"])[0], 3)

    def test_cover_grid_errors(self):
        self.assertEqual(run_cli(["cover", GEOMETRIC])[0], 2)
        self.assertEqual(run_cli(["cover", GEOMETRIC, "--grid", "1,2"])[0], 2)
        self.assertEqual(
            run_cli(["cover", GEOMETRIC, "--grid", "1,x,3"])[0], 2
        )

    def test_dense_ext(self):
        report = self._json(
            ["dense-ext", "--prefix", "0000", "--m", "1", "--N", "2"]
        )
        self.assertEqual(
            report["support"], {"kind": "explicit", "elements": [4, 5, 6, 7]}
        )
        self.assertEqual(report["witness_k"], 8)
        self.assertEqual(
            run_cli(["dense-ext", "--prefix", "0120"])[0], 2
        )


if __name__ == "__main__":
    main(verbosity=2)
