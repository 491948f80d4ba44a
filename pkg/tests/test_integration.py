"""
Integration test suite
"""

import json
import subprocess
import unittest
from typing import Any
from ._test_utils import RealFileSystemTestCase


def run_boxlogic(
    *args: str,
    print_log: bool = False
) -> tuple[subprocess.CompletedProcess[str], Any]:
    """
    Runs the command line tool as a separate process.

    Args:
        *args (str) : The command and its options.
        print_log (bool, default: False) : Debug flag that prints the standard
                                           error output to console.

    Returns:
        The completed process and the parsed JSON report (None if the command
        printed nothing).
    """
    result = subprocess.run(
        ["python3", "-m", "boxlogic", *args],
        check=False,
        shell=False,
        capture_output=True,
        text=True,
    )

    if print_log:
        print(result.stderr)

    output = result.stdout.strip()
    return result, json.loads(output) if output else None


class TestCommandLine(RealFileSystemTestCase):
    # pylint: disable=missing-class-docstring

    def cache_args(self) -> list[str]:
        # pylint: disable=missing-function-docstring
        return ["--cache-dir", str(self.subdir("cache"))]

    def test_generate_and_check_one_box(self) -> None:
        # pylint: disable=missing-function-docstring
        result, report = run_boxlogic("generate", "-k", "1", *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertEqual(report["elements"], 6)
        self.assertEqual(report["atoms"], 4)
        self.assertFalse(report["cached"])
        entry = report["cache"].rsplit("/", 1)[-1]
        self.assertIsFile("cache", entry, "structure.txt")
        self.assertEqual(len(self.checksum("cache", entry)), 40)

        result, report = run_boxlogic("check", "-k", "1", *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertTrue(report["match"])
        self.assertTrue(report["checks"]["lattice"]["pass"])

    def test_two_boxes(self) -> None:
        # pylint: disable=missing-function-docstring
        result, report = run_boxlogic("generate", "-k", "2", *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertEqual(report["atoms"], 16)

        result, report = run_boxlogic("check", "-k", "2", "--checks", "axioms,lattice",
                                      *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertFalse(report["checks"]["lattice"]["pass"])

        result, report = run_boxlogic("localized", "-k", "2", "--boxes", "0",
                                      *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertEqual(report["count"], 6)

        objective = self.json_file(self.subdir("objective.json"),
                                   {"events": ["x0x0", "x0x1"]})
        result, report = run_boxlogic("lp-max", "-k", "2", "--objective", str(objective),
                                      *self.cache_args())
        self.assertEqual(result.returncode, 0)
        self.assertEqual(report["lp_max"], "1/1")

    def test_missing_cache(self) -> None:
        # pylint: disable=missing-function-docstring
        result, report = run_boxlogic("check", "-k", "2", *self.cache_args())
        self.assertEqual(result.returncode, 2)
        self.assertIsNone(report)
        self.assertIn("boxlogic generate", result.stderr)

    def test_resource_cap(self) -> None:
        # pylint: disable=missing-function-docstring
        result, _ = run_boxlogic("generate", "-k", "2", "--max-elements", "10",
                                 *self.cache_args())
        self.assertEqual(result.returncode, 3)
        self.assertNoFile("cache")

    def test_invalid_check_name(self) -> None:
        # pylint: disable=missing-function-docstring
        result, _ = run_boxlogic("check", "--checks", "axioms,nothing", *self.cache_args())
        self.assertEqual(result.returncode, 2)
        self.assertIn("--checks", result.stderr)


if __name__ == "__main__":
    unittest.main()
