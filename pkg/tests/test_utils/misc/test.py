import logging
import sys
import tempfile
from pathlib import Path
from unittest import TestCase, main

from dualprobe.utils.misc import logger, run_command, set_loglevel


class TestUtilsMisc(TestCase):

    def test_run_command_return(self):
        out = run_command(
            [sys.executable, "-c", "print('dual')"],
            stdout="RETURN",
            print_command=False,
        )
        self.assertEqual(out.strip(), "dual")

    def test_run_command_to_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            outfile = Path(tmpdir) / "out.txt"
            logged = []
            out = run_command(
                [sys.executable, "-c", "print(2 ** 10)"],
                stdout=outfile,
                print_command_handler=logged.append,
            )
            self.assertIsNone(out)
            self.assertEqual(outfile.read_text().strip(), "1024")
            self.assertEqual(len(logged), 1)
            self.assertTrue(logged[0].startswith("RUNNING COMMAND: "))

    def test_run_command_failure(self):
        with self.assertRaises(RuntimeError):
            run_command(
                [sys.executable, "-c", "raise SystemExit(3)"],
                print_command=False,
            )

    def test_set_loglevel(self):
        set_loglevel(True)
        self.assertEqual(logger.level, logging.DEBUG)
        set_loglevel(False)
        self.assertEqual(logger.level, logging.INFO)


if __name__ == "__main__":
    main(verbosity=2)
