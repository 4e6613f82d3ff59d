"""Provide default variables

- DUALPROBE_DIR: the root directory of the dualprobe source
- REPORT_SCHEMA: the version of the JSON report schema
- JS_SAFE_INT: the largest integer emitted as a JSON number
"""
from pathlib import Path

DUALPROBE_DIR = Path(__file__).parent.parent.resolve()
REPORT_SCHEMA = 1
JS_SAFE_INT = 2**53
