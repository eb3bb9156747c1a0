# reporting.py
#
# Check reports and their two renderings: JSON for machines, aligned text
# tables for people.

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np
import pandas as pd
from tabulate import tabulate

from utils.dyadic import DyadicProbability

MAX_KEPT_FAILURES = 20


@dataclass
class CheckReport:
    """
    Outcome of one verification: how many items were checked, how many failed
    (only the first few failing items are kept), plus free-form details.
    Exploratory reports are shown but never count towards the exit status.
    """
    name: str
    subject: str = ""
    checked: int = 0
    failed: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    exploratory: bool = False

    @property
    def passed(self):
        return self.failed == 0

    def count(self, k=1):
        self.checked += k

    def fail(self, item):
        self.failed += 1
        if len(self.failures) < MAX_KEPT_FAILURES:
            self.failures.append(item)

    def merge(self, other: "CheckReport"):
        self.checked += other.checked
        self.failed += other.failed
        room = MAX_KEPT_FAILURES - len(self.failures)
        if room > 0:
            self.failures.extend(other.failures[:room])
        return self

    def to_dict(self, decimals=6):
        return {
            "name": self.name,
            "subject": self.subject,
            "passed": self.passed,
            "exploratory": self.exploratory,
            "checked": self.checked,
            "failed": self.failed,
            "failures": to_jsonable(self.failures, decimals),
            "details": to_jsonable(self.details, decimals),
        }


def to_jsonable(value, decimals=6):
    """Turn report payloads (dyadics, fractions, numpy scalars, dataclasses with to_dict) into JSON types."""
    if isinstance(value, DyadicProbability):
        return value.to_dict(decimals)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, decimals) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v, decimals) for v in value]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict(), decimals)
    return value


def dumps(payload, decimals=6):
    return json.dumps(to_jsonable(payload, decimals), indent=2, sort_keys=True)


def format_probability(p: DyadicProbability, decimals=6):
    return f"{p} ({float(p):.{decimals}f})"


def _status(r: CheckReport):
    if r.exploratory:
        return "EXPLORATORY"
    return "PASS" if r.passed else "FAIL"


def reports_table(reports: List[CheckReport]):
    rows = [[r.name, r.subject, _status(r), r.checked, r.failed] for r in reports]
    return tabulate(rows, headers=["check", "subject", "status", "checked", "failed"], tablefmt="simple")


def frame_table(df: pd.DataFrame):
    return tabulate(df, headers="keys", tablefmt="simple", showindex=False)


def matrix_text(m):
    return "\n".join("  " + " ".join(str(v) for v in row) for row in m.to_lists())
