import json
import logging
from argparse import Namespace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from utils.config import add_cli_config
from utils.dyadic import DyadicProbability
from utils.errors import DyadicError
from utils.logger import setup_logger
from utils.reporting import MAX_KEPT_FAILURES, CheckReport, dumps, format_probability, reports_table


@given(st.integers(0, 20), st.data())
def test_dyadic_from_fraction(e, data):
    numerator = data.draw(st.integers(0, 1 << e))
    p = DyadicProbability.from_fraction(Fraction(numerator, 1 << e))
    assert p.to_fraction() == Fraction(numerator, 1 << e)
    assert p.numerator % 2 == 1 or p == DyadicProbability(0, 0)


def test_dyadic_text_and_order():
    p = DyadicProbability.from_fraction(Fraction(3, 8))
    assert (p.numerator, p.log2_denominator) == (3, 3)
    assert str(p) == "3/2^3"
    assert float(p) == 0.375
    assert DyadicProbability.power_of_half(4) < p < DyadicProbability(1, 0)
    assert p.to_dict(2) == {"exact": "3/2^3", "decimal": 0.38}


@pytest.mark.parametrize("value", [Fraction(1, 3), Fraction(5, 4), Fraction(-1, 2)])
def test_dyadic_rejects_non_probabilities(value):
    with pytest.raises(DyadicError):
        DyadicProbability.from_fraction(value)


def test_dyadic_must_be_canonical():
    with pytest.raises(DyadicError):
        DyadicProbability(2, 2)
    with pytest.raises(DyadicError):
        DyadicProbability(0, 3)


def test_report_keeps_the_first_failures():
    report = CheckReport(name="demo")
    for i in range(MAX_KEPT_FAILURES + 5):
        report.count()
        report.fail({"i": i})
    assert report.failed == MAX_KEPT_FAILURES + 5
    assert len(report.failures) == MAX_KEPT_FAILURES
    assert not report.passed
    merged = CheckReport(name="total").merge(report)
    assert merged.checked == report.checked


def test_dumps_is_plain_json():
    payload = {"p": DyadicProbability.power_of_half(3), "q": Fraction(1, 2), "pairs": [(0, 1)]}
    loaded = json.loads(dumps(payload))
    assert loaded == {"p": {"exact": "1/2^3", "decimal": 0.125}, "q": "1/2", "pairs": [[0, 1]]}
    assert format_probability(DyadicProbability.power_of_half(1), 2) == "1/2^1 (0.50)"


def test_cli_flags_override_yaml(cfg):
    args = Namespace(format="json", jobs=3, max_n_override=7, sample_size=None, seed=11)
    cfg = add_cli_config(cfg, args)
    assert cfg.output.format == "json"
    assert cfg.jobs == 3
    assert cfg.engine.max_n == 7 and cfg.scan.max_n == 7
    assert cfg.scan.sample_size == 500
    assert cfg.scan.seed == 11


def test_setup_logger_is_idempotent():
    logger = setup_logger("vertex_net.test", level=logging.INFO)
    setup_logger("vertex_net.test", level=logging.DEBUG)
    marked = [h for h in logger.handlers if getattr(h, "_vertex_net", False)]
    assert len(marked) == 1
    assert marked[0].level == logging.DEBUG


def test_reports_table_status():
    clean = CheckReport(name="scan", subject="Other n=1", checked=3, exploratory=True)
    broken = CheckReport(name="scan", subject="Other n=2", checked=3, exploratory=True)
    broken.fail({"matrix": "100010001"})
    failing = CheckReport(name="directsum", checked=1)
    failing.fail({})
    rows = reports_table([clean, broken, CheckReport(name="lemma_m", checked=1), failing]).splitlines()[2:]
    assert [row.split()[-3] for row in rows] == ["EXPLORATORY", "EXPLORATORY", "PASS", "FAIL"]
