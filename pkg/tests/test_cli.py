import json
import logging

import pytest

import vertex_net
from utils.errors import EncodingError
from utils.oracle import oracle_probability
from vertex_net import get_parser, main, parse_edge


@pytest.fixture(autouse=True)
def detach_cli_handlers():
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_vertex_net", False)]:
        root.removeHandler(handler)


def run(capsys, *argv):
    code = main(get_parser().parse_args(list(argv)))
    return code, capsys.readouterr().out


def test_parse_edge():
    assert parse_edge("2,3") == (2, 3)
    assert parse_edge("0b10, 0b1") == (2, 1)
    with pytest.raises(EncodingError):
        parse_edge("1,2,3")
    with pytest.raises(EncodingError):
        parse_edge("a,1")


def test_analyze_json(capsys):
    code, out = run(capsys, "analyze", "011001101", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["class"] == "TwelveClass"
    assert payload["delta"] == 1
    assert payload["g"]["13"] == [[1, 1], [1, 0]]
    assert payload["eigenvectors"] == {"A": [[1, 1, 1]], "AT": [[0, 1, 1]]}
    assert payload["Q"] == ["1", "0"] and payload["Q_t"] == ["1", "1"]
    assert payload["permitted_dim"] == {"0": 1, "1": 4}


def test_analyze_delta_zero(capsys):
    code, out = run(capsys, "analyze", "000000000")
    assert code == 0
    assert "DeltaZero" in out


def test_transform_text(capsys):
    code, out = run(capsys, "transform", "011001101", "-n", "2")
    assert code == 0
    assert "10 / 6" in out
    assert ".###" in out.splitlines()


def test_correlate_square_with_oracle_and_predictor(capsys):
    code, out = run(capsys, "correlate", "011001101", "-n", "2", "--edges", "0,0", "2,0", "0,2", "2,2",
                    "--oracle", "--predictor", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["engine"]["exact"] == "1/2^3"
    assert payload["oracle"]["exact"] == "1/2^3"
    assert payload["predictor"]["exact"] == "1/2^3"
    assert payload["match"] is True


@pytest.mark.parametrize("argv", [
    ["analyze", "0110"],
    ["correlate", "011001101", "-n", "1", "--edges", "0,0", "0,0"],
    ["correlate", "000000000", "-n", "1", "--edges", "0,0"],
    ["transform", "011001101", "-n", "9"],
    ["verify", "everything"],
    ["scan", "ThirteenClass"],
])
def test_errors_exit_with_two(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_verify_directsum(capsys):
    code, out = run(capsys, "verify", "directsum", "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["passed"] is True
    assert len(payload["reports"]) == 38


def test_verify_levels_override(capsys):
    code, out = run(capsys, "verify", "spins", "-n", "1")
    assert code == 0
    assert "all checks passed" in out


def test_scan_other_class_is_exploratory(capsys):
    code, out = run(capsys, "scan", "DeltaZero", "-n", "1")
    assert code == 0
    assert "exploratory" in out
    assert "EXPLORATORY" in out and "PASS" not in out


def test_oracle_uses_the_overridden_level_cap(capsys, monkeypatch):
    caps = []

    def recording_oracle(model, q, max_n):
        caps.append(max_n)
        return oracle_probability(model, q, max_n)

    monkeypatch.setattr(vertex_net, "oracle_probability", recording_oracle)
    code, out = run(capsys, "correlate", "011001101", "-n", "2", "--edges", "0,0", "--oracle",
                    "--max-n-override", "7", "--format", "json")
    assert code == 0
    assert json.loads(out)["match"] is True
    assert caps == [7]


def test_oracle_level_cap_from_config(capsys, tmp_path):
    extra = tmp_path / "small.yaml"
    extra.write_text("engine:\n  max_n: 1\n")
    code, _ = run(capsys, "correlate", "011001101", "-n", "2", "--edges", "0,0", "--oracle", "--config", str(extra))
    assert code == 2
    code, out = run(capsys, "correlate", "011001101", "-n", "2", "--edges", "0,0", "--oracle", "--config", str(extra),
                    "--max-n-override", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["oracle"]["exact"] == "1/2^1"
