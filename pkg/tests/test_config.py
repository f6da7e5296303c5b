from fractions import Fraction

import pytest

from locus.core.config import get_settings
from locus.core.errors import ConfigError
from locus.schemas.config import ExperimentConfig


def test_defaults():
    config = ExperimentConfig()
    assert config.delta == Fraction(1, 4)
    assert config.field == "GF(2)"
    assert (config.t, config.n, config.d) == (2, 2, 1)
    assert config.reuse is True


def test_settings_defaults():
    settings = get_settings()
    assert settings.LOCUS_EXACT_BUDGET == 2 ** 20
    assert settings.LOCUS_REPORT_SCHEMA == 1


def test_parse_text_skips_comments():
    text = "# experiment\n\ndelta = 1/3\nfield = GF(2^2)\n  reuse = false  \n"
    assert ExperimentConfig.parse_text(text) == {"delta": "1/3", "field": "GF(2^2)", "reuse": "false"}


@pytest.mark.parametrize("text", ["colour = red\n", "delta 1/3\n"])
def test_parse_text_rejects_bad_lines(text):
    with pytest.raises(ConfigError, match="line 1"):
        ExperimentConfig.parse_text(text)


def test_from_file_with_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("delta = 1/3\ntrials = 50\nreuse = false\n")
    config = ExperimentConfig.from_file(str(path), {"trials": 7, "seed": None})
    assert config.delta == Fraction(1, 3)
    assert config.trials == 7
    assert config.seed == 0
    assert config.reuse is False


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        ExperimentConfig.from_file(str(tmp_path / "absent.cfg"))


@pytest.mark.parametrize("values", [{"delta": "a/b"}, {"mode": "guess"}, {"variant": "ldc"}, {"trials": "many"}])
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        ExperimentConfig.build(values)


def test_decimal_delta():
    assert ExperimentConfig.build({"delta": "0.25"}).delta == Fraction(1, 4)


def test_to_text_reads_back(tmp_path):
    config = ExperimentConfig.build({"delta": "2/3", "reuse": False, "point": "1,2"})
    path = tmp_path / "again.cfg"
    path.write_text(config.to_text())
    assert ExperimentConfig.from_file(str(path)) == config
