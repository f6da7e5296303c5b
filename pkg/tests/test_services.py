import json

import pytest

from locus.core.decoder import Target
from locus.core.errors import ConfigError, TransformationImpossible
from locus.main import write_output
from locus.schemas.config import ExperimentConfig
from locus.services.attack import run_attack
from locus.services.common import canonical_decoder, default_code, determining_sets
from locus.services.extract import run_extract
from locus.services.fool import run_fool
from locus.services.goldberg import run_goldberg
from locus.services.linecode import run_linecode
from locus.services.repeat import run_repeat
from locus.services.report import run_report
from locus.services.selftest import run_selftest
from locus.services.twoquery import run_twoquery


def config(**values):
    return ExperimentConfig.build(values)


def test_determining_sets_are_minimal():
    code = default_code()
    assert determining_sets(code, Target.message(0), 3) == [(0,), (1, 2)]
    decoder = canonical_decoder(code, 3)
    assert decoder.query_distribution(Target.message(1)).support == ((0, 2), (1,))


def test_selftest():
    records = run_selftest(config(t=4))
    assert [r.suite for r in records] == ["gf", "codealg"]
    assert all(r.passed for r in records)


def test_fool_finds_witnesses():
    records = run_fool(config(q=1, delta="1"))
    assert [r.kind for r in records] == ["attack_witness", "fool", "attack_witness", "fool"]
    assert records[0].exact_error.value == 1
    assert records[1].exact.value == 1


def test_fool_on_smooth_default_decoder():
    records = run_fool(config())
    assert all(r.no_attack for r in records)


def test_extract_certifies_the_smooth_part():
    records = run_extract(config())
    kinds = [r.kind for r in records]
    assert kinds[:3] == ["eval", "extract", "extract"]
    assert sorted(r.label for r in records if r.kind == "certificate") == ["measured", "smooth"]
    for record in records:
        if record.kind == "certificate":
            assert record.verified_error.value <= record.soundness.value
        if record.kind == "matching":
            assert record.worst_error.value <= record.bound.value


def test_goldberg_toys():
    records = run_goldberg(config(toys=3))
    assert len(records) == 12
    final = [r for r in records if r.stage == "nonadaptive"]
    assert all(r.completeness.value == 1 for r in final)
    assert all(r.soundness.value <= r.certified.value for r in final)


def test_twoquery_default_code():
    (record,) = run_twoquery(config(delta="2/3"))
    assert record.X == []
    assert (record.k, record.k_prime) == (2, 2)
    assert record.radius.num == 1 and record.radius.den == 3


def test_twoquery_drops_every_target():
    with pytest.raises(TransformationImpossible):
        run_twoquery(config(delta="1/4"))


def test_linecode_params():
    (record,) = run_linecode(config(action="params"))
    assert (record.num_lines, record.N, record.message_bits) == (20, 320, 6)
    assert (record.query_formula, record.rlcc_formula) == (15, 41)


def test_linecode_clean_decode():
    (record,) = run_linecode(config(action="decode", rho=0.0, trials=50))
    assert record.error_rate == 0
    assert record.bottom_rate == 0
    assert record.queries == 15


def test_linecode_blr():
    records = run_linecode(config(action="blr"))
    assert [r.tables for r in records] == [256, 1920]
    assert all(r.min_rejection.value >= r.distance.value for r in records)


def test_linecode_overwrite():
    (record,) = run_linecode(config(action="overwrite", point="1,2", trials=2000))
    assert abs(record.bottom_rate - record.predicted_bottom.value) <= record.half_width


def test_linecode_eta():
    records = run_linecode(config(action="eta", delta="0.001"))
    assert [r.op for r in records] == ["eta", "eta_rlcc"]
    assert all(0 < r.value <= 1 for r in records)


def test_linecode_rejects_bad_point():
    with pytest.raises(ConfigError):
        run_linecode(config(action="overwrite", point="1,9"))


def test_attack_exact():
    records = run_attack(config(line_decoder="all", point="0,0"))
    assert len(records) == 4
    for record in records:
        assert (record.success.num, record.success.den) == (1, 2)
        assert record.coset_ok
        assert record.erased_fraction.value == 0.25


def test_attack_unknown_decoder():
    with pytest.raises(ConfigError):
        run_attack(config(line_decoder="oracle"))


def test_repeat():
    (record,) = run_repeat(config(delta="1/3", trials=200))
    assert record.base_soundness.value == 0.5
    assert record.soundness.value == 0.25
    assert record.expected.value == 0.25
    assert record.estimate is not None


def test_report_summarizes_written_records(tmp_path):
    path = tmp_path / "params.jsonl"
    write_output(run_linecode(config(action="params")), str(path))
    line = json.loads(path.read_text().splitlines()[0])
    assert line["schema"] == 1
    table = run_report([str(path)])
    assert "linecode" in table


def test_report_rejects_other_schema(tmp_path):
    path = tmp_path / "old.jsonl"
    path.write_text('{"schema": 0, "kind": "eval"}\n')
    with pytest.raises(ConfigError, match="schema"):
        run_report([str(path)])
