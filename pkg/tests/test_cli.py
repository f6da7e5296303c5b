import json

from locus.main import EXIT_OK, EXIT_USAGE, run


def test_linecode_params_prints_one_record(capsys):
    assert run(["linecode", "params"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["kind"] == "linecode"
    assert record["query_formula"] == 15


def test_flags_override_defaults(capsys):
    assert run(["linecode", "params", "--r2", "3", "--no-reuse"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["reuse"] is False
    assert record["rlcc_formula"] == 3 * 2 + 17 * 3 + 2


def test_transformation_failure_is_a_usage_error(capsys):
    assert run(["twoquery", "--delta", "1/4"]) == EXIT_USAGE
    assert "TransformationImpossible" in capsys.readouterr().err


def test_unknown_command():
    assert run(["decode-everything"]) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "linecode" in capsys.readouterr().out


def test_missing_config_file(tmp_path, capsys):
    assert run(["fool", "--config", str(tmp_path / "absent.cfg")]) == EXIT_USAGE
    assert "configuration error" in capsys.readouterr().err


def test_config_file_and_report(tmp_path, capsys):
    cfg = tmp_path / "params.cfg"
    cfg.write_text("action = params\nt = 1\nn = 1\nd = 0\n")
    out = tmp_path / "params.jsonl"
    assert run(["linecode", "params", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    record = json.loads(out.read_text())
    assert (record["t"], record["N"]) == (1, 2)

    assert run(["report", str(out)]) == EXIT_OK
    assert "linecode" in capsys.readouterr().out


def test_same_seed_gives_identical_reports(capsys):
    argv = ["repeat", "--delta", "1/3", "--repetitions", "2", "--trials", "300", "--seed", "5"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["estimate"] is not None


def test_linecode_help_describes_rounds(capsys):
    assert run(["linecode", "--help"]) == EXIT_OK
    out = " ".join(capsys.readouterr().out.split())
    assert "rounds on the decoded line's block" in out
    assert "the final read instead of reusing" in out
