import io
import json

import pytest

from gbgw.cli import RunConfig, bench, main, run


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    import gbgw.cli as cli

    args = cli.build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k in ("out", "figure")})
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_tau_json():
    code, out, _ = _run(["tau", "--order", "3", "--nu", "symbolic"])
    obj = json.loads(out)
    assert code == 0 and obj["nu"] == "symbolic" and obj["orders"] == 3
    assert obj["series"][1] == [{"coeff": "1/16", "nu": 0, "t": {"1": 1}}, {"coeff": "-1/4", "nu": 1, "t": {"1": 1}}]


def test_tau_csv():
    code, out, _ = _run(["tau", "-k", "2", "--nu", "25/4", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[-1] == "k,2,3/4,0,t1^2"


def test_schur_level_two():
    code, out, _ = _run(["schur", "--level", "2"])
    tau = json.loads(out)["tau"]
    assert {"coeff": "3/8", "nu": 0, "t": {"3": 1}} in tau
    assert {"coeff": "-1/8", "nu": 0, "t": {"1": 3}} in tau


def test_free_energy_forms():
    code, out, _ = _run(["free-energy", "-g", "1", "--form", "moments"])
    assert code == 0 and json.loads(out)["log"] == [{"log_coeff": "-1/8", "S_power": 0}]
    code, out, _ = _run(["free-energy", "-g", "2", "--form", "bdecomp"])
    assert json.loads(out)["parts"]["B2"] == [{"coeff": "1/128", "nu": 0, "t": {"3": 1}}]
    code, out, _ = _run(["free-energy", "-g", "0", "--format", "csv"])
    assert code == 0 and out.startswith("grade,index")


def test_correlator_outputs():
    code, out, _ = _run(["correlator", "--g", "1", "--n", "1", "--coords", "z"])
    assert code == 0 and json.loads(out)["numerator"] == "z1 - 1"
    code, out, _ = _run(["correlator", "-g", "0", "--n", "2"])
    assert set(json.loads(out)["terms"]) == {"-", "1,2"}


@pytest.mark.parametrize("argv", [
    ["tau", "--order", "-1"],
    ["tau", "--nu", "1/0"],
    ["tau", "--nu", "abc"],
    ["schur", "--level", "2", "--format", "csv"],
    ["correlator", "--g", "0"],
    ["free-energy", "-g", "1", "--form", "bdecomp"],
])
def test_usage_errors(argv):
    code, out, err = _run(argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2


def test_verify_exit_codes(monkeypatch):
    code, out, _ = _run(["verify", "--suite", "schur"])
    assert code == 0 and json.loads(out)["ok"]
    import gbgw.verify as verify

    monkeypatch.setitem(verify.RUNNERS, "schur", lambda: {"suite": "schur", "ok": False, "failed": ["x"]})
    code, _, _ = _run(["verify", "--suite", "schur"])
    assert code == 1


def test_determinism():
    assert _run(["tau", "-k", "6"])[1] == _run(["tau", "-k", "6"])[1]


def test_out_file(tmp_path):
    path = tmp_path / "tau.json"
    code, out, _ = _run(["tau", "-k", "1", "--out", str(path)])
    assert code == 0 and out == "" and json.loads(path.read_text())["orders"] == 1


def test_bench(tmp_path):
    from gbgw.verify import suite_cutjoin

    report = bench(10)
    assert [r["terms"] for r in report["rows"]] == suite_cutjoin(10)["terms"][1:]
    assert [r["terms"] for r in report["rows"]][:4] == [1, 1, 2, 2]
    one = bench(1)
    assert one["rows"][0]["terms"] == 1 and one["rows"][0]["seconds"] < 1
    fig = tmp_path / "bench.png"
    bench(4, str(fig))
    assert fig.stat().st_size > 0
