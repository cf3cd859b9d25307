import csv
import io
import json
import os

import pytest

from rffso.cli import main
from rffso.settings import ConfigError, Settings, parse_settings

BASIC = """\
[link]
protocol = AF
hardware = aggregate
kappa1 = 0.3
kappa2 = 0.3

[fso]
detection = imdd

[sweep]
x_axis = snr_db
start = 0
stop = 40
step = 1
metrics = op, ec
methods = analytic
"""


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sweep_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", _write(tmp_path, BASIC), "-o", str(out)]) == 0
    rows = _read_csv(out / "curve.csv")
    assert len(rows) == 42
    assert rows[0] == ["x", "analytic_op", "analytic_ec"]
    assert [float(r[0]) for r in rows[1:]] == list(range(41))
    meta = json.loads((out / "meta.json").read_text())
    assert meta["series"][0]["settings"]["kappa1"] == 0.3
    assert meta["series"][0]["derived"]["delta"] == pytest.approx(0.1881)
    notes = (out / "notes.md").read_text()
    assert "alpha = 4.2" in notes and "kappa1" not in notes


def test_sweep_reproducible_with_mc(tmp_path):
    text = BASIC.replace("stop = 40", "stop = 20").replace("step = 1", "step = 10").replace(
        "methods = analytic", "methods = analytic, mc") + "\n[mc]\nseed = 99\nsamples = 20000\n"
    cfg = _write(tmp_path, text)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", cfg, "-o", str(a)]) == 0
    assert main(["sweep", cfg, "-o", str(b)]) == 0
    assert (a / "curve.csv").read_bytes() == (b / "curve.csv").read_bytes()
    assert (a / "meta.json").read_bytes() == (b / "meta.json").read_bytes()
    c = tmp_path / "c"
    assert main(["sweep", cfg, "-o", str(c), "--seed", "100"]) == 0
    assert (a / "curve.csv").read_bytes() != (c / "curve.csv").read_bytes()


def test_bad_value_reports_location_and_writes_nothing(tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["sweep", _write(tmp_path, BASIC.replace("kappa2 = 0.3", "kappa2 = abc")), "-o", str(out)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "line 5" in err and "kappa2" in err
    assert not out.exists()


@pytest.mark.parametrize("text,frag", [
    ("[link]\nfoo = 1\n", "unknown key"),
    ("[bogus]\nx = 1\n", "unknown section"),
    ("[fso]\nr = 3\n", "r must be 1 or 2"),
    ("[link]\nrho_m = 1.5\n", "rho_m"),
    ("[sweep]\nstep = 0\n", "step"),
    ("[sweep]\nmetrics = op, ber\n", "metrics"),
])
def test_config_errors(text, frag):
    with pytest.raises(ConfigError, match=frag):
        parse_settings(text)


def test_r_alias_and_defaults():
    s, explicit = parse_settings("[fso]\nr = 1\n")
    assert s.detection == "heterodyne" and s.r == 1 and explicit == {"detection"}
    assert parse_settings("")[0] == Settings()


def test_unsupported_combination_exit_code(tmp_path):
    text = "[link]\nprotocol = DF\nhardware = hpa\n[sweep]\nstop = 10\nstep = 5\n"
    out = tmp_path / "out"
    assert main(["sweep", _write(tmp_path, text), "-o", str(out)]) == 3
    assert not out.exists()


def test_existing_outputs_untouched_on_failure(tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", _write(tmp_path, BASIC), "-o", str(out)]) == 0
    before = (out / "curve.csv").read_bytes()
    assert main(["sweep", _write(tmp_path, BASIC + "\n[link]\n", "dup.ini"), "-o", str(out)]) == 1
    assert (out / "curve.csv").read_bytes() == before


def test_validate_command(tmp_path, capsys):
    text = "[link]\nhardware = ideal\n[sweep]\nsnr_db = 10\n[mc]\nsamples = 100000\n"
    rc = main(["validate", _write(tmp_path, text)])
    out = capsys.readouterr().out
    assert rc == 0, out
    assert "PASS" in out and "FAIL" not in out


def test_sweep_validate_flag(tmp_path):
    text = BASIC.replace("stop = 40", "stop = 20").replace("step = 1", "step = 10") + "\n[mc]\nsamples = 50000\n"
    out = tmp_path / "v"
    assert main(["sweep", _write(tmp_path, text), "-o", str(out), "--validate"]) == 0
    meta = json.loads((out / "meta.json").read_text())
    assert meta["validation"] and all(c["status"] != "fail" for c in meta["validation"])
    assert "mc_op" in _read_csv(out / "curve.csv")[0]


def test_figure_preset(tmp_path):
    out = tmp_path / "fig5"
    assert main(["figure", "5", "-o", str(out)]) == 0
    rows = _read_csv(out / "curve.csv")
    assert len(rows) == 1 + 45
    assert rows[0] == ["x", "AF_ideal_analytic_op", "AF_agg_analytic_op", "DF_ideal_analytic_op", "DF_agg_analytic_op"]
    assert "IM/DD" in (out / "notes.md").read_text()


def test_help_lists_keys(capsys):
    with pytest.raises(SystemExit):
        main(["sweep", "--help"])
    text = capsys.readouterr().out
    assert "sigma_atten" in text and "exit codes" in text
