import io
import subprocess
import sys

import pytest

from newtonlab.cli import emit_report, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def test_predict():
    status, out, _ = call("predict", "p=3", "gX=0", "ordinary=true", "branches=2:1")
    assert status == 0
    assert out == "# predict\nslopes=1/2,1/2 exact=small-conductors genus=1 prank=0\n"


def test_construct_many_point_family():
    status, out, _ = call("construct", "p=3", "d=2", "g=12", "k=1")
    assert status == 0
    assert "slopes=" + ",".join(["0"] * 10 + ["1/2"] * 4 + ["1"] * 10) in out
    assert "exact=small-conductors" in out


def test_construct_single_pole_family_notes_correction():
    status, out, _ = call("construct", "family=T5", "p=3", "g=5")
    assert status == 0
    assert "case=II-corrected branches=1:1,1:1" in out
    assert out.rstrip().splitlines()[-1].startswith("# case II uses conductors")


def test_codim_examples():
    slopes = ",".join(["0"] * 8 + ["1/2"] * 8 + ["1"] * 8)
    status, out, _ = call("codim", f"slopes={slopes}", "g=12")
    assert status == 0
    assert out.splitlines()[1].startswith("omega=6 exact=true unlikely=false")


def test_codim_genus_mismatch_is_input_error():
    status, _, err = call("codim", "slopes=0,1", "g=3")
    assert status == 1 and "genus" in err


def test_zeta_verify():
    status, out, _ = call("zeta-verify", "p=3", "f=x^2")
    assert status == 0
    assert out.splitlines()[1].startswith("verdict=equal measured=1/2,1/2 predicted=1/2,1/2")


def test_oort():
    status, out, _ = call("oort", "p=3", "d=2", "g1=12", "k1=1", "g2=18", "k2=1")
    assert status == 0
    assert out.splitlines()[1].startswith("holds=true g=30 k=2")


def test_sweep_members_and_tsv():
    status, out, _ = call("sweep", "p=3", "d=2", "g=12..14", "--format=tsv")
    assert status == 0
    lines = out.splitlines()
    assert lines[0].split("\t")[:4] == ["source", "p", "d", "g"]
    assert len(lines) == 4


def test_sweep_strata_and_frequency():
    status, out, _ = call("sweep", "p=3", "d=2", "g=100..130", "report=strata")
    assert status == 0 and "g0=" in out.splitlines()[-1]
    status, out, _ = call("sweep", "p=3", "d=2", "g=30..40", "report=frequency", "slopes=0,1/2,1")
    assert status == 0 and "max_abs_dev=" in out


def test_sweep_workers_are_deterministic():
    a = call("sweep", "p=3", "d=2", "g=12..40", "report=strata")
    b = call("sweep", "p=3", "d=2", "g=12..40", "report=strata", "workers=2")
    assert a == b


def test_asymptotics():
    status, out, _ = call("asymptotics", "p=3", "g=10..20")
    assert status == 0
    assert out.splitlines()[-1] == "# min_g_times_gap=-29/28"
    assert "above_minus_3_over_g=false" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["predict", "p=4", "branches=2:1"],
        ["predict", "p=3", "branches=3:1"],
        ["predict", "p=3"],
        ["construct", "p=3", "d=2", "g=12", "k=2"],
        ["construct", "p=3", "d=2", "g=12", "k=1", "bogus=1"],
        ["codim", "slopes=0,1/2"],
        ["zeta-verify", "p=3", "f=sin(x)"],
        ["sweep", "p=3", "g=1..4", "report=nope"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_one(argv):
    status, out, err = call(*argv)
    assert status == 1
    assert err.startswith("newtonlab: ")


def test_internal_failure_exits_two(monkeypatch):
    import newtonlab.zeta as zeta
    from newtonlab.polygon import from_slopes

    monkeypatch.setattr(zeta, "newton_polygon_of_L", lambda L: from_slopes([0, 1]))
    status, out, _ = call("zeta-verify", "p=3", "f=x^2")
    assert status == 2
    assert "verdict=COUNTEREXAMPLE" in out


def test_emit_report_empty_and_formats():
    assert emit_report([], "kv", "sweep") == "# sweep\n"
    assert emit_report([], "tsv", "sweep", columns=["g"]) == "g\n"
    rows = [{"a": 1, "b": "x"}]
    assert emit_report(rows, "kv", "t", notes=["n"]) == "# t\na=1 b=x\n# n\n"
    assert emit_report(rows, "tsv", "t") == "a\tb\n1\tx\n"


def test_predict_slopes_round_trip_through_codim():
    _, out, _ = call("predict", "p=5", "branches=3:1,1:1")
    slopes = out.splitlines()[1].split()[0]
    status, _, _ = call("codim", slopes)
    assert status == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "newtonlab", "predict", "p=3", "branches=2:1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("# predict\nslopes=1/2,1/2")


def test_booher_pries_prediction_says_attainable():
    status, out, _ = call("predict", "p=7", "branches=3:1,3:1")
    assert status == 0
    assert "exact=booher-pries" in out
    assert out.splitlines()[-1] == "# booher-pries: equality is attainable by some cover with this data"
