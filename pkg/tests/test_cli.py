import json
import subprocess
import sys

from supercurves.cli import main

MATRIX_11 = {
    "rows": [1, 1], "cols": [1, 1],
    "entries": [
        [{"n": 2, "terms": [{"mask": [], "re": 1, "im": 0}]},
         {"n": 2, "terms": [{"mask": [1], "re": 1, "im": 0}]}],
        [{"n": 2, "terms": [{"mask": [2], "re": 1, "im": 0}]},
         {"n": 2, "terms": [{"mask": [], "re": 1, "im": 0}]}],
    ],
}


def run_cli(args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "supercurves.cli", *args],
                          input=stdin, capture_output=True, text=True)
    return proc


def test_ber_subcommand(tmp_path):
    blob = json.dumps({"matrix": MATRIX_11})
    proc = run_cli(["ber"], stdin=blob)
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["ber"]["terms"] == [{"im": 0.0, "mask": [], "re": 1.0},
                                   {"im": 0.0, "mask": [1, 2], "re": -1.0}]


def test_solve_subcommand():
    blob = json.dumps({
        "matrix": {"rows": [1, 1], "cols": [1, 1], "entries": [
            [{"n": 2, "terms": [{"mask": [], "re": 2, "im": 0}]},
             {"n": 2, "terms": [{"mask": [1], "re": 1, "im": 0}]}],
            [{"n": 2, "terms": [{"mask": [2], "re": 1, "im": 0}]},
             {"n": 2, "terms": [{"mask": [], "re": 1, "im": 0}]}],
        ]},
        "rhs": [{"n": 2, "terms": [{"mask": [], "re": 1, "im": 0}]},
                {"n": 2, "terms": []}],
    })
    proc = run_cli(["solve"], stdin=blob)
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["oracle_agreement"] < 1e-9
    x0 = {tuple(t["mask"]): t["re"] for t in out["x"][0]["terms"]}
    assert abs(x0[()] - 0.5) < 1e-12 and abs(x0[(1, 2)] - 0.25) < 1e-12


def test_rr_subcommand():
    proc = run_cli(["rr", "--degL", "3", "--g", "2", "--degN", "0"])
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"even": 2, "odd": 2}


def test_theta_subcommand():
    blob = json.dumps({"genus": 1, "Z_red": [[{"re": 0, "im": 1}]],
                       "z": [{"re": 0.0, "im": 0.0}], "characteristic": "11"})
    proc = run_cli(["theta"], stdin=blob)
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["value"]["terms"] == [] or abs(out["value"]["terms"][0]["re"]) < 1e-12


def test_tau_elliptic_subcommand():
    proc = run_cli(["tau-elliptic", "--tau", "0,2", "--a", "0.31,0.17",
                    "--zeta", "0.12,-0.05"])
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["ber_check_residual"] < 1e-6
    assert out["convention_factor"]["terms"] == [{"im": 0.0, "mask": [], "re": 1.0}]


def test_exit_code_bad_json():
    proc = run_cli(["ber"], stdin="this is not json")
    assert proc.returncode == 2


def test_exit_code_domain_error():
    bad = {"matrix": {"rows": [0, 1], "cols": [0, 1],
                      "entries": [[{"n": 1, "terms": [{"mask": [1], "re": 1, "im": 0}]}]]}}
    proc = run_cli(["ber"], stdin=json.dumps(bad))
    assert proc.returncode == 3


def test_deterministic_output():
    blob = json.dumps({"matrix": MATRIX_11})
    a = run_cli(["ber"], stdin=blob)
    b = run_cli(["ber"], stdin=blob)
    assert a.stdout == b.stdout


def test_main_in_process(capsys):
    rc = main(["rr", "--degL", "1", "--g", "2"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out) == {"even": 0, "odd": 0}


def test_sgr_tau_subcommand():
    M = 4
    window_indices = list(range(-2 * M + 1, 2 * M + 1))
    neg = [d for d in window_indices if d <= 0]
    one = {"n": 2, "terms": [{"mask": [], "re": 1, "im": 0}]}
    zero = {"n": 2, "terms": []}
    frame = [[one if rd == cd else zero for cd in neg] for rd in window_indices]
    blob = json.dumps({"window_M": M, "n": 2, "frame": frame,
                       "flows": {"2": {"n": 2, "terms": [{"mask": [], "re": 0.3, "im": 0}]}}})
    proc = run_cli(["sgr-tau"], stdin=blob)
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["finite"] and out["tau"]["terms"] == [{"im": 0.0, "mask": [], "re": 1.0}]
