import math

import numpy as np
import pytest

from seqsteer import sweep
from seqsteer.measurement import format_set, parse_set, platonic_set
from seqsteer.sweep import (
    SweepRow,
    SweepSpec,
    find_violation_window,
    format_csv,
    parse_csv,
    read_csv,
    run_fixed_b_sweep,
    run_symmetric_sweep,
)

from oracles import closed_forms, window_roots


def small_spec(**kw):
    base = dict(mode="symmetric", n_list=[3], points=11)
    base.update(kw)
    return SweepSpec(**base)


@pytest.mark.parametrize("kw", [
    dict(eta_start=0.5, eta_end=0.5),
    dict(eta_start=-0.1),
    dict(eta_end=1.2),
    dict(points=1),
    dict(points=100_001),
    dict(mode="diagonal"),
    dict(n_list=[]),
    dict(n_list=[5]),
    dict(eta_b_fixed=2.0),
])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        small_spec(**kw)


def test_symmetric_sweep_rows():
    rows = run_symmetric_sweep(small_spec(n_list=[3, 6], points=11))
    assert len(rows) == 22
    assert [r.n for r in rows] == [3] * 11 + [6] * 11
    assert [r.eta_a for r in rows[:11]] == list(np.linspace(0, 1, 11))
    last = rows[10]
    assert last.eta_a == last.eta_b == 1.0
    assert abs(last.s11 - 1) <= 1e-12 and abs(last.s22 - 1 / 9) <= 1e-12
    assert last.violations == "1000"
    # unmeasured first round: only the second-round pair sees the singlet
    first = rows[0]
    assert first.values()[:3] == (0.0, 0.0, 0.0)
    assert abs(first.s22 - 1) <= 1e-12
    assert first.violations == "0001"


def test_symmetric_sweep_window_row():
    (row,) = run_symmetric_sweep(small_spec(eta_start=0.766, eta_end=0.767, points=2))[:1]
    assert row.violations == "1111"


def test_fixed_b_sweep():
    rows = run_fixed_b_sweep(small_spec(mode="fixed_b", eta_b_fixed=0.766, points=101))
    assert all(r.eta_b == 0.766 for r in rows)
    assert rows[-1].eta_a == 1.0 and abs(rows[-1].s11 - 0.766) <= 1e-12
    assert rows[0].s11 == rows[0].s12 == 0.0
    assert max(abs(r.s11 - r.s12) for r in rows) <= 0.005
    for r in rows:
        np.testing.assert_allclose(r.values(), closed_forms(r.eta_a, 0.766), atol=1e-9)


def test_sweep_mode_mismatch():
    with pytest.raises(ValueError):
        run_fixed_b_sweep(small_spec())
    with pytest.raises(ValueError):
        run_symmetric_sweep(small_spec(mode="fixed_b"))


def test_violation_flags_consistent():
    rows = run_symmetric_sweep(small_spec(n_list=[2, 3, 10], points=41))
    for r in rows:
        assert r.violations == "".join("1" if s > r.c_n else "0" for s in r.values())


def test_csv_round_trip(tmp_path):
    rows = run_symmetric_sweep(small_spec(n_list=[3, 10], points=17))
    path = tmp_path / "out.csv"
    sweep.write_csv(rows, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode("utf-8").splitlines()[0] == "eta_a,eta_b,n,s11,s12,s21,s22,c_n,violations"
    back = read_csv(path)
    assert len(back) == len(rows)
    for a, b in zip(rows, back):
        assert a.n == b.n and a.violations == b.violations
        for name in ("eta_a", "eta_b", "s11", "s12", "s21", "s22", "c_n"):
            assert abs(getattr(a, name) - getattr(b, name)) <= 1e-12


def test_csv_twelve_significant_digits():
    row = SweepRow(1 / 3, 0.5, 3, 1 / 7, 0.0, 1.0, 2 / 3, 1 / math.sqrt(3))
    line = format_csv([row]).splitlines()[1]
    assert line == "0.333333333333,0.5,3,0.142857142857,0,1,0.666666666667,0.57735026919,0011"


def test_parse_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


def test_write_csv_reports_path(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(sweep.SweepIOError, match="missing"):
        run_symmetric_sweep(small_spec(output_path=str(bad)))


@pytest.mark.parametrize("n", [3, 4, 6, 10])
def test_window_matches_oracle_roots(n):
    low, high = window_roots(platonic_set_bound(n))
    win = find_violation_window(n, 1e-8)
    assert win is not None
    assert abs(win[0] - low) <= 1e-8 and abs(win[1] - high) <= 1e-8


def platonic_set_bound(n):
    from seqsteer.steering import lhs_bound
    return lhs_bound(platonic_set(n))


def test_window_examples():
    w3 = find_violation_window(3, 1e-6)
    assert abs(w3[0] - 0.7599) <= 1e-4 and abs(w3[1] - 0.7686) <= 1e-4
    w6 = find_violation_window(6, 1e-6)
    assert abs(w6[0] - 0.7344) <= 1e-4 and abs(w6[1] - 0.7988) <= 1e-4


def test_window_square_set_is_empty():
    assert find_violation_window(2, 1e-6) is None
    # no grid point of the n=2 pipeline has all four pairs above C2
    for eta in np.linspace(0, 1, 1001):
        r = sweep.scenario(eta, eta, 2)
        assert min(r.values()) <= r.c_n


def test_window_without_sign_flip_is_empty():
    assert find_violation_window(3, 1e-6, corr_sign=1) is None


def test_window_grid_refinement_stable():
    for n in (3, 6):
        coarse = find_violation_window(n, 1e-7, points=201)
        fine = find_violation_window(n, 1e-7, points=401)
        spacing = 1 / 400
        assert abs(coarse[0] - fine[0]) < spacing and abs(coarse[1] - fine[1]) < spacing


def test_window_rejects_tiny_tol():
    with pytest.raises(ValueError):
        find_violation_window(3, 1e-11)


# command line

def test_cli_symmetric_row_count(tmp_path):
    out = tmp_path / "fig5.csv"
    assert sweep.main(["--mode", "symmetric", "--n", "3", "--points", "101", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 102


def test_cli_fixed_b(tmp_path):
    out = tmp_path / "fig6.csv"
    assert sweep.main(["--mode", "fixed-b", "--eta-b", "0.766", "--n", "3", "--points", "21",
                       "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 21 and all(r.eta_b == 0.766 for r in rows)


def test_cli_default_n_covers_all_sets(capsys):
    assert sweep.main(["--points", "3"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert sorted({r.n for r in rows}) == [2, 3, 4, 6, 10]


def test_cli_window(capsys):
    assert sweep.main(["--window", "--n", "3", "--tol", "1e-6"]) == 0
    out = capsys.readouterr().out
    assert "[0.759836, 0.76858" in out


def test_cli_window_empty(capsys):
    assert sweep.main(["--window", "--n", "2"]) == 0
    assert "no simultaneous violation" in capsys.readouterr().out


def test_cli_dump_set(capsys):
    assert sweep.main(["--dump-set", "--n", "10"]) == 0
    assert parse_set(capsys.readouterr().out) == platonic_set(10)


def test_cli_set_file(tmp_path, capsys):
    path = tmp_path / "set.txt"
    path.write_text(format_set(platonic_set(4)))
    assert sweep.main(["--set-file", str(path), "--points", "5"]) == 0
    captured = capsys.readouterr()
    assert "warning" not in captured.err
    rows = parse_csv(captured.out)
    assert [r.n for r in rows] == [4] * 5


def test_cli_set_file_warns_on_non_design(tmp_path, capsys):
    path = tmp_path / "plane.txt"
    path.write_text("1 0 0\n0 1 0\n")
    assert sweep.main(["--set-file", str(path), "--points", "3"]) == 0
    assert "2-design" in capsys.readouterr().err


def test_cli_no_corr_sign(capsys):
    assert sweep.main(["--no-corr-sign", "--n", "3", "--points", "2"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert rows[-1].s11 == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("argv", [
    ["--n", "5"],
    ["--mode", "both"],
    ["--points", "1"],
    ["--eta-start", "0.8", "--eta-end", "0.2"],
    ["--window", "--tol", "1e-12"],
    ["--bogus"],
])
def test_cli_argument_errors(argv, capsys):
    assert sweep.main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_cli_io_errors(tmp_path, capsys):
    assert sweep.main(["--n", "3", "--points", "2", "--out", str(tmp_path / "no" / "x.csv")]) == 2
    assert str(tmp_path / "no") in capsys.readouterr().err
    assert sweep.main(["--set-file", str(tmp_path / "absent.txt")]) == 2


def test_cli_bad_set_file_is_argument_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n")
    assert sweep.main(["--set-file", str(path)]) == 1
