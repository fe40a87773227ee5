import csv
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from vortex_waves.cli import main
from vortex_waves.scenario import (
    SWEEP_AXES,
    Scenario,
    ScenarioError,
    execute,
    parse_scenario,
    replace_output,
    run,
    serialize_scenario,
    sweep,
    with_value,
)
from vortex_waves import PhysicalParams
from vortex_waves.errors import ConfigurationError
from vortex_waves.vortex import asymptotic_range

MINIMAL = """
[physics]
K = 0.1

[vortex]
q2 = -6

[solver]
model = soliton_ode
t0 = 0
t1 = 10
dt = 0.05
"""

FIGURE = """
[physics]
K = {K}

[vortex]
q2 = {q2}

[solver]
model = soliton_ode
t0 = -2000
t1 = 2000
dt = 0.05
t_initial = 0

[output]
csv = trajectory.csv
stride = 40
"""

FIELD = """
[grid]
n = 1024
length = 800
origin = -400

[physics]
K = 0.05
x0 = -200

[vortex]
q2 = -5
omega_star = 0.5

[solver]
model = {model}
t0 = 0
t1 = 4
dt = 0.1

[output]
csv = field.csv
stride = 10
"""


def write(tmp_path, text, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


class TestParse:
    def test_minimal_document_uses_defaults(self):
        sc = parse_scenario(MINIMAL)
        assert isinstance(sc, Scenario)
        assert sc.params.h == 10.0 and sc.params.g == 9.81
        assert sc.vortex.q1 == 0.0 and sc.vortex.omega_star == 0.0
        assert sc.grid is None
        assert sc.output.csv == "trajectory.csv" and sc.output.stride == 1

    def test_vortex_above_surface(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(MINIMAL.replace("q2 = -6", "q2 = 1"))
        assert any("vortex must satisfy -h < q2 < 0" in v for v in err.value.violations)

    def test_missing_step_suggests_default(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario(MINIMAL.replace("dt = 0.05", ""))
        assert any("dt" in v and "suggested default" in v for v in err.value.violations)

    def test_unknown_key_is_named(self):
        with pytest.raises(ScenarioError, match="viscosity"):
            parse_scenario(MINIMAL + "viscosity = 1e-6\n")

    def test_unknown_section(self):
        with pytest.raises(ScenarioError, match=r"\[forcing\]"):
            parse_scenario(MINIMAL + "[forcing]\namp = 1\n")

    def test_violations_are_aggregated(self):
        text = MINIMAL.replace("q2 = -6", "q2 = 1").replace("dt = 0.05", "") + "spin = 2\n"
        with pytest.raises(ScenarioError) as err:
            parse_scenario(text)
        assert len(err.value.violations) == 3

    @pytest.mark.parametrize("edit, fragment", [
        (("model = soliton_ode", "model = spectral"), "model"),
        (("t1 = 10", "t1 = 10\nt_initial = 50"), "t_initial"),
        (("dt = 0.05", "dt = 0"), "dt"),
        (("K = 0.1", "K = abc"), "K"),
        (("q2 = -6", "q2 = -10"), "q2"),
    ])
    def test_invalid_values(self, edit, fragment):
        with pytest.raises(ScenarioError, match=fragment):
            parse_scenario(MINIMAL.replace(*edit))

    def test_field_model_needs_grid(self):
        with pytest.raises(ScenarioError, match="grid"):
            parse_scenario(MINIMAL.replace("soliton_ode", "kdv_perturbed"))

    def test_field_models_run_forwards(self):
        with pytest.raises(ScenarioError, match="forwards"):
            parse_scenario(FIELD.format(model="kdv_perturbed").replace("t1 = 4", "t1 = -4"))
        assert parse_scenario(MINIMAL.replace("t1 = 10", "t1 = -10")).t1 == -10

    def test_underresolved_grid(self):
        with pytest.raises(ScenarioError, match="grid points"):
            parse_scenario(FIELD.format(model="kdv_unperturbed").replace("n = 1024", "n = 64"))

    def test_malformed_document(self):
        with pytest.raises(ScenarioError, match="malformed"):
            parse_scenario("K = 0.1\n")

    @pytest.mark.parametrize("text", [MINIMAL, FIGURE.format(K=0.05, q2=-9.9),
                                      FIELD.format(model="boussinesq")])
    def test_round_trip(self, text):
        sc = parse_scenario(text)
        again = parse_scenario(serialize_scenario(sc))
        assert again == sc
        assert serialize_scenario(again) == serialize_scenario(sc)


class TestSweepAxes:
    def test_axes_are_scalar_fields(self):
        assert {"q2", "K", "h", "dt", "omega_star", "n"} <= SWEEP_AXES.keys()
        assert "model" not in SWEEP_AXES and "csv" not in SWEEP_AXES

    def test_with_value_revalidates(self):
        sc = parse_scenario(MINIMAL)
        assert with_value(sc, "q2", -9.9).vortex.q2 == -9.9
        assert with_value(sc, "K", 0.05).params.K == 0.05
        with pytest.raises(ScenarioError):
            with_value(sc, "q2", 3.0)

    def test_unknown_axis(self):
        with pytest.raises(ConfigurationError, match="axis"):
            with_value(parse_scenario(MINIMAL), "colour", 1.0)


class TestRun:
    def test_csv_layout(self, tmp_path):
        run(parse_scenario(MINIMAL), tmp_path)
        raw = (tmp_path / "trajectory.csv").read_bytes()
        assert b"\r" not in raw
        header, data = read_csv(tmp_path / "trajectory.csv")
        assert header == ["t", "q1", "q2", "conserved"]
        assert data.shape == (201, 4)
        assert data[0, 0] == 0.0 and data[-1, 0] == pytest.approx(10.0)

    def test_field_columns(self, tmp_path):
        run(parse_scenario(FIELD.format(model="kdv_perturbed")), tmp_path)
        header, data = read_csv(tmp_path / "field.csv")
        assert header == ["t", "q1", "q2", "conserved", "mass_u", "mass_eta", "momentum",
                          "max_u"]
        assert data[:, 0] == pytest.approx([0.0, 1.0, 2.0, 3.0, 4.0])

    @pytest.mark.parametrize("text", [MINIMAL, FIELD.format(model="boussinesq")])
    def test_deterministic(self, tmp_path, text):
        sc = parse_scenario(text)
        a, b = tmp_path / "a", tmp_path / "b"
        run(sc, a)
        run(sc, b)
        name = sc.output.csv
        assert (a / name).read_bytes() == (b / name).read_bytes()

    @pytest.mark.parametrize("text", [MINIMAL, FIELD.format(model="kdv_unperturbed")])
    def test_empty_span(self, tmp_path, text):
        sc = parse_scenario(text.replace("t1 = 10", "t1 = 0").replace("t1 = 4", "t1 = 0"))
        run(sc, tmp_path)
        _, data = read_csv(tmp_path / sc.output.csv)
        assert data.shape[0] == 1

    def test_stride_keeps_last_sample(self):
        sc = replace_output(parse_scenario(MINIMAL), stride=7)
        res = execute(sc)
        assert res.times[-1] == pytest.approx(10.0)
        assert np.diff(res.times)[:-1] == pytest.approx(0.35)

    def test_conserved_column_is_constant(self):
        res = execute(parse_scenario(FIGURE.format(K=0.1, q2=-6)))
        assert np.ptp(res.columns["conserved"]) < 1e-8 * 10

    @pytest.mark.parametrize("K", [0.1, 0.05])
    def test_figure_excursions(self, K):
        expected = asymptotic_range(PhysicalParams(h=10.0, K=K))
        for q2 in (-0.1, -6.0, -9.9):
            res = execute(parse_scenario(FIGURE.format(K=K, q2=q2)))
            assert res.summary()["q1_excursion"] == pytest.approx(expected, rel=0.01)
            assert np.all(np.diff(res.q1) >= 0) and res.q1[-1] > res.q1[0]
        assert expected == pytest.approx(44.286 if K == 0.1 else 14.2667, abs=1e-3)

    def test_svg_plots(self, tmp_path):
        sc = replace_output(parse_scenario(MINIMAL), plots="traj")
        res = run(sc, tmp_path)
        names = sorted(p.name for p in res.plot_paths)
        assert names == ["traj_q1.svg", "traj_q1_q2.svg", "traj_q2.svg"]
        for p in res.plot_paths:
            root = ET.parse(p).getroot()
            assert root.tag == "{http://www.w3.org/2000/svg}svg"
            assert root.get("version") == "1.1"


class TestSweep:
    def test_depth_layering(self, tmp_path):
        base = parse_scenario(FIGURE.format(K=0.1, q2=-6))
        out = sweep(base, "q2", [-0.1, -6, -9.9], tmp_path)
        assert all(err is None for _, _, err in out)
        header, _ = read_csv_text(tmp_path / "summary.csv")
        assert header == ["q2", "q1_excursion", "q2_extremum", "q2_excursion", "status"]
        exc = {v: r.summary()["q2_excursion"] for v, r, _ in out}
        # larger q2 + h means the vortex rides higher and moves further
        assert exc[-0.1] > exc[-6] > exc[-9.9] > 0
        for v in (-0.1, -6, -9.9):
            assert (tmp_path / f"q2={v:g}" / "trajectory.csv").exists()

    def test_single_extremum(self, tmp_path):
        for _, res, _ in sweep(parse_scenario(FIGURE.format(K=0.05, q2=-6)), "q2",
                               [-0.1, -6, -9.9], tmp_path):
            dq2 = np.diff(res.q2)
            dq2 = dq2[np.abs(dq2) > 1e-12]
            assert np.count_nonzero(np.diff(np.sign(dq2))) == 1

    def test_wavenumber_ordering(self, tmp_path):
        out = sweep(parse_scenario(FIGURE.format(K=0.1, q2=-6)), "K", [0.05, 0.1], tmp_path)
        exc = [r.summary()["q1_excursion"] for _, r, _ in out]
        assert exc[0] < exc[1]
        assert exc == pytest.approx([asymptotic_range(PhysicalParams(K=K)) for K in (0.05, 0.1)],
                                    rel=0.01)

    def test_single_value_matches_run(self, tmp_path):
        sc = parse_scenario(MINIMAL)
        sweep(sc, "q2", [-6.0], tmp_path / "sweep")
        run(sc, tmp_path / "run")
        assert ((tmp_path / "sweep" / "q2=-6" / "trajectory.csv").read_bytes()
                == (tmp_path / "run" / "trajectory.csv").read_bytes())

    def test_parallel_matches_serial(self, tmp_path):
        sc = parse_scenario(MINIMAL)
        sweep(sc, "q2", [-1, -6], tmp_path / "serial")
        sweep(sc, "q2", [-1, -6], tmp_path / "parallel", workers=2)
        for name in ("summary.csv", "q2=-1/trajectory.csv", "q2=-6/trajectory.csv"):
            assert ((tmp_path / "serial" / name).read_bytes()
                    == (tmp_path / "parallel" / name).read_bytes())

    def test_failed_entry_is_reported(self, tmp_path):
        # the vortex escapes through the surface when it starts ahead of the crest
        base = parse_scenario(FIGURE.format(K=0.1, q2=-0.1).replace("t_initial = 0\n", ""))
        out = sweep(base, "q2", [-0.1], tmp_path)
        assert out[0][1] is None and "q2" in out[0][2]
        _, rows = read_csv_text(tmp_path / "summary.csv")
        assert rows[0][-1] != "ok"


def read_csv_text(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestCli:
    def test_run_success(self, tmp_path, capsys):
        path = write(tmp_path, MINIMAL)
        assert main(["run", str(path), "--out-dir", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "trajectory.csv").exists()
        assert "wrote" in capsys.readouterr().out

    def test_run_invalid(self, tmp_path, capsys):
        path = write(tmp_path, MINIMAL.replace("q2 = -6", "q2 = 1").replace("dt = 0.05", ""))
        assert main(["run", str(path)]) == 1
        err = capsys.readouterr().err
        assert "vortex must satisfy -h < q2 < 0" in err
        assert "suggested default" in err

    def test_run_missing_file(self, tmp_path):
        assert main(["run", str(tmp_path / "absent.ini")]) == 1

    def test_run_abort(self, tmp_path, capsys):
        text = FIGURE.format(K=0.1, q2=-0.1).replace("t_initial = 0\n", "")
        path = write(tmp_path, text)
        assert main(["run", str(path), "--out-dir", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert err.startswith("abort:") and "q2" in err

    def test_verify_suite(self, capsys):
        assert main(["verify", "scaling"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "criterion,measured,bound,status"
        assert all(line.endswith(",PASS") for line in lines[1:])

    def test_verify_failure(self, monkeypatch, capsys):
        from vortex_waves import verification

        failing = verification.CheckResult("forced", 1.0, 0.5, False, "")
        monkeypatch.setattr(verification, "run_suite", lambda name: [failing])
        assert main(["verify", "dno"]) == 3
        row = capsys.readouterr().out.splitlines()[1].split(",")
        assert row[0] == "forced" and row[-1] == "FAIL"
        assert float(row[1]) == 1.0 and float(row[2]) == 0.5

    def test_unknown_suite(self):
        assert main(["verify", "everything"]) == 1

    def test_sweep(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        code = main(["sweep", str(path), "--axis", "q2", "--values", "-1,-6",
                     "--out-dir", str(tmp_path / "sw")])
        assert code == 0
        assert (tmp_path / "sw" / "summary.csv").exists()

    @pytest.mark.parametrize("args", [
        ["--axis", "colour", "--values", "1"],
        ["--axis", "q2", "--values", "a,b"],
        ["--axis", "q2", "--values", "-1", "--workers", "0"],
    ])
    def test_sweep_bad_arguments(self, tmp_path, args):
        path = write(tmp_path, MINIMAL)
        assert main(["sweep", str(path), *args, "--out-dir", str(tmp_path)]) == 1

    def test_seedless_flag(self, tmp_path):
        path = write(tmp_path, MINIMAL)
        assert main(["--seedless", "run", str(path), "--out-dir", str(tmp_path)]) == 0
        assert main(["--seedless=3", "run", str(path)]) == 1

    def test_usage_error(self):
        assert main(["launch"]) == 1

    def test_help(self, capsys):
        assert main(["--help"]) == 0
        out = capsys.readouterr().out
        for cmd in ("run", "verify", "sweep"):
            assert cmd in out


DEMOS = sorted((Path(__file__).parents[1] / "demos").glob("*.ini"))


@pytest.mark.parametrize("path", DEMOS, ids=lambda p: p.name)
def test_demo_scenarios_parse(path):
    sc = parse_scenario(path.read_text())
    assert parse_scenario(serialize_scenario(sc)) == sc
