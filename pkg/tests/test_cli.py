"""Command line interface, run in-process through main(argv)."""

import json

import numpy as np
import pytest

from minresist.asymptotics import limit_profile_large_V, limit_profile_small_V
from minresist.cli import main
from minresist.medium import GaussianDensity, MixtureDensity
from minresist.profiles import BodyProfile


def _run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    assert code == 0
    return json.loads(out.read_text())


def test_solve_reports_each_kind(tmp_path):
    payload = _run_json(["solve", "--v", "1", "--h", "0.7"], tmp_path)
    assert payload["report"]["kind"] == "trapezium"
    assert payload["report"]["R"] == pytest.approx(1.4532826320172005, rel=1e-10)
    payload = _run_json(["solve", "--v", "1", "--h", "3"], tmp_path)
    assert payload["report"]["kind"] == "isosceles-triangle"
    assert payload["report"]["R"] == pytest.approx(0.7311578127740258, rel=1e-10)
    payload = _run_json(["solve", "--d", "3", "--v", "1", "--h", "1.97"],
                        tmp_path)
    assert payload["report"]["kind"] == "first-kind"
    assert payload["report"]["R"] == pytest.approx(0.827428430326913, rel=1e-10)


def test_solve_profile_survives_round_trip(tmp_path):
    payload = _run_json(["solve", "--v", "1", "--h", "4.5"], tmp_path)
    prof = BodyProfile.from_json(payload["profile"])
    assert prof.kind.value == "triangle-trapezium"
    t = np.linspace(0.0, 1.0, 7)
    assert prof.h_plus + prof.h_minus == pytest.approx(4.5, rel=1e-12)
    assert np.all(np.isfinite(prof.depth("front", t)))


def test_solve_limit_modes(tmp_path):
    payload = _run_json(["solve", "--limit", "small-v", "--d", "3",
                         "--h", "1"], tmp_path)
    _, r_ref = limit_profile_small_V(3, 1.0)
    assert payload["limit"] == "small-v"
    assert payload["R_reduced"] == pytest.approx(r_ref, rel=1e-12)
    payload = _run_json(["solve", "--limit", "large-v", "--d", "3",
                         "--h", "1"], tmp_path)
    _, r_ref = limit_profile_large_V(3, 1.0, nu=1.0)
    assert payload["R_reduced"] == pytest.approx(r_ref, rel=1e-12)
    assert payload["kind"] == "first-kind"


def test_exit_codes():
    assert main(["solve", "--v", "1"]) == 1           # missing --h
    assert main(["solve", "--v", "1", "--h", "-2"]) == 2
    assert main(["solve", "--v", "-1", "--h", "1"]) == 2
    assert main(["sweep", "--v", "1", "--h-grid", "junk"]) == 1
    assert main(["no-such-command"]) == 1


def test_sweep_csv_and_dedupe_warning(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--v-grid", "1:1:2", "--h-grid", "1:5:5",
                 "--out", str(out)])
    assert code == 0
    assert "duplicate grid point" in capsys.readouterr().err
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "V,h,R,R_reduced,kind"
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 5
    r_vals = [float(r[2]) for r in rows]
    assert np.all(np.diff(r_vals) < 0)
    assert all(r[4] in ("trapezium", "isosceles-triangle", "triangle-trapezium",
                        "two-triangles") for r in rows)


def test_regions_csv_planar(tmp_path):
    out = tmp_path / "regions.csv"
    assert main(["regions", "--v-grid", "0.5:1.5:3", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "V,u_plus0,u_star,u_star_plus_u_minus0"
    mid = [float(x) for x in lines[2].split(",")]
    assert mid[0] == 1.0
    assert mid[1] == pytest.approx(1.0691686837459367, rel=1e-9)
    assert mid[2] == pytest.approx(3.542635984279048, rel=1e-9)
    assert mid[3] == pytest.approx(5.503977398122373, rel=1e-9)


def test_regions_csv_rotational(tmp_path):
    out = tmp_path / "regions3.csv"
    assert main(["regions", "--d", "3", "--v-grid", "1:1:1",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "V,h_star"
    V, h_star = (float(x) for x in lines[1].split(","))
    assert (V, h_star) == (1.0, pytest.approx(2.221775781319411, rel=1e-9))


def test_validate_flat_disk(tmp_path):
    payload = _run_json(["validate", "--v", "1", "--samples", "20000",
                         "--seed", "3"], tmp_path)
    assert payload["R_analytic"] == pytest.approx(1.8493204333124584, rel=1e-10)
    assert abs(payload["z_score"]) <= 4.0
    assert payload["n"] == 20000 and payload["seed"] == 3
    assert isinstance(payload["ok"], bool)
    assert payload["z_score"] == pytest.approx(
        (payload["R_mc"] - payload["R_analytic"]) / payload["se"])


def test_plot_renders_deterministic_svg(tmp_path):
    src = tmp_path / "body.json"
    main(["solve", "--v", "1", "--h", "3", "--out", str(src)])
    svg1 = tmp_path / "a.svg"
    svg2 = tmp_path / "b.svg"
    assert main(["plot", str(src), "--out", str(svg1)]) == 0
    assert main(["plot", str(src), "--out", str(svg2)]) == 0
    body = svg1.read_text()
    assert body.startswith("<svg") and body.rstrip().endswith("</svg>")
    assert body == svg2.read_text()


def test_plot_accepts_solver_csv(tmp_path):
    sweep = tmp_path / "sweep.csv"
    main(["sweep", "--v", "1", "--h-grid", "1:4:4", "--out", str(sweep)])
    assert main(["plot", str(sweep)]) == 0
    assert sweep.with_suffix(".svg").exists()
    regions = tmp_path / "regions.csv"
    main(["regions", "--d", "3", "--v-grid", "0.8:1.2:2", "--out", str(regions)])
    assert main(["plot", str(regions)]) == 0
    assert regions.with_suffix(".svg").exists()
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert main(["plot", str(bad)]) == 1


def test_density_file_paths(tmp_path):
    spec = tmp_path / "mix.json"
    mix = MixtureDensity.from_gaussian_terms([(1.0, 1.0), (4.0, 2.0)], 2)
    spec.write_text(json.dumps(mix.to_json()))
    payload = _run_json(["solve", "--density", str(spec), "--v", "1",
                         "--h", "2"], tmp_path)
    assert payload["report"]["d"] == 2
    assert main(["solve", "--density", str(spec), "--d", "3",
                 "--v", "1", "--h", "2"]) == 1

    table = tmp_path / "sigma.csv"
    r = np.linspace(0.0, 12.0, 400)
    rows = "\n".join(f"{ri},{si}" for ri, si in
                     zip(r, GaussianDensity(3).sigma(r)))
    table.write_text("r,sigma\n" + rows + "\n")
    payload = _run_json(["solve", "--density", str(table), "--d", "3",
                         "--v", "1", "--h", "1.97"], tmp_path)
    assert payload["report"]["kind"] == "first-kind"
    assert payload["report"]["R"] == pytest.approx(0.827428430326913, rel=1e-4)

    assert main(["solve", "--density", str(tmp_path / "absent.json"),
                 "--v", "1", "--h", "1"]) == 1
