"""Command-line interface: subcommands, exit codes, determinism."""

import json

import pytest

from cavityheat.cli import main

BAD_TOPOLOGY_SURFACE = """\
schema 1
name fake-genus
components 1
genera 1
chart
  domain u 0 pi
  domain v 0 2*pi
  periodic v
  x sin(u)*cos(v)
  y sin(u)*sin(v)
  z cos(u)
  normal outward
end
"""


def run(tmp_path, *argv):
    return main([str(a) for a in argv] + ["--out", str(tmp_path)])


class TestCoeffs:
    def test_sphere_report(self, tmp_path):
        assert run(tmp_path, "coeffs", "--surface", "sphere", "--radius", 1) == 0
        doc = json.loads((tmp_path / "coeffs.json").read_text())
        assert doc["em"]["values"][3] == pytest.approx(0.625, rel=1e-10)
        assert doc["em"]["values"][1] == 0.0
        assert all(doc["consistency"].values())
        assert doc["gauss_bonnet"]["ok"]
        assert doc["mode_count"]["count"] == pytest.approx(0.25)
        assert "flag" in doc["a3_local_kappa_variant"]
        assert doc["manifest"]["tool"]["name"] == "cavityheat"

    def test_torus_report(self, tmp_path):
        assert run(tmp_path, "coeffs", "--surface", "torus",
                   "--quad-order", 16) == 0
        doc = json.loads((tmp_path / "coeffs.json").read_text())
        assert doc["surface"]["genera"] == [1]
        assert doc["gauss_bonnet"]["ok"]

    def test_every_value_carries_error(self, tmp_path):
        run(tmp_path, "coeffs", "--surface", "sphere")
        doc = json.loads((tmp_path / "coeffs.json").read_text())
        assert set(doc["em"]) >= {"values", "errors"}
        for slot in doc["moments"].values():
            assert set(slot) == {"value", "error"}

    def test_topology_mismatch_exits_2(self, tmp_path):
        surf = tmp_path / "bad.surf"
        surf.write_text(BAD_TOPOLOGY_SURFACE)
        code = run(tmp_path, "coeffs", "--surface", f"file:{surf}",
                   "--quad-order", 16)
        assert code == 2

    def test_determinism_modulo_timestamp(self, tmp_path):
        argv = ["coeffs", "--surface", "ellipsoid", "--quad-order", "16",
                "--out", str(tmp_path)]
        docs = []
        for _ in range(2):
            assert main(argv) == 0
            doc = json.loads((tmp_path / "coeffs.json").read_text())
            doc["manifest"].pop("timestamp_utc")
            doc["manifest"].pop("wall_time_s")
            docs.append(json.dumps(doc, sort_keys=True))
        assert docs[0] == docs[1]


class TestUsageErrors:
    def test_unknown_subcommand(self, tmp_path, capsys):
        assert main(["frobnicate"]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_required_flag(self, capsys):
        assert main(["trace"]) == 1

    def test_unknown_surface(self, tmp_path, capsys):
        assert run(tmp_path, "coeffs", "--surface", "cube") == 1


class TestPipeline:
    def test_modes_trace_fit_roundtrip(self, tmp_path):
        assert run(tmp_path, "modes", "--p", "em", "--omega-max", 40) == 0
        modes_csv = tmp_path / "modes_em.csv"
        assert modes_csv.exists()
        assert (tmp_path / "modes_em.csv.meta.json").exists()

        assert run(tmp_path, "trace", "--modes", modes_csv,
                   "--t-lo", 0.015, "--t-hi", 0.09, "--t-points", 40) == 0
        assert run(tmp_path, "fit", "--trace", tmp_path / "trace.csv") == 0
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert fit["a_n"]["a3"] == pytest.approx(0.625, abs=0.02)
        assert fit["a_n"]["a0"] == pytest.approx(0.18806, rel=2e-3)

    def test_scalar_modes(self, tmp_path):
        assert run(tmp_path, "modes", "--p", "0", "--omega-max", 12) == 0
        doc = json.loads((tmp_path / "modes_0.manifest.json").read_text())
        assert doc["modes"]["families"] == ["DIRICHLET"]

    def test_casimir_scan(self, tmp_path):
        assert run(tmp_path, "modes", "--p", "em", "--omega-max", 60) == 0
        assert run(tmp_path, "coeffs", "--surface", "sphere") == 0
        code = run(tmp_path, "casimir", "--modes", tmp_path / "modes_em.csv",
                   "--coeffs", tmp_path / "coeffs.json",
                   "--regulator", "heat")
        assert code == 0
        doc = json.loads((tmp_path / "casimir.json").read_text())
        assert doc["scan"]["finite"] is True
        assert doc["prediction"]["gamma^-1/2"] == 0.0
        assert (tmp_path / "scan.csv").exists()

    def test_verify_passes(self, tmp_path):
        assert run(tmp_path, "verify", "--seed", 7, "--points", 2,
                   "--quad-order", 24) == 0
        doc = json.loads((tmp_path / "verify.json").read_text())
        assert doc["failures"] == []
        assert all(doc["report"]["exact_relations"].values())
