import json

import pytest

from pyviz.render import PlotSpec, SchemaError, curve_points, plot_curve, plot_homotopy, render


def spec(inputs, kind, output, **kw):
    return PlotSpec(inputs=[str(p) for p in inputs], kind=kind, output=str(output), **kw)


class TestCurve:
    def test_lift_document(self, exports, tmp_path):
        out = tmp_path / "sigma.png"
        plot_curve(spec([exports["sigma"]], "curve", out))
        assert out.stat().st_size > 0

    def test_overlaid_curves(self, exports, tmp_path):
        out = tmp_path / "family.png"
        plot_curve(spec([exports["kappa"], exports["kappa2"], exports["kappa_inv"]], "curve", out))
        assert out.stat().st_size > 0

    def test_projected_document(self, exports, tmp_path):
        out = tmp_path / "varial.png"
        plot_curve(spec([exports["varial"]], "curve", out))
        assert out.stat().st_size > 0

    def test_sign_convention(self, exports):
        doc = json.loads(exports["sigma"].read_text())
        pts = curve_points(doc)
        q_end = doc["samples"][-1]["q"]
        assert pts[-1][0] == q_end[0]
        assert pts[-1][1] == -q_end[2]
        assert pts[-1][2] == -q_end[3]

    def test_empty_samples_is_schema_error(self, tmp_path):
        bad = tmp_path / "empty.json"
        bad.write_text(json.dumps({"trick": "x", "samples": []}))
        with pytest.raises(SchemaError):
            plot_curve(spec([bad], "curve", tmp_path / "x.png"))

    def test_unrelated_document_is_schema_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"foo": 1}))
        with pytest.raises(SchemaError):
            plot_curve(spec([bad], "curve", tmp_path / "x.png"))


class TestHomotopySweep:
    def test_contract_sweep(self, exports, tmp_path):
        out = tmp_path / "contract.png"
        plot_homotopy(spec([exports["contract"]], "homotopy-sweep", out))
        assert out.stat().st_size > 0

    def test_single_slice_degenerates_to_curve(self, exports, tmp_path):
        doc = json.loads(exports["kickheel"].read_text())
        t_count = len(doc["t_grid"])
        single = {
            "name": "slice",
            "s_grid": [0.0],
            "t_grid": doc["t_grid"],
            "quat": doc["quat"][:t_count],
        }
        path = tmp_path / "single.json"
        path.write_text(json.dumps(single))
        out = tmp_path / "single.png"
        plot_homotopy(spec([path], "homotopy-sweep", out))
        assert out.stat().st_size > 0

    def test_mismatched_grid_is_schema_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"s_grid": [0, 1], "t_grid": [0, 1], "quat": [[1, 0, 0, 0]]}))
        with pytest.raises(SchemaError):
            plot_homotopy(spec([bad], "homotopy-sweep", tmp_path / "x.png"))


class TestAnimation:
    def test_hardflip_gif(self, exports, tmp_path):
        out = tmp_path / "hardflip.gif"
        render(spec([exports["hardflip_frames"]], "animation", out, fps=20, resolution=(320, 320)))
        assert out.stat().st_size > 0

    def test_missing_matrices_is_schema_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"trick": "x", "samples": [{"t": 0.0}]}))
        with pytest.raises(SchemaError):
            render(spec([bad], "animation", tmp_path / "x.gif"))


class TestCli:
    def test_curve_via_cli(self, exports, tmp_path):
        from pyviz.cli import main

        out = tmp_path / "cli.png"
        code = main([
            "curve", "--in", str(exports["sigma"]), "--in", str(exports["sigma2"]),
            "--out", str(out), "--camera=-45,20", "--resolution", "640x640",
        ])
        assert code == 0
        assert out.stat().st_size > 0

    def test_schema_error_exit_code(self, tmp_path):
        from pyviz.cli import main

        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert main(["curve", "--in", str(bad), "--out", str(tmp_path / "x.png")]) == 1

    def test_usage_error_exit_code(self):
        from pyviz.cli import main

        assert main(["curve"]) == 2
