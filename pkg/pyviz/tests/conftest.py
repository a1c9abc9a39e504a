"""Produce input documents by invoking the fliptricks CLI, never its API."""

import subprocess
import sys

import pytest


def run_cli(*args):
    result = subprocess.run(
        [sys.executable, "-m", "fliptricks", *args],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="session")
def exports(tmp_path_factory):
    """Exported JSON for the six paper-style figures plus one animation."""
    root = tmp_path_factory.mktemp("exports")
    files = {}

    for key, expr in (
        ("sigma", "S"), ("sigma2", "S^2"), ("sigma3", "S^3"),
        ("kappa", "K"), ("kappa2", "K^2"), ("kappa_inv", "K^-1"),
    ):
        path = root / f"{key}.json"
        run_cli("lift", expr, "--n", "192", "--out", str(path))
        files[key] = path

    files["varial"] = root / "varial.json"
    run_cli("project", "S * K", "--n", "256", "--out", str(files["varial"]))

    for key, name in (
        ("contract", "contract-k2"), ("kickheel", "kick-heel"), ("varial540", "varial-s3"),
    ):
        path = root / f"{key}.json"
        run_cli("homotopy", name, "--grid", "10x72", "--out", str(path))
        files[key] = path

    files["hardflip_frames"] = root / "hardflip-frames.json"
    run_cli("frames", "U * K@1/2", "--n", "40", "--out", str(files["hardflip_frames"]))

    return files
