import shutil
import subprocess

import pytest

# Scaled-down but structurally complete preset bundles, produced through the
# primary tool's public CLI (its external interface).
_SCALES = {
    "fig2c": "0.1",
    "fig3b": "0.02",
    "fig3c": "0.05",
    "fig4a": "0.1",
    "fig4c": "0.05",
}


@pytest.fixture(scope="session")
def preset_dirs(tmp_path_factory):
    if shutil.which("afcdlcz") is None:
        pytest.skip("afcdlcz CLI not installed; install the primary package first")
    root = tmp_path_factory.mktemp("bundles")
    dirs = {}
    for preset, scale in _SCALES.items():
        out = root / preset
        proc = subprocess.run(
            [
                "afcdlcz", "reproduce", preset,
                "--out-dir", str(out), "--seed", "31415", "--scale", scale,
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{preset} bundle failed:\n{proc.stderr}\n{proc.stdout}"
        dirs[preset] = out
    return dirs
