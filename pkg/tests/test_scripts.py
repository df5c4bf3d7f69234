import pathlib
import subprocess
import sys

import pytest

SCRIPTS = pathlib.Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize("name, args", [("layout_demo.py", []),
                                        ("published_diagnostics.py", []),
                                        ("synthetic_roundtrip.py", ["--size", "81"])])
def test_script_runs(name, args):
    out = subprocess.run([sys.executable, str(SCRIPTS / name), *args],
                         capture_output=True, text=True, check=True).stdout
    assert out.strip()
