"""Builds the extension module and exercises it from Python.

Run from the repository root: python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build() -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "so3-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libso3py.so"
    out = Path(tempfile.mkdtemp()) / "so3py.so"
    shutil.copy(lib, out)
    return out.parent


def main() -> None:
    sys.path.insert(0, str(build()))
    import so3py

    assert set(so3py.catalog_names()) == {"s5", "wu", "s3xs2", "s3~xs2"}

    wu = so3py.Profile.catalog("wu")
    assert not wu.spin
    assert wu.homology[2] == "Z_2"
    assert json.loads(wu.decide_irreducible_so3())["verdict"] == "Yes"
    assert json.loads(wu.decide_two_field("atiyah"))["verdict"] == "No"
    try:
        wu.decide_two_field("thomas")
    except ValueError as e:
        assert "not spin" in str(e)
    else:
        raise AssertionError("thomas criterion accepted a non-spin profile")

    assert so3py.hypersurface(3) == (7, 9, -5, -15, False)
    c, w = so3py.find_euler_class(3, [3, -1, -1, -1, -1, -1, -1], 3)
    m = so3py.circle_bundle(3, c)
    assert m.homology[1] == "Z_3"
    assert (m.semicharacteristic(), m.kervaire_semicharacteristic()) == (1, 1)
    assert json.loads(m.decide_irreducible_so3())["verdict"] == "Yes"

    back = so3py.Profile.from_json(m.to_json())
    assert back == m

    s = so3py.connected_sum([so3py.Profile.catalog("s3xs2")] * 3)
    assert json.loads(s.decide_irreducible_so3())["verdict"] == "Yes"
    assert json.loads(s.invariants())["homology"][2] == "Z^3"

    p = so3py.product_3x2(1, [2], 2)
    assert p.semicharacteristic() == 0
    assert json.loads(p.decide_irreducible_so3())["verdict"] == "Yes"

    recipe = json.dumps({"construction": "catalog", "name": "s3~xs2"})
    assert so3py.Profile.from_json(recipe) == so3py.Profile.catalog("s3~xs2")

    print("smoke test passed")


if __name__ == "__main__":
    main()
