"""Smoke test for the gaplab Python extension.

Build first:
    cargo build -p gaplab-py --features extension-module --release
then run:
    python3 python/smoke_test.py [path/to/libgaplab_py.so]
"""

import importlib.machinery
import importlib.util
import json
import math
import os
import sys
import tempfile


def load(path):
    loader = importlib.machinery.ExtensionFileLoader("gaplab", path)
    spec = importlib.util.spec_from_file_location("gaplab", path, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def default_path():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(root, "target"))
    for profile in ("release", "debug"):
        for name in ("libgaplab_py.so", "libgaplab_py.dylib", "gaplab_py.dll"):
            p = os.path.join(target, profile, name)
            if os.path.exists(p):
                return p
    sys.exit("extension not built; see the module docstring")


def main():
    gl = load(sys.argv[1] if len(sys.argv) > 1 else default_path())

    v = gl.ginibre_kernel(1 + 0j, 1 + 0j, 10)
    assert abs(v.real - 0.4579297146) < 1e-9 and abs(v.imag) < 1e-15, v

    x = math.log(2) ** 0.25
    assert abs(gl.gap_cdf(4, 1, x) - 0.5) < 1e-14
    try:
        gl.gap_cdf(4, 1, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative x accepted")

    mu = gl.intensity(json.dumps({"ensemble": "ginibre", "a": [[0.0, 1.3]], "region": {"shape": "plane"}}))
    assert abs(mu - 1.3**4 / 4) < 1e-14, mu

    config = {
        "ensemble": {"kind": "Ginibre", "n": 16},
        "trials": 20,
        "master_seed": 1,
        "counts": [{"id": "a", "lengths": [[0.0, 1.0]]}],
    }
    with tempfile.TemporaryDirectory() as out:
        meta = json.loads(gl.run(json.dumps(config), out))
        assert meta["complete"] and meta["valid"] and meta["trials"] == 20
        assert os.path.exists(os.path.join(out, "gaps.csv"))
    try:
        gl.run(json.dumps({"ensemble": {"kind": "Ginibre", "n": 1}, "trials": 1, "master_seed": 0}))
    except ValueError:
        pass
    else:
        raise AssertionError("invalid config accepted")

    bundle = json.loads(gl.verify())
    assert all(v["passed"] for v in bundle["verdicts"]), bundle
    print("gaplab", gl.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
