"""Builds the extension module, imports it and checks a handful of known values.

Usage: python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module() -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "ldic-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libldic.so"
    target = Path(tempfile.mkdtemp(prefix="ldic-py-")) / "ldic.so"
    shutil.copy(built, target)
    return target.parent


def main() -> int:
    sys.path.insert(0, str(build_module()))
    import ldic

    p = ldic.ChannelParams(20, 15, 12, 13)
    assert p.q == 20
    assert p.to_tuple() == (20, 15, 12, 13, 0, 0)
    assert ldic.ChannelParams.parse("20,15,12,13,0,0") == p

    region = ldic.capacity_region(p)
    assert region.vertices() == [(0, 0), (20, 0), (18, 4), (14, 8), (0, 15)], region.vertices()
    assert region.contains(14, 8) and not region.contains(Fraction(29, 2), 8)
    assert region == ldic.achievable_region(p)

    full = ldic.ChannelParams(20, 15, 12, 13, 20, 15)
    assert region.subset_of(ldic.capacity_region(full))
    g = ldic.gain_report(full)
    assert (g["delta1"], g["delta2"], g["sigma"]) == (7, Fraction(7, 2), 0), g
    assert (g["argmax_rj_for_delta1"], g["argmax_rj_for_delta2"]) == (15, 7), g

    same = ldic.capacity_region(ldic.ChannelParams(10, 9, 2, 15))
    assert same == ldic.capacity_region(ldic.ChannelParams(10, 9, 2, 15, 10, 15))

    assert ldic.feedback_threshold([20, 15, 12, 13], 1, "delta1") == 13
    assert ldic.feedback_threshold([10, 20, 6, 12], 1, "any") is None

    theta = ldic.theta_table(p)
    assert len(theta) == 7
    assert all(theta[4][i] == max(theta[3][i], theta[2][i]) for i in range(2))

    y1, y2 = ldic.forward("1" + "0" * 19, "0" * 20, p)
    assert y1 == "1" + "0" * 19 and y2 == "0" * 7 + "1" + "0" * 12, (y1, y2)

    parts = ldic.decompose(full, 1)
    assert set(parts) >= {"X_C", "X_P", "X_D", "X_Q", "X_U"}

    trace = ldic.simulate(full, uses=3, policy="random", seed=5)
    assert [row["use"] for row in trace] == [1, 2, 3]
    assert trace[1]["fb1"] == ldic.feedback_signal(trace[0]["y1"], full, 1)
    assert trace == ldic.simulate(full, uses=3, policy="random", seed=5)

    try:
        ldic.simulate(full, uses=0)
    except ValueError:
        pass
    else:
        raise AssertionError("empty session accepted")

    print("python smoke test: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
