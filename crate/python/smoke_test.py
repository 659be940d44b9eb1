#!/usr/bin/env python3
"""Smoke test for the singlerail_py extension module.

Builds the extension with cargo, loads it straight from the target
directory, and exercises the main surface: the controlled-sign truth
table, the superposition producer, measurement statistics, the composite
Hadamard, and a fringe sweep.

Run from anywhere:  python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        [
            "cargo",
            "build",
            "--release",
            "-p",
            "singlerail-py",
            "--features",
            "extension-module",
        ],
        cwd=REPO,
        check=True,
    )
    built = REPO / "target" / "release" / "libsinglerail_py.so"
    if not built.exists():  # e.g. macOS naming
        built = REPO / "target" / "release" / "libsinglerail_py.dylib"
    staging = Path(tempfile.mkdtemp(prefix="singlerail_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(built, staging / f"singlerail_py{suffix}")
    return staging


def approx(actual: float, expected: float, tol: float = 1e-9) -> None:
    assert abs(actual - expected) <= tol, f"{actual} != {expected} (tol {tol})"


def main() -> None:
    sys.path.insert(0, str(build_extension()))
    import singlerail_py as sr

    # Controlled-sign truth table: herald 2/27 everywhere, sign flip on |11>.
    for counts, amps in [
        ((0, 0), (1, 0, 0, 0)),
        ((1, 0), (0, 1, 0, 0)),
        ((0, 1), (0, 0, 1, 0)),
        ((1, 1), (0, 0, 0, 1)),
    ]:
        out = sr.cs_gate(sr.QubitPair(*amps))
        approx(out.herald_probability, 2 / 27)
        amplitude = out.state.amplitude(list(counts))
        expected = -1.0 if counts == (1, 1) else 1.0
        approx(amplitude.real, expected, 1e-12)
        approx(amplitude.imag, 0.0, 1e-12)

    # Producer working point at the strong drive.
    point = sr.working_point(-0.33714)
    approx(point.eta, sr.reflectivity_for_chi(-0.33714), 1e-15)
    approx(point.eta, 0.91985, 5e-6)
    approx(point.herald_probability, 0.08, 1e-2)
    approx(point.second_order_ratio, 0.1, 5e-3)
    produced = sr.produce_superposition(-0.33714)
    approx(
        abs(produced.state.amplitude([0])), abs(produced.state.amplitude([1])), 1e-12
    )

    # Superposition-basis measurement on |+>.
    result = sr.measure_superposition(sr.Qubit.plus())
    approx(result.plus, 0.5, 1e-12)
    approx(result.minus, 0.0, 1e-12)
    approx(result.inconclusive, 0.5, 1e-12)
    approx(result.outcomes[(1, 0)], 0.5, 1e-12)

    # Composite Hadamard: |0> -> |+>, herald 1/54.
    out = sr.hadamard(sr.Qubit.zero())
    approx(out.herald_probability, 1 / 54)
    approx(out.state.fidelity(sr.Qubit.plus().state()), 1.0, 1e-12)

    # Ideal fringe: visibility 1, p_normalized = cos^2(phi/2).
    fringe = sr.sweep(efficiency=1.0, points=16, resources="exact")
    approx(fringe.visibility, 1.0)
    for phi, p in zip(fringe.phis, fringe.p_normalized):
        approx(p, math.cos(phi / 2) ** 2, 1e-10)

    # Bad arguments surface as ValueError.
    for bad_call in (
        lambda: sr.sweep(efficiency=1.5),
        lambda: sr.sweep(resources="imaginary"),
        lambda: sr.working_point(0.0),
    ):
        try:
            bad_call()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("OK")


if __name__ == "__main__":
    main()
