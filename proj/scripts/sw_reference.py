"""Frozen Shapiro-Wilk reference values.

Writes five fixed datasets and their (W, p) from scipy.stats.shapiro to
tests/data/.
"""

import pathlib

import numpy as np
from scipy import stats

ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA = ROOT / "tests" / "data"


def datasets():
    rng = np.random.default_rng(20240501)
    yield 10, rng.normal(5.0, 2.0, 10)
    yield 50, rng.gamma(4.0, 2.0, 50)
    yield 100, rng.normal(140.0, 17.0, 100)
    yield 500, rng.lognormal(0.0, 0.25, 500)
    yield 2000, rng.normal(0.0, 1.0, 2000)


def main():
    lines = ["n,file,W,p_value"]
    for n, x in datasets():
        name = f"sw_n{n}.txt"
        (DATA / name).write_text("".join(f"{v:.17g}\n" for v in x))
        w, p = stats.shapiro(np.array([float(f"{v:.17g}") for v in x]))
        lines.append(f"{n},{name},{w:.12g},{p:.12g}")
        print(n, w, p)
    (DATA / "sw_reference.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
