"""Werner-family sweep: every measure on a grid of gamma values, as CSV."""

import csv
import io
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields

from .correlations import SolverConfig, measure_all
from .families import werner_state

MASK64 = (1 << 64) - 1


def splitmix64(x):
    """One step of the SplitMix64 mixer; used to derive per-row seeds."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def row_seed(seed, index):
    return (int(seed) ^ splitmix64(index)) & MASK64


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    mutual_info: float
    ree: float
    psi: float
    chi_projective: float
    c1: float
    c2: float
    psi_minus_chi: float
    psi_minus_c: float
    converged: bool = True

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls) if f.name != "converged"]

    def formatted(self):
        return [_fmt(v) for v in astuple(self)[:-1]]


def _fmt(x):
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def gamma_grid(gamma_min=0.0, gamma_max=1.0, gamma_step=0.01):
    if not 0.0 <= gamma_min <= gamma_max <= 1.0:
        raise ValueError("need 0 <= gamma_min <= gamma_max <= 1")
    if gamma_step <= 0:
        raise ValueError("gamma_step must be positive")
    n = int(round((gamma_max - gamma_min) / gamma_step + 1e-9))
    grid = [round(gamma_min + i * gamma_step, 12) for i in range(n + 1)]
    return [g for g in grid if g <= gamma_max + 1e-12]


def werner_row(gamma, config):
    r = measure_all(werner_state(min(gamma, 1.0)), config)
    return SweepRow(
        gamma=gamma,
        mutual_info=r.mutual_info,
        ree=r.ree_value,
        psi=r.psi,
        chi_projective=r.chi_projective,
        c1=r.c1,
        c2=r.c2,
        psi_minus_chi=r.psi - r.chi_projective,
        psi_minus_c=r.psi - r.c1,
        converged=r.converged,
    )


def run_sweep(gamma_min=0.0, gamma_max=1.0, gamma_step=0.01, tol=1e-6, seed=0, threads=1, config=None):
    """Rows for every grid gamma, ascending, independent of ``threads``."""
    base = config or SolverConfig(tol=tol)
    grid = gamma_grid(gamma_min, gamma_max, gamma_step)
    configs = [
        SolverConfig(**{**vars(base), "tol": tol, "seed": row_seed(seed, i)})
        for i in range(len(grid))
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(werner_row, grid, configs))
    return [werner_row(g, c) for g, c in zip(grid, configs)]


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SweepRow.columns())
    for row in rows:
        writer.writerow(row.formatted())
    return buf.getvalue()


def write_csv_atomic(text, path):
    """Write ``text`` to ``path`` via a temporary file so no partial output survives."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sweep-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def gnuplot_script(csv_path):
    """Plain-text gnuplot script drawing psi, psi - chi_p and psi - C."""
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'gamma'\n"
        "set ylabel 'bits'\n"
        "set xrange [0:1]\n"
        f"plot '{csv_path}' using 1:4 with lines dashtype 3 title 'psi', \\\n"
        f"     '' using 1:8 with lines dashtype 1 title 'psi - chi_p', \\\n"
        f"     '' using 1:9 with lines dashtype 2 title 'psi - C'\n"
    )
