"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line through ``report_criterion``; the lines
are printed in the "acceptance criteria" section at the end of the run.
"""

import time

import pytest

from qcorrelations.correlations import SolverConfig, chi_projective, measure_all, psi
from qcorrelations.entanglement import negativity, ree
from qcorrelations.families import (
    random_density,
    random_local_unitary,
    random_ppt_states,
    random_pure_product,
    werner_state,
)
from qcorrelations.linalg import binary_entropy
from qcorrelations.states import (
    apply_local_unitary,
    mutual_information,
    relative_entropy,
    swap_subsystems,
    tensor_product,
)
from qcorrelations.sweep import gamma_grid, run_sweep

from test_correlations import chi_oracle


@pytest.fixture(scope="module")
def werner_sweep():
    start = time.perf_counter()
    rows = run_sweep(0.0, 1.0, 0.01, tol=1e-6, seed=0)
    return rows, time.perf_counter() - start


def test_criterion_1_pure_werner(report_criterion):
    start = time.perf_counter()
    r = measure_all(werner_state(1.0))
    elapsed = time.perf_counter() - start
    values = {"MI": (r.mutual_info, 2.0), "ree": (r.ree_value, 1.0), "psi": (r.psi, 1.0),
              "c1": (r.c1, 1.0), "c2": (r.c2, 1.0), "chi": (r.chi_projective, 1.0)}
    worst = max(abs(v - target) for v, target in values.values())
    ok = worst <= 1e-3 and elapsed < 5.0
    report_criterion(1, "Werner gamma=1 values", ok, f"(max error {worst:.1e}, {elapsed:.2f} s)")
    assert ok


def test_criterion_2_entanglement_threshold(report_criterion):
    start = time.perf_counter()
    grid = gamma_grid(0.0, 1.0, 0.01)
    ree_values = [ree(werner_state(g), seed=i).value for i, g in enumerate(grid)]
    negs = [negativity(werner_state(g)) for g in grid]
    elapsed = time.perf_counter() - start

    below = [v for g, v in zip(grid, ree_values) if g <= 1 / 3]
    above = [v for g, v in zip(grid, ree_values) if g >= 0.36]
    last_zero = max(g for g, n in zip(grid, negs) if n <= 1e-12)
    first_positive = min(g for g, n in zip(grid, negs) if n > 1e-12)
    crossing_ok = abs(last_zero - 1 / 3) <= 0.01 and abs(first_positive - 1 / 3) <= 0.01
    ok = max(below) <= 1e-5 and min(above) > 1e-3 and crossing_ok and elapsed < 60.0
    report_criterion(2, "REE vanishes up to 1/3 and negativity crosses there", ok,
                     f"(max REE below {max(below):.1e}, min REE above {min(above):.2e}, "
                     f"crossing in ({last_zero}, {first_positive}), {elapsed:.1f} s)")
    assert ok


def test_criterion_3_werner_sweep(werner_sweep, report_criterion):
    rows, elapsed = werner_sweep
    gap_min = min(r.psi - r.chi_projective for r in rows)
    crossover = next(r.gamma for r in rows if r.chi_projective > r.c1)
    first, last = rows[0], rows[-1]
    zeros = [first.mutual_info, first.ree, first.psi, first.chi_projective, first.c1, first.c2,
             first.psi_minus_chi, first.psi_minus_c]
    ends_ok = (max(abs(v) for v in zeros) <= 1e-3 and abs(last.psi - 1.0) <= 1e-3
               and abs(last.psi_minus_chi) <= 1e-3 and abs(last.psi_minus_c) <= 1e-3)
    ok = gap_min >= -1e-4 and 0.51 <= crossover <= 0.55 and ends_ok and elapsed < 120.0 and len(rows) == 101
    report_criterion(3, "Werner sweep shape", ok,
                     f"(min psi-chi {gap_min:.1e}, chi > C first at {crossover}, {elapsed:.1f} s)")
    assert ok


def test_criterion_4_c1_equals_c2_on_werner(werner_sweep, report_criterion):
    rows, _ = werner_sweep
    worst = max(abs(r.c1 - r.c2) for r in rows)
    ok = worst <= 1e-3
    report_criterion(4, "|c1 - c2| on the Werner grid", ok, f"(max {worst:.1e})")
    assert ok


def test_criterion_5_separable_collapse(report_criterion):
    worst_psi = worst_c1 = 0.0
    for i, rho in enumerate(random_ppt_states(50, 500)):
        r = measure_all(rho, SolverConfig(seed=i))
        worst_psi = max(worst_psi, abs(r.psi - r.mutual_info))
        worst_c1 = max(worst_c1, abs(r.c1 - r.mutual_info))
    ok = worst_psi <= 2e-4 and worst_c1 <= 2e-4
    report_criterion(5, "psi = c1 = MI on 50 PPT states", ok, f"(max errors {worst_psi:.1e}, {worst_c1:.1e})")
    assert ok


def test_criterion_6_properties(report_criterion):
    failures = []
    trials = 50

    for s in range(trials):
        rho = random_density((2, 2), 4, 600 + s)
        a = psi(rho, SolverConfig(seed=s))
        b = psi(swap_subsystems(rho), SolverConfig(seed=s))
        if a < 0.0:
            failures.append(f"psi < 0 at seed {s}")
        if abs(a - b) > 2e-4:
            failures.append(f"swap changed psi at seed {s}")

    rho = random_density((2, 2), 3, 700)
    ref = measure_all(rho)
    for s in range(trials):
        u_a, u_b = random_local_unitary((2, 2), 800 + s)
        r = measure_all(apply_local_unitary(rho, u_a, u_b), SolverConfig(seed=s))
        if max(abs(r.psi - ref.psi), abs(r.c1 - ref.c1), abs(r.chi_projective - ref.chi_projective)) > 2e-4:
            failures.append(f"local unitary changed a measure at seed {s}")

    for s in range(trials):
        r = measure_all(random_pure_product((2, 2), 900 + s))
        if max(r.mutual_info, r.psi, r.c1, r.c2, r.chi_projective) > 1e-6:
            failures.append(f"product state with nonzero measure at seed {s}")

    chi_worst = 0.0
    for s in range(20):
        rho = random_density((2, 2), 4, 1000 + s)
        chi_worst = max(chi_worst, abs(chi_projective(rho) - chi_oracle(rho)))
    if chi_worst > 1e-6:
        failures.append(f"chi_projective off the grid oracle by {chi_worst:.1e}")

    cert_worst = 0.0
    for s in range(trials):
        rho = random_density((2, 2), 2 + s % 3, 1100 + s)
        loose = ree(rho, seed=s)
        tight = ree(rho, seed=s + 7, tol=1e-8)
        cert_worst = max(cert_worst, abs(relative_entropy(rho, loose.sigma_star) - loose.value))
        if loose.lower_bound > tight.value + 1e-9 or tight.lower_bound > loose.value + 1e-9:
            failures.append(f"value - gap exceeds an attained value at seed {s}")
    for g in (0.4, 0.6, 0.8, 1.0):
        exact = 1 - binary_entropy((1 + 3 * g) / 4) if g < 1 else 1.0
        r = ree(werner_state(g))
        if not r.lower_bound <= exact + 1e-12 <= r.value + 2e-12:
            failures.append(f"Werner({g}) closed form outside [value - gap, value]")
    if cert_worst > 1e-9:
        failures.append(f"S(rho || sigma*) differs from the reported value by {cert_worst:.1e}")

    ok = not failures
    report_criterion(6, "property suites", ok,
                     f"(chi vs oracle {chi_worst:.1e}, certificate re-evaluation {cert_worst:.1e})"
                     + ("" if ok else " " + "; ".join(failures[:3])))
    assert ok, failures


def test_criterion_7_superadditivity(report_criterion):
    start = time.perf_counter()
    rho = werner_state(0.8)
    single = psi(rho, SolverConfig(tol=1e-8))
    pair = tensor_product(rho, rho)
    result = ree(pair, tol=1e-3, strict=False)
    doubled = mutual_information(pair) - result.value
    elapsed = time.perf_counter() - start
    ok = result.converged and result.gap <= 1e-3 and doubled >= 2 * single - 5e-3 and elapsed < 600.0
    report_criterion(7, "psi superadditive on two Werner(0.8) copies", ok,
                     f"(psi(rho x rho) {doubled:.5f} vs 2 psi {2 * single:.5f}, gap {result.gap:.1e}, "
                     f"{elapsed:.1f} s)")
    assert ok
