"""Randomized property checks, runnable without pytest (``qcorr selftest``)."""

import numpy as np

from .correlations import SolverConfig, chi_projective, measure_all, psi
from .entanglement import is_ppt, negativity, ree
from .families import random_density, random_local_unitary, random_ppt_states, random_pure_product, werner_state
from .states import (
    apply_local_unitary,
    mutual_information,
    mutual_information_relative,
    relative_entropy,
    swap_subsystems,
)


def _mutual_information(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_density((2, 2), 4, s)
        i1, i2 = mutual_information(rho), mutual_information_relative(rho)
        if not (-1e-9 <= i1 <= 2.0 + 1e-9 and abs(i1 - i2) <= 1e-8):
            return False, f"seed {s}: I = {i1}, S(rho||rho_A rho_B) = {i2}"
    return True, ""


def _ree_zero_iff_ppt(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_density((2, 2), 4, s)
        value = ree(rho, seed=s).value
        if is_ppt(rho) and value > 1e-5:
            return False, f"seed {s}: PPT state with REE {value}"
        if not is_ppt(rho) and value <= 0.0:
            return False, f"seed {s}: entangled state with REE 0"
    return True, ""


def _psi_nonnegative_and_swap(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_density((2, 2), 4, s)
        a, b = psi(rho, SolverConfig(seed=s)), psi(swap_subsystems(rho), SolverConfig(seed=s))
        if fault:
            b += 1.0
        if a < -1e-6 or abs(a - b) > 2e-4:
            return False, f"seed {s}: psi = {a}, psi(swapped) = {b}"
    return True, ""


def _local_unitary_invariance(trials, seed, fault):
    rho = werner_state(0.7)
    ref = measure_all(rho)
    for s in range(seed, seed + trials):
        u_a, u_b = random_local_unitary((2, 2), s)
        r = measure_all(apply_local_unitary(rho, u_a, u_b), SolverConfig(seed=s))
        for name in ("psi", "c1", "c2", "chi_projective"):
            if abs(getattr(r, name) - getattr(ref, name)) > 2e-4:
                return False, f"seed {s}: {name} changed by a local unitary"
    return True, ""


def _product_zero(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_pure_product((2, 2), s)
        if psi(rho) > 1e-6 or negativity(rho) > 1e-10:
            return False, f"seed {s}: product state with nonzero psi or negativity"
    return True, ""


def _separable_collapse(trials, seed, fault):
    for rho in random_ppt_states(trials, seed):
        r = measure_all(rho, SolverConfig(tol=1e-8))
        if abs(r.psi - r.mutual_info) > 2e-4 or abs(r.c1 - r.mutual_info) > 2e-4:
            return False, f"psi {r.psi}, c1 {r.c1}, I {r.mutual_info}"
    return True, ""


def _certificate(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_density((2, 2), 4, s)
        r = ree(rho, seed=s)
        if abs(relative_entropy(rho, r.sigma_star) - r.value) > 1e-9 or r.gap < 0:
            return False, f"seed {s}: value {r.value} not reproduced"
    return True, ""


def _chi_bounds(trials, seed, fault):
    for s in range(seed, seed + trials):
        rho = random_density((2, 2), 4, s)
        chi = chi_projective(rho)
        if not -1e-12 <= chi <= mutual_information(rho) + 1e-9:
            return False, f"seed {s}: chi {chi} outside [0, I]"
    return True, ""


def _werner_threshold(trials, seed, fault):
    for g in np.linspace(0.0, 1.0, max(trials, 3)):
        rho = werner_state(g)
        entangled = g > 1 / 3 + 1e-9
        if (negativity(rho) > 1e-10) != entangled:
            return False, f"gamma {g}: negativity {negativity(rho)}"
    return True, ""


PROPERTIES = [
    ("mutual_information", _mutual_information),
    ("ree_zero_iff_ppt", _ree_zero_iff_ppt),
    ("psi_nonnegative_and_swap_symmetric", _psi_nonnegative_and_swap),
    ("local_unitary_invariance", _local_unitary_invariance),
    ("product_state_zero", _product_zero),
    ("separable_collapse", _separable_collapse),
    ("certificate_soundness", _certificate),
    ("chi_projective_bounds", _chi_bounds),
    ("werner_negativity_threshold", _werner_threshold),
]


def run_selftest(trials=20, seed=0, inject_fault=False):
    """Run every property; yields ``(name, passed, detail)`` in order."""
    for name, check in PROPERTIES:
        ok, detail = check(trials, seed, inject_fault)
        yield name, ok, detail
