"""Named check suites run by ``reidemeister verify``.

Each check returns a :class:`Check`; a suite is a list of them.  All random
choices come from one seeded generator so reruns are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import automorphisms as aut
from .extensions import brauer_bound_check, build_extension, fiber_bounds_check, inner_equals_conjugacy_check
from .groups import (FiniteMatrixGroup, GroupFamily, build_quotient, direct_product,
                     is_member_integral, parse_group)
from .matrices import IntMatrix, ModMatrix
from .orbits import brute_force_labels, partitions_equal, twisted_partition
from .witnesses import (X, make_witness, random_sl_matrix, separating_family, tau_action_identity_check,
                        tau_no_solution_oracle, trace_formula_case1)

SUITES = ("identities", "lemmas", "brauer", "oracles", "all")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def random_sl_bounded(n: int, rng: np.random.Generator, bound: int = 5, tries: int = 10_000) -> IntMatrix:
    """Random element of SL(n, Z) with entries in [-bound, bound] (rejection from elementary words)."""
    for _ in range(tries):
        x = random_sl_matrix(n, rng, steps=int(rng.integers(1, 8)), max_mult=2)
        if max(abs(e) for e in x.entries()) <= bound:
            return x
    raise RuntimeError("could not draw a bounded SL matrix")


# ---------------------------------------------------------------- identities

def identity_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    for n in (2, 3, 4):
        ok = all(tau_action_identity_check(random_sl_matrix(n, rng), int(rng.integers(0, 11)))
                 for _ in range(200))
        out.append(Check(f"X A(k) X^T = X X^T + k c2 c1^T, SL({n}, Z), 200 samples", ok))

    bad = 0
    for _ in range(100):
        n = int(rng.integers(3, 6))
        M = random_sl_matrix(n, rng)
        k = int(rng.integers(-50, 51))
        if (X(n, k) @ M).trace() != trace_formula_case1(k, M):
            bad += 1
    out.append(Check("tr(X(k) M) = (k^2+1) m11 + k(m12+m21) + sum m_jj, 100 samples", bad == 0))

    bad = 0
    for _ in range(100):
        M = zero_diagonal_sl3(rng)
        k = int(rng.integers(-50, 51))
        if (make_witness("A", 3, k) @ M).trace() != k * M[0, 1]:
            bad += 1
    out.append(Check("tr(A(k) M) = k m12 for zero-diagonal M, 100 samples", bad == 0))

    ok = True
    for dim in (4, 6):
        J = aut.swap_matrix(dim)
        ok &= all((X(dim, k) @ J).trace() == 2 * k + dim - 2 for k in range(1, 101))
    out.append(Check("tr(X(k) J') = 2k + (2n-2), k <= 100, 2n in {4, 6}", ok))

    ok = all(IntMatrix([[k * k + 1, k], [k, 1]]).det() == 1 for k in range(1, 51))
    ok &= all(is_member_integral(X(dim, k), GroupFamily("Sp", dim)) for dim in (4, 6) for k in range(1, 51))
    out.append(Check("det C(k) = 1 and X(k) in Sp(2n, Z), k <= 50", ok))

    ok = True
    for _ in range(20):
        M = random_sl_bounded(3, rng)
        for m in (2, 3):
            fam = separating_family(M, m, 10)
            traces = {(w @ M).trace() for w in fam}
            ok &= len(fam) == 10 and len(traces) == 10
            ok &= all(w.det() == 1 and w.mod(m) == ModMatrix.identity(3, m) for w in fam)
    out.append(Check("separating family: 10 level-m witnesses, distinct traces (20 M, m in {2, 3})", ok))
    return out


def zero_diagonal_sl3(rng: np.random.Generator, bound: int = 5) -> IntMatrix:
    """Random [[0, a, b], [c, 0, d], [e, f, 0]] with det = ade + bcf = 1 (rejection sampling)."""
    while True:
        a, b, c, d, e, f = (int(v) for v in rng.integers(-bound, bound + 1, 6))
        if a * d * e + b * c * f == 1:
            return IntMatrix([[0, a, b], [c, 0, d], [e, f, 0]])


# ---------------------------------------------------------------- test matrix

def small_groups() -> dict[str, FiniteMatrixGroup]:
    groups = {d: build_quotient(*parse_group(d)) for d in
              ("sl:2:2", "sl:2:3", "sl:2:5", "sl:3:2", "gl:2:3", "sp:4:2")}
    groups["sl:2:2 x sl:2:2"] = direct_product(groups["sl:2:2"], groups["sl:2:2"])
    groups["sl:2:3 x sl:2:2"] = direct_product(groups["sl:2:3"], groups["sl:2:2"])
    return groups


def automorphism_matrix(g: FiniteMatrixGroup, rng: np.random.Generator) -> list[aut.Automorphism]:
    """Automorphisms tried on a test group; only those that validate are kept."""
    candidates = [aut.identity, aut.tau, aut.sigma, aut.theta,
                  aut.Inner(g.element(int(rng.integers(0, len(g))))),
                  aut.compose(aut.tau, aut.sigma)]
    if g.family is not None and g.family.kind == "GL" and g.modulus > 2:
        candidates.append(aut.CharacterTwist(aut.DetSign()))
    return [phi for phi in candidates if aut.validate_automorphism(phi, g).ok]


def oracle_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    for name, g in small_groups().items():
        for phi in automorphism_matrix(g, rng):
            fast = twisted_partition(g, phi, validate=False).class_of
            slow = brute_force_labels(g, phi)
            out.append(Check(f"union-find = double loop: {name}, {phi.descriptor}",
                             partitions_equal(fast, slow) and bool(np.all(fast == slow))))
    for k in range(1, 5):
        for l in range(1, 5):
            rep = tau_no_solution_oracle(k, l, 2, 6)
            ok = rep.found == 0 if k != l else any(s == IntMatrix.identity(2) for s in rep.solutions)
            out.append(Check(f"X A({k}) X^T = A({l}) search, n=2, B=6", ok,
                             f"{rep.candidates} det-1 candidates, {rep.found} solutions"))
    return out


# ---------------------------------------------------------------- lemmas and bounds

def extension_matrix():
    sl23 = build_quotient(GroupFamily("SL", 2), 3)
    gl23 = build_quotient(GroupFamily("GL", 2), 3)
    minus = -ModMatrix.identity(2, 3)
    yield "SL(2,3) over centre", build_extension(sl23, lambda x: x in (ModMatrix.identity(2, 3), minus))
    yield "GL(2,3) over SL(2,3)", build_extension(gl23, lambda x: x.det() == 1)


def lemma_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    for name, e in extension_matrix():
        g = e.total
        gamma = g.element(int(rng.integers(0, len(g))))
        for phi in (aut.identity, aut.Inner(gamma), aut.tau):
            rep = fiber_bounds_check(e, phi)
            out.append(Check(f"fiber bounds: {name}, {phi.descriptor}", rep.bounds_hold,
                             f"R={rep.R_total} R_quot={rep.R_quotient} R_ker={rep.R_kernel}"))
    for desc in ("sl:2:3", "sl:2:5", "sl:3:2"):
        g = build_quotient(*parse_group(desc))
        gammas = rng.integers(0, len(g), 5)
        ok = all(inner_equals_conjugacy_check(g, int(x)) for x in gammas)
        out.append(Check(f"inner twist classes = conjugacy classes of x gamma: {desc}", ok))
    return out


def brauer_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    for desc in ("sl:2:3", "sl:2:5", "sl:3:2", "gl:2:3", "sp:4:2", "gl:1:7"):
        g = build_quotient(*parse_group(desc))
        out.append(Check(f"class number >= log log |G|: {desc}", brauer_bound_check(g)))
    return out


SUITE_FUNCS: dict[str, Callable[[np.random.Generator], list[Check]]] = {
    "identities": identity_checks,
    "lemmas": lemma_checks,
    "brauer": brauer_checks,
    "oracles": oracle_checks,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    names = [s for s in SUITES if s != "all"] if name == "all" else [name]
    checks = []
    for s in names:
        checks.extend(SUITE_FUNCS[s](np.random.default_rng(seed)))
    return checks
