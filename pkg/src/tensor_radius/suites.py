"""Named reproduction suites: golden values with observed vs expected."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exact import Surd, surd_power
from .convex import VPolytope
from .ellipsoids import bm_distance_euclidean, contact_points, identity_decomposition, john, loewner
from .operators import LinearOperator, nuclear_norm
from .radius import john_to_loewner_rotation, ntp_gap, rho_report, square_construction, tau_infty_bounds, tau_k
from .spaces import Lp, PolyV, Schatten

INF = math.inf


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    expected: str
    passed: bool
    certified: bool
    exact: str | None = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "observed": self.observed,
            "expected": self.expected,
            "passed": self.passed,
            "certified": self.certified,
        }
        if self.exact is not None:
            out["exact"] = self.exact
        return out


def format_exact(v) -> str:
    """``sqrt(2)``, ``(155/24)^(1/2)`` style strings for rationals and surds."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Surd):
        r = v.radicand
        if v.index == 1:
            return str(r)
        base = str(r) if r.denominator == 1 else f"({r})"
        return f"sqrt({r})" if v.index == 2 else f"{base}^(1/{v.index})"
    return repr(float(v))


def hadamard() -> LinearOperator:
    h = Fraction(1, 2)
    return LinearOperator([[h, h], [h, -h]], Lp(2, INF), Lp(2, 1))


def section_pair() -> tuple[LinearOperator, LinearOperator]:
    X = Lp(2, 1)
    S = LinearOperator([[1, Fraction(1, 3)], [Fraction(1, 3), 1]], X, X)
    T = LinearOperator([[Fraction(1, 2), 0], [0, 1]], X, X)
    return S, T


def hexagon() -> PolyV:
    return PolyV(VPolytope(np.array([[1, 0], [0, 1], [1, -1]])), label="hexagon")


def _power_check(name: str, r, expected: Fraction) -> Check:
    ok = r.certified and isinstance(r.power, Fraction) and r.power == expected
    return Check(name, r.value, format_exact(Surd(expected, r.k)), ok, r.certified, format_exact(r.exact) if r.exact else None)


def example_hadamard(seed: int = 0, starts: int = 64, **_) -> list[Check]:
    H = hadamard()
    r = {k: tau_k(H, k, starts=starts, seed=seed) for k in (1, 2, 3, 4)}
    out = [
        _power_check("tau_1(H)", r[1], Fraction(1)),
        _power_check("tau_2(H)", r[2], Fraction(2)),
        Check(
            "tau_3(H) < sqrt(2)",
            r[3].value,
            "< sqrt(2) - 1e-6",
            r[3].certified and r[3].value < math.sqrt(2) - 1e-6,
            r[3].certified,
            format_exact(r[3].exact) if r[3].exact else None,
        ),
        _power_check("tau_4(H)", r[4], Fraction(4)),
    ]
    nuc = nuclear_norm(H)
    out.append(Check("nuclear(H)", float(nuc.value), "2", nuc.certified and nuc.value == 2, nuc.certified, format_exact(nuc.value) if isinstance(nuc.value, Fraction) else None))
    rep = tau_infty_bounds(H, kmax=4, starts=starts, seed=seed)
    iv = rep.interval
    ok = iv.certified and iv.collapsed and iv.upper.exact is not None and Surd(Fraction(2), 2) == iv.upper.exact
    out.append(Check("tau_infty(H)", iv.upper.value, "sqrt(2)", ok, iv.certified, format_exact(iv.upper.exact) if iv.upper.exact else None))
    return out


def section_counterexample(**_) -> list[Check]:
    S, T = section_pair()
    SpT = LinearOperator(S.matrix + T.matrix, S.domain, S.codomain)
    rs, rt, rst = (tau_k(A, 2, method="vertex") for A in (S, T, SpT))
    out = [
        _power_check("tau_2(S)", rs, Fraction(2)),
        _power_check("tau_2(T)", rt, Fraction(9, 8)),
        _power_check("tau_2(S+T)", rst, Fraction(155, 24)),
    ]
    # tau_2(S+T) > tau_2(S) + tau_2(T)  <=>  compare squares of the nonnegative sums
    lhs = rst.power
    rhs_sq_rational = rs.power + rt.power
    cross = 4 * rs.power * rt.power  # (2 sqrt(ab))^2
    # lhs > a + b + 2 sqrt(ab)  <=>  lhs - a - b > 0 and (lhs - a - b)^2 > 4ab
    d = lhs - rhs_sq_rational
    violated = d > 0 and d * d > cross
    out.append(
        Check(
            "tau_2(S+T) > tau_2(S) + tau_2(T)",
            rst.value - (rs.value + rt.value),
            "> 0",
            bool(violated) and rs.certified and rt.certified and rst.certified,
            True,
        )
    )
    return out


def hilbert_schmidt_agreement(seed: int = 0, starts: int = 64, count: int = 20, **_) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for n in (2, 3):
        X = Lp(n, 2)
        worst = 0.0
        for _ in range(count):
            A = rng.standard_normal((n, n))
            r = tau_k(LinearOperator(A, X, X), 2, starts=starts, seed=seed)
            worst = max(worst, abs(r.value - np.linalg.norm(A)))
        out.append(Check(f"max |tau_2 - HS| on l_2^{n} ({count} operators)", worst, "<= 1e-4", worst <= 1e-4, False))
        d = rng.standard_normal(n)
        r = tau_k(LinearOperator(np.diag(d), X, X), 2, starts=starts, seed=seed)
        err = abs(r.value - np.linalg.norm(d))
        out.append(Check(f"|tau_2 - HS| for diagonal on l_2^{n}", err, "<= 1e-9", err <= 1e-9, False))
    return out


def ellipsoid_suite(**_) -> list[Check]:
    X = Lp(2, INF)
    J, L = john(X), loewner(X)
    out = [
        Check("john(l_inf^2) = unit disc", float(np.abs(J.M - np.eye(2)).max()), "<= 1e-6", bool(np.abs(J.M - np.eye(2)).max() <= 1e-6), True),
        Check("loewner(l_inf^2) = sqrt(2) disc", float(np.abs(L.M - np.eye(2) / 2).max()), "<= 1e-6", bool(np.abs(L.M - np.eye(2) / 2).max() <= 1e-6), True),
    ]
    spaces = []
    for p in (1, 2, 4, INF):
        for n in (2, 3):
            Y = Lp(n, p)
            spaces.append(Y)
            e = 0.5 if p == INF else abs(0.5 - 1.0 / p)
            d = bm_distance_euclidean(Y)
            val = d.upper.value
            out.append(Check(f"d({Y.label}, l_2^{n})", val, repr(n**e), d.collapsed and abs(val - n**e) <= 1e-6, d.certified))
    spaces.append(hexagon())
    for Y in spaces:
        for side, E in (("john", john(Y)), ("loewner", loewner(Y))):
            dec = identity_decomposition(contact_points(Y, E, side), E)
            out.append(Check(f"sum c_i for {side}({Y.label})", dec.total, str(Y.dim), abs(dec.total - Y.dim) <= 1e-8, True))
    return out


def closed_form_suite(**_) -> list[Check]:
    out = []
    rows = []
    for p in (1, 2, 4, INF):
        for n in (2, 3):
            e = Fraction(1, 2) if p == INF else abs(Fraction(1, 2) - Fraction(1, p))
            rows.append((Lp(n, p), surd_power(n, 1 - e)))
    for n in (2, 3, 4):
        rows.append((Lp(n, 2), Surd(Fraction(n))))
    for p in (1, 2, 4, INF):
        for n in (2, 3):
            e = Fraction(1, 2) if p == INF else abs(Fraction(1, 2) - Fraction(1, p))
            rows.append((Schatten(n, p), surd_power(n, 2 - e)))
    for Y, expected in rows:
        rep = rho_report(Y)
        got = rep.interval.upper.exact
        ok = rep.interval.collapsed and got is not None and got == expected
        out.append(Check(f"rho_infty({Y.label})", rep.interval.upper.value, format_exact(expected), ok, rep.interval.certified, format_exact(got) if got else None))
    return out


def ntp_gap_suite(seed: int = 0, **_) -> list[Check]:
    out = []
    g = ntp_gap(hadamard())
    out.append(Check("ntp_gap(H): tau_upper < nuclear", g.tau_upper, "sqrt(2) < 2", g.gap_certified and abs(g.tau_upper - math.sqrt(2)) <= 1e-12 and g.nuclear == 2, True))
    rng = np.random.default_rng(seed)
    codomains = [Lp(2, 1), Lp(3, INF), Lp(2, 4), Lp(3, 1), Lp(2, INF)]
    for i, Y in enumerate(codomains):
        A = rng.standard_normal((Y.dim, 2))
        T = LinearOperator(A, Lp(2, 2), Y)
        g = ntp_gap(T)
        rep = tau_infty_bounds(T, kmax=2, seed=seed)
        width = rep.upper - rep.lower
        out.append(Check(f"no gap from l_2^2 to {Y.label} (#{i})", width, "interval width <= 1e-6", (not g.gap_certified) and width <= 1e-6 and abs(rep.upper - g.nuclear) <= 1e-6, rep.interval.certified))
    sq = square_construction(Lp(2, INF))
    out.append(Check("square construction on l_inf^2", sq.tau_upper, "sqrt(2) < 2", abs(sq.tau_upper - math.sqrt(2)) <= 1e-12 and sq.nuclear == 2, True, format_exact(sq.exact_tau_upper) if sq.exact_tau_upper else None))
    g = ntp_gap(john_to_loewner_rotation(4, math.pi / 6))
    out.append(Check("rotation by pi/6 on l_4^2", g.nuclear - g.tau_upper, "gap > 1e-6", g.gap_certified, True))
    return out


SUITES = {
    "example-1.5": example_hadamard,
    "section-6.1": section_counterexample,
    "prop-6.2": hilbert_schmidt_agreement,
    "ellipsoids": ellipsoid_suite,
    "closed-forms": closed_form_suite,
    "ntp-gaps": ntp_gap_suite,
}


def run_suite(name: str, seed: int = 0, starts: int = 64) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](seed=seed, starts=starts)
