"""Independent scenario-enumeration oracle used by the tests.

Restricted to flat curves so everything reduces to explicit exp() calls and
dumb loops; deliberately shares no code with the package under test. Prices
are expectations over the N + 1 default scenarios (default in bucket k,
settled at t_k, or survival), with each default-contingent payment grossed
up by the period's simple floating accrual.
"""

from __future__ import annotations

import math


def flat_df(r: float, t: float) -> float:
    return math.exp(-r * t)


def flat_survival(lam: float, t: float) -> float:
    return math.exp(-lam * t)


def scenario_probabilities(lam: float, times: list[float]) -> list[tuple[int | None, float]]:
    """(bucket, probability) pairs: buckets 1..N then survival (None)."""
    out: list[tuple[int | None, float]] = []
    prev_q = 1.0
    for k, t in enumerate(times, start=1):
        q = flat_survival(lam, t)
        out.append((k, prev_q - q))
        prev_q = q
    out.append((None, prev_q))
    return out


def accrual_factor(r: float, t_prev: float, t: float) -> float:
    """1 + eps * theta for the period, eps being the simple forward at flat rate r."""
    return flat_df(r, t_prev) / flat_df(r, t)


def simple_forward(r: float, t_prev: float, t: float) -> float:
    return (accrual_factor(r, t_prev, t) - 1.0) / (t - t_prev)


def bond_scenario_flows(
    c: float, recovery: float, r: float, times: list[float], bucket: int | None
) -> list[tuple[float, float]]:
    """(time, amount) cashflows of the bond in one scenario."""
    flows = []
    prev = 0.0
    for k, t in enumerate(times, start=1):
        if bucket is not None and k >= bucket:
            break
        theta = t - prev
        flows.append((t, c * theta))
        prev = t
    if bucket is None:
        flows.append((times[-1], 1.0))
    else:
        t = times[bucket - 1]
        t_prev = times[bucket - 2] if bucket > 1 else 0.0
        flows.append((t, recovery * accrual_factor(r, t_prev, t)))
    return flows


def floater_scenario_flows(
    recovery: float, r: float, times: list[float], bucket: int | None
) -> list[tuple[float, float]]:
    flows = []
    prev = 0.0
    for k, t in enumerate(times, start=1):
        if bucket is not None and k >= bucket:
            break
        theta = t - prev
        flows.append((t, simple_forward(r, prev, t) * theta))
        prev = t
    if bucket is None:
        flows.append((times[-1], 1.0))
    else:
        t = times[bucket - 1]
        t_prev = times[bucket - 2] if bucket > 1 else 0.0
        flows.append((t, recovery * accrual_factor(r, t_prev, t)))
    return flows


def cds_scenario_flows(
    spread: float, recovery: float, r: float, times: list[float], bucket: int | None
) -> list[tuple[float, float]]:
    """Sold protection: receive the spread while alive, pay LGD at default."""
    flows = []
    prev = 0.0
    for k, t in enumerate(times, start=1):
        if bucket is not None and k >= bucket:
            break
        flows.append((t, spread * (t - prev)))
        prev = t
    if bucket is not None:
        t = times[bucket - 1]
        t_prev = times[bucket - 2] if bucket > 1 else 0.0
        flows.append((t, -(1.0 - recovery) * accrual_factor(r, t_prev, t)))
    return flows


def swap_scenario_flows(
    c: float,
    spread: float,
    r: float,
    times: list[float],
    bucket: int | None,
    cancel_at_default: bool,
) -> list[tuple[float, float]]:
    """Holder-side asset swap payments (-c + eps + spread) * theta, no upfront."""
    flows = []
    prev = 0.0
    for k, t in enumerate(times, start=1):
        if bucket is not None and k >= bucket and cancel_at_default:
            break
        theta = t - prev
        flows.append((t, (-c + simple_forward(r, prev, t) + spread) * theta))
        prev = t
    return flows


def expected_pv(
    r: float,
    lam: float,
    times: list[float],
    scenario_flows,
) -> float:
    """Probability-weighted discounted value of per-scenario flow lists.

    scenario_flows(bucket) must return the (time, amount) list of the scenario.
    """
    total = 0.0
    for bucket, prob in scenario_probabilities(lam, times):
        total += prob * sum(amount * flat_df(r, t) for t, amount in scenario_flows(bucket))
    return total


def oracle_bond_price(r, lam, c, recovery, times):
    return expected_pv(r, lam, times, lambda b: bond_scenario_flows(c, recovery, r, times, b))


def oracle_floater_price(r, lam, recovery, times):
    return expected_pv(r, lam, times, lambda b: floater_scenario_flows(recovery, r, times, b))


def oracle_cds_pv(r, lam, spread, recovery, times):
    return expected_pv(
        r, lam, times, lambda b: cds_scenario_flows(spread, recovery, r, times, b)
    )


def oracle_annuity(r, lam, times):
    return oracle_cds_pv(r, lam, 1.0, 1.0, times)


def oracle_par_cds_spread(r, lam, recovery, times):
    protection = -oracle_cds_pv(r, lam, 0.0, recovery, times)
    return protection / oracle_annuity(r, lam, times)


def oracle_asw_pv(r, lam, c, recovery, spread, times, cancel_at_default):
    """Swap payments plus the pull-to-par upfront, holder side."""
    upfront = oracle_bond_price(r, lam, c, recovery, times) - 1.0
    running = expected_pv(
        r, lam, times,
        lambda b: swap_scenario_flows(c, spread, r, times, b, cancel_at_default),
    )
    return running + upfront


def oracle_forward_bond_price(r, lam, c, recovery, times, t_r):
    """Time-t_r bond value conditional on surviving to t_r."""
    value = 0.0
    surviving_mass = 0.0
    for bucket, prob in scenario_probabilities(lam, times):
        if bucket is not None and times[bucket - 1] <= t_r:
            continue
        surviving_mass += prob
        flows = bond_scenario_flows(c, recovery, r, times, bucket)
        value += prob * sum(
            amount * flat_df(r, t - t_r) for t, amount in flows if t > t_r
        )
    return value / surviving_mass
