"""Scenario-level cashflow ledgers for the CDS replica portfolio.

The replica holds the bond, finances it through the repo, and swaps the
coupon through the asset swap; the CDS leg is what the portfolio is checked
against. The default time is bucketed onto the payment grid, so the measure
is exhausted by N + 1 scenarios and expected values are exact finite sums.

Default unwind, matching the pricing convention: the bond is sold at the
recovery fraction of the money-market-rolled par claim (booked on the bond
leg) and the repo is repaid at the same rolled notional (booked on the repo
leg); the two rows net to -LGD * (1 + eps * theta), identical to the CDS
payout. Booking them gross keeps each leg's enumerated value equal to its
instrument's price.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from math import fsum
from typing import NamedTuple

import numpy as np

from .curves import DiscountCurve, SurvivalCurve, default_distribution, forward_fixings
from .errors import InconsistentSpecs
from .pricers import (
    BondSpec,
    RepoSpec,
    forward_bond_price,
    mtm_profile,
    par_asw_spread,
    par_cancelable_asw_spread,
    par_cancelable_asw_spread_generalized,
    price_risky_bond,
)
from .schedule import Schedule

_FORWARD_PRICE_TOL = 1e-9


class Leg(Enum):
    BOND = "bond"
    REPO = "repo"
    ASSET_SWAP = "asset_swap"
    CDS = "cds"


class CashflowEntry(NamedTuple):
    time: float
    leg: Leg
    amount: float


@dataclass(frozen=True)
class DefaultScenario:
    """Default in bucket k (1-based, settled at t_k) or survival (bucket None)."""

    default_bucket: int | None
    probability: float

    @property
    def is_default(self) -> bool:
        return self.default_bucket is not None


@dataclass(frozen=True)
class CashflowLedger:
    """Every cashflow of one scenario, per leg, on the payment grid (plus t0)."""

    entries: tuple[CashflowEntry, ...]

    def pv(self, discount: DiscountCurve, leg: Leg | None = None) -> float:
        """Discounted value at t0 of the entries (of one leg, or all)."""
        return fsum(
            e.amount * discount.discount_factor(e.time)
            for e in self.entries
            if leg is None or e.leg is leg
        )

    def residual(self, discount: DiscountCurve) -> float:
        """Portfolio (bond + repo + asset swap) minus CDS, discounted to t0."""
        return fsum(
            (-e.amount if e.leg is Leg.CDS else e.amount) * discount.discount_factor(e.time)
            for e in self.entries
        )


class ScenarioResidual(NamedTuple):
    default_bucket: int | None
    probability: float
    residual: float


@dataclass(frozen=True)
class ReplicationReport:
    """Residuals of the replica portfolio against the CDS, per scenario and expected."""

    clause_enabled: bool
    asw_spread: float
    cds_spread: float
    repo_spread: float
    repo_maturity: float
    forward_price: float
    scenarios: tuple[ScenarioResidual, ...]
    expected_residual: float
    max_abs_residual: float

    def to_dict(self) -> dict:
        return {
            "clause_enabled": self.clause_enabled,
            "asw_spread": self.asw_spread,
            "cds_spread": self.cds_spread,
            "repo_spread": self.repo_spread,
            "repo_maturity": self.repo_maturity,
            "forward_price": self.forward_price,
            "scenarios": [
                {
                    "default_bucket": s.default_bucket,
                    "probability": s.probability,
                    "residual": s.residual,
                }
                for s in self.scenarios
            ],
            "expected_residual": self.expected_residual,
            "max_abs_residual": self.max_abs_residual,
        }


class McCheckResult(NamedTuple):
    estimate: float
    std_error: float


def enumerate_scenarios(survival: SurvivalCurve, schedule: Schedule) -> list[DefaultScenario]:
    """All N + 1 scenarios: default buckets ascending, survival last."""
    dist = default_distribution(survival, schedule)
    scenarios = [
        DefaultScenario(default_bucket=k, probability=p)
        for k, p in enumerate(dist.bucket_probs, start=1)
    ]
    scenarios.append(DefaultScenario(default_bucket=None, probability=dist.survival_prob))
    return scenarios


def _resolve_repo(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo: RepoSpec,
) -> tuple[float, int, float]:
    """Repo maturity (on the grid), its 0-based index, and the forward price."""
    maturity = schedule.maturity if repo.maturity is None else repo.maturity
    idx = schedule.index_at(maturity)
    maturity = schedule.dates[idx]
    at_bond_maturity = idx == schedule.n_periods - 1
    if repo.forward_price is None:
        price = 1.0 if at_bond_maturity else forward_bond_price(
            discount, survival, schedule, bond, maturity
        )
    else:
        price = repo.forward_price
        if at_bond_maturity and abs(price - 1.0) > _FORWARD_PRICE_TOL:
            raise InconsistentSpecs(
                f"repo to maturity must use forward price 1, got {price}"
            )
    if price <= 0.0:
        raise InconsistentSpecs(f"forward price must be positive, got {price}")
    return maturity, idx, price


@dataclass(frozen=True)
class _LedgerInputs:
    """Per-market quantities shared by every scenario's ledger."""

    schedule: Schedule
    bond: BondSpec
    repo_spread: float
    maturity: float
    last_period: int  # 1-based count of periods the portfolio runs
    fwd_price: float
    terminal_price: float  # bond value at unwind on survival
    bond_price: float
    eps: tuple[float, ...]
    mtm_values: tuple[float, ...] | None  # close-outs, only without the clause
    asw_spread: float
    cds_spread: float
    clause_enabled: bool


def _prepare_inputs(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo: RepoSpec,
    asw_spread: float,
    cds_spread: float,
    clause_enabled: bool,
) -> _LedgerInputs:
    maturity, idx, fwd_price = _resolve_repo(discount, survival, schedule, bond, repo)
    last_period = idx + 1
    if not clause_enabled and last_period != schedule.n_periods:
        raise InconsistentSpecs(
            "close-out at default (no clause) is only defined for a repo to maturity"
        )
    terminal_price = 1.0 if last_period == schedule.n_periods else forward_bond_price(
        discount, survival, schedule, bond, maturity
    )
    return _LedgerInputs(
        schedule=schedule,
        bond=bond,
        repo_spread=repo.spread,
        maturity=maturity,
        last_period=last_period,
        fwd_price=fwd_price,
        terminal_price=terminal_price,
        bond_price=price_risky_bond(discount, survival, schedule, bond),
        eps=forward_fixings(discount, schedule),
        mtm_values=(
            None
            if clause_enabled
            else mtm_profile(discount, schedule, bond, asw_spread).values
        ),
        asw_spread=asw_spread,
        cds_spread=cds_spread,
        clause_enabled=clause_enabled,
    )


def _scenario_entries(inputs: _LedgerInputs, scenario: DefaultScenario) -> tuple[CashflowEntry, ...]:
    schedule = inputs.schedule
    bond = inputs.bond
    bucket = scenario.default_bucket
    if bucket is not None and bucket > inputs.last_period:
        bucket = None  # default after unwind: the portfolio never sees it

    entries = [
        CashflowEntry(schedule.t0, Leg.BOND, -inputs.bond_price),
        CashflowEntry(schedule.t0, Leg.REPO, inputs.fwd_price),
        CashflowEntry(schedule.t0, Leg.ASSET_SWAP, inputs.bond_price - inputs.fwd_price),
    ]

    surviving_periods = inputs.last_period if bucket is None else bucket - 1
    for k in range(1, surviving_periods + 1):
        t = schedule.dates[k - 1]
        theta = schedule.accruals[k - 1]
        e = inputs.eps[k - 1]
        entries.append(CashflowEntry(t, Leg.BOND, bond.coupon * theta))
        entries.append(CashflowEntry(t, Leg.REPO, (-e + inputs.repo_spread) * theta))
        entries.append(
            CashflowEntry(t, Leg.ASSET_SWAP, (-bond.coupon + e + inputs.asw_spread) * theta)
        )
        entries.append(CashflowEntry(t, Leg.CDS, inputs.cds_spread * theta))

    if bucket is None:
        entries.append(CashflowEntry(inputs.maturity, Leg.BOND, inputs.terminal_price))
        entries.append(CashflowEntry(inputs.maturity, Leg.REPO, -inputs.fwd_price))
    else:
        t = schedule.dates[bucket - 1]
        rolled = 1.0 + inputs.eps[bucket - 1] * schedule.accruals[bucket - 1]
        entries.append(CashflowEntry(t, Leg.BOND, bond.recovery * rolled))
        entries.append(CashflowEntry(t, Leg.REPO, -rolled))
        if inputs.mtm_values is not None:
            entries.append(CashflowEntry(t, Leg.ASSET_SWAP, inputs.mtm_values[bucket - 1]))
        entries.append(CashflowEntry(t, Leg.CDS, -bond.lgd * rolled))

    return tuple(entries)


def portfolio_ledger(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo: RepoSpec,
    asw_spread: float,
    cds_spread: float,
    clause_enabled: bool,
    scenario: DefaultScenario,
) -> CashflowLedger:
    """Materialize every cashflow of the replica and the CDS for one scenario.

    The asset swap and the CDS mature with the repo; a default after the repo
    maturity never touches the (already unwound) portfolio.
    """
    inputs = _prepare_inputs(
        discount, survival, schedule, bond, repo, asw_spread, cds_spread, clause_enabled
    )
    return CashflowLedger(entries=_scenario_entries(inputs, scenario))


def replication_report(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo: RepoSpec,
    clause_enabled: bool,
) -> ReplicationReport:
    """Price the replica at par spreads and check it scenario by scenario.

    The asset swap spread is the par value of the swap actually traded
    (break-clause if the clause is on, standard otherwise) and the CDS runs
    at that spread plus the repo spread. With the clause on, every scenario
    residual vanishes; without it, the default scenarios leak the discounted
    close-out amounts.
    """
    maturity, idx, fwd_price = _resolve_repo(discount, survival, schedule, bond, repo)
    if clause_enabled and idx + 1 < schedule.n_periods:
        asw_spread = par_cancelable_asw_spread_generalized(
            discount, survival, schedule, bond, maturity, fwd_price
        ).spread
    elif clause_enabled:
        asw_spread = par_cancelable_asw_spread(discount, survival, schedule, bond).spread
    else:
        asw_spread = par_asw_spread(discount, survival, schedule, bond).spread
    cds_spread = asw_spread + repo.spread

    resolved = RepoSpec(spread=repo.spread, maturity=maturity, forward_price=fwd_price)
    inputs = _prepare_inputs(
        discount, survival, schedule, bond, resolved, asw_spread, cds_spread, clause_enabled
    )
    dfs = {schedule.t0: discount.discount_factor(schedule.t0)}
    dfs.update((t, discount.discount_factor(t)) for t in schedule.dates)
    rows = []
    for scenario in enumerate_scenarios(survival, schedule):
        entries = _scenario_entries(inputs, scenario)
        residual = fsum(
            (-e.amount if e.leg is Leg.CDS else e.amount) * dfs[e.time] for e in entries
        )
        rows.append(
            ScenarioResidual(
                default_bucket=scenario.default_bucket,
                probability=scenario.probability,
                residual=residual,
            )
        )
    expected = fsum(r.probability * r.residual for r in rows)
    return ReplicationReport(
        clause_enabled=clause_enabled,
        asw_spread=asw_spread,
        cds_spread=cds_spread,
        repo_spread=repo.spread,
        repo_maturity=maturity,
        forward_price=fwd_price,
        scenarios=tuple(rows),
        expected_residual=expected,
        max_abs_residual=max(abs(r.residual) for r in rows),
    )


def mc_check(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo: RepoSpec,
    clause_enabled: bool,
    n_paths: int,
    seed: int,
) -> McCheckResult:
    """Sampling cross-check of the enumeration: mean and standard error of the residual.

    Default buckets are drawn with a counter-based generator (Philox keyed on
    the seed), so draw i is a pure function of (seed, i): results are bitwise
    reproducible for a given seed regardless of how paths are evaluated.
    """
    if n_paths < 1000:
        raise ValueError(f"need at least 1000 paths, got {n_paths}")
    report = replication_report(discount, survival, schedule, bond, repo, clause_enabled)
    residuals = np.array([r.residual for r in report.scenarios])
    cumulative = np.cumsum([r.probability for r in report.scenarios])
    cumulative[-1] = 1.0  # guard the top bucket against rounding
    uniforms = np.random.Generator(np.random.Philox(key=seed)).random(n_paths)
    sampled = residuals[np.searchsorted(cumulative, uniforms, side="right")]
    estimate = float(sampled.mean())
    std_error = float(sampled.std(ddof=1) / math.sqrt(n_paths))
    return McCheckResult(estimate=estimate, std_error=std_error)
