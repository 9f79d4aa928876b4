"""Closed-form pricers for the stylized bond, floater, swaps, and CDS.

All prices are per unit notional at the anchor t0, and all instruments share
one payment grid. The issuer may default only immediately before a payment
date; a default in period k is settled on t_k against the money-market-rolled
par claim, i.e. every default-contingent payment (bond and floater recovery,
CDS protection) is scaled by the period accrual (1 + eps_{k-1} * theta_k).
Discounted, such a payment is worth its amount times P(t_{k-1}). This is the
convention under which a floater with full recovery is worth par on every
reset date, which in turn makes the CDS and the break-clause asset swap
spreads coincide exactly rather than approximately.

Swap values are quoted from the bond holder's perspective: the holder pays
the bond coupon c, receives the floating fixing plus the spread, and settles
the bond's pull-to-par upfront.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum
from typing import NamedTuple, Sequence

from .curves import DiscountCurve, SurvivalCurve, default_distribution, forward_fixings
from .errors import CrossedMarket, DegenerateAnnuity
from .schedule import Schedule, truncate_schedule


@dataclass(frozen=True)
class BondSpec:
    """Fixed-coupon bullet bond of the defaultable issuer, unit notional."""

    coupon: float
    recovery: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.coupon):
            raise ValueError("coupon must be finite")
        if not 0.0 <= self.recovery <= 1.0:
            raise ValueError("recovery must lie in [0, 1]")

    @property
    def lgd(self) -> float:
        return 1.0 - self.recovery


@dataclass(frozen=True)
class RepoSpec:
    """Financing terms: periodic floating + spread against the bond, unit notional.

    maturity None means repo to maturity (the bond's last payment date);
    forward_price None means the fair value (1 at the bond's maturity, the
    survival-conditional forward bond price before it).
    """

    spread: float
    maturity: float | None = None
    forward_price: float | None = None


@dataclass(frozen=True)
class SpreadResult:
    """Par spread together with its decomposition numerator / annuity."""

    spread: float
    numerator: float
    annuity: float


@dataclass(frozen=True)
class MtmProfile:
    """Holder-side value of the remaining swap payments just before each t_k.

    values[k-1] covers payments at t_k..t_N, the period-k payment included:
    a default immediately before t_k cancels the payment otherwise due at t_k.
    """

    values: tuple[float, ...]


class ImpliedRepoSpreads(NamedTuple):
    repo: float
    reverse_repo: float


def _discounts(discount: DiscountCurve, schedule: Schedule) -> list[float]:
    """P(t0, t) at [t0, t_1, ..., t_N]."""
    return [discount.discount_factor(schedule.t0)] + [
        discount.discount_factor(t) for t in schedule.dates
    ]


def _survivals(survival: SurvivalCurve, schedule: Schedule) -> list[float]:
    """Q(t0, t) at [t0, t_1, ..., t_N]."""
    return [survival.survival_prob(schedule.t0)] + [
        survival.survival_prob(t) for t in schedule.dates
    ]


def price_riskfree_bond(discount: DiscountCurve, schedule: Schedule, coupon: float) -> float:
    """Sum of c * theta_k * P(t_k) plus P(t_N)."""
    dfs = _discounts(discount, schedule)
    coupons = fsum(
        coupon * theta * dfs[k]
        for k, theta in enumerate(schedule.accruals, start=1)
    )
    return coupons + dfs[-1]


def default_leg_pv(discount: DiscountCurve, survival: SurvivalCurve, schedule: Schedule) -> float:
    """PV of a unit payment on default, settled at the bucket's payment date.

    The settlement is grossed up by the period accrual (1 + eps * theta), so
    each bucket contributes P(t_{k-1}) * (Q(t_{k-1}) - Q(t_k)).
    """
    dfs = _discounts(discount, schedule)
    qs = _survivals(survival, schedule)
    return fsum(dfs[k - 1] * (qs[k - 1] - qs[k]) for k in range(1, len(dfs)))


def price_risky_bond(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
) -> float:
    """Coupons and principal while the issuer survives, recovery on default."""
    dfs = _discounts(discount, schedule)
    qs = _survivals(survival, schedule)
    coupons = fsum(
        bond.coupon * theta * dfs[k] * qs[k]
        for k, theta in enumerate(schedule.accruals, start=1)
    )
    return coupons + dfs[-1] * qs[-1] + bond.recovery * default_leg_pv(discount, survival, schedule)


def price_risky_floater(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    recovery: float,
) -> float:
    """Floating-rate note of the same issuer: fixings + principal, recovery on default."""
    dfs = _discounts(discount, schedule)
    qs = _survivals(survival, schedule)
    eps = forward_fixings(discount, schedule)
    coupons = fsum(
        eps[k - 1] * theta * dfs[k] * qs[k]
        for k, theta in enumerate(schedule.accruals, start=1)
    )
    return coupons + dfs[-1] * qs[-1] + recovery * default_leg_pv(discount, survival, schedule)


def annuity_riskfree(discount: DiscountCurve, schedule: Schedule) -> float:
    """PV of a unit spread paid on every date: sum of theta_k * P(t_k)."""
    dfs = _discounts(discount, schedule)
    return fsum(theta * dfs[k] for k, theta in enumerate(schedule.accruals, start=1))


def annuity_defaultable(
    discount: DiscountCurve, survival: SurvivalCurve, schedule: Schedule
) -> float:
    """PV of a unit spread paid while the issuer survives: sum of theta_k * P_k * Q_k."""
    dfs = _discounts(discount, schedule)
    qs = _survivals(survival, schedule)
    return fsum(theta * dfs[k] * qs[k] for k, theta in enumerate(schedule.accruals, start=1))


def par_cds_spread(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    recovery: float,
) -> SpreadResult:
    """Spread equating the premium leg to the protection leg LGD * default_leg_pv."""
    annuity = annuity_defaultable(discount, survival, schedule)
    if annuity <= 0.0:
        raise DegenerateAnnuity(f"defaultable annuity {annuity} is not positive")
    numerator = (1.0 - recovery) * default_leg_pv(discount, survival, schedule)
    return SpreadResult(spread=numerator / annuity, numerator=numerator, annuity=annuity)


def par_asw_spread(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
) -> SpreadResult:
    """Standard asset swap: (risk-free bond - risky bond) over the risk-free annuity."""
    annuity = annuity_riskfree(discount, schedule)
    numerator = price_riskfree_bond(discount, schedule, bond.coupon) - price_risky_bond(
        discount, survival, schedule, bond
    )
    return SpreadResult(spread=numerator / annuity, numerator=numerator, annuity=annuity)


def par_cancelable_asw_spread(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
) -> SpreadResult:
    """Asset swap killed at default with zero close-out: (1 - floater) over the defaultable annuity."""
    annuity = annuity_defaultable(discount, survival, schedule)
    if annuity <= 0.0:
        raise DegenerateAnnuity(f"defaultable annuity {annuity} is not positive")
    numerator = 1.0 - price_risky_floater(discount, survival, schedule, bond.recovery)
    return SpreadResult(spread=numerator / annuity, numerator=numerator, annuity=annuity)


def _swap_payments(
    discount: DiscountCurve, schedule: Schedule, bond: BondSpec, spread: float
) -> list[float]:
    """Discounted holder-side swap payment of each period: (-c + eps + s) * theta * P."""
    dfs = _discounts(discount, schedule)
    eps = forward_fixings(discount, schedule)
    return [
        (-bond.coupon + eps[k - 1] + spread) * theta * dfs[k]
        for k, theta in enumerate(schedule.accruals, start=1)
    ]


def standard_asw_pv(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    spread: float,
) -> float:
    """Holder PV of the standard asset swap package at the given spread.

    The swap runs to t_N regardless of default; the upfront is the
    pull-to-par of the bond.
    """
    upfront = price_risky_bond(discount, survival, schedule, bond) - 1.0
    return fsum(_swap_payments(discount, schedule, bond, spread)) + upfront


def cancelable_asw_pv(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    spread: float,
) -> float:
    """Holder PV of the break-clause asset swap: payments gated on survival."""
    qs = _survivals(survival, schedule)
    payments = _swap_payments(discount, schedule, bond, spread)
    upfront = price_risky_bond(discount, survival, schedule, bond) - 1.0
    return fsum(p * qs[k] for k, p in enumerate(payments, start=1)) + upfront


def mtm_profile(
    discount: DiscountCurve, schedule: Schedule, bond: BondSpec, spread: float
) -> MtmProfile:
    """Value at each t_k (just before payment) of the remaining swap payments.

    Deterministic rates make the conditional expectation a plain discounted
    tail sum: values[k-1] = sum over h >= k of (-c + eps + s) * theta_h * P(t_k, t_h).
    """
    dfs = _discounts(discount, schedule)
    payments = _swap_payments(discount, schedule, bond, spread)
    values = [0.0] * len(payments)
    tail = 0.0
    for k in range(len(payments), 0, -1):
        tail += payments[k - 1]
        values[k - 1] = tail / dfs[k]
    return MtmProfile(values=tuple(values))


def crossed_tail_sum(outer: Sequence[float], inner: Sequence[float]) -> float:
    """Sum over k of outer[k] times the tail sum of inner from k onward."""
    if len(outer) != len(inner):
        raise ValueError("outer and inner must have the same length")
    tails = [0.0] * len(inner)
    tail = 0.0
    for k in range(len(inner), 0, -1):
        tail += inner[k - 1]
        tails[k - 1] = tail
    return fsum(o * t for o, t in zip(outer, tails))


def early_termination_pv(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    spread: float,
) -> float:
    """Expected holder P&L of the zero-close-out break clause.

    Minus the probability-weighted discounted mark-to-market forfeited at
    default; the difference of a unilateral DVA and CVA, both under the
    issuer's default law.
    """
    probs = default_distribution(survival, schedule).bucket_probs
    payments = _swap_payments(discount, schedule, bond, spread)
    return -crossed_tail_sum(probs, payments)


def forward_bond_price(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo_maturity: float,
) -> float:
    """Bond value at repo maturity conditional on the issuer surviving to it.

    Curves restrict to [T_r, t_N] via the ratios P(t0, t) / P(t0, T_r) and
    Q(t0, t) / Q(t0, T_r); at T_r = t_N this is the unit redemption.
    """
    idx = schedule.index_at(repo_maturity)
    if idx == schedule.n_periods - 1:
        return 1.0
    dfs = _discounts(discount, schedule)
    qs = _survivals(survival, schedule)
    df_r = dfs[idx + 1]
    q_r = qs[idx + 1]
    coupons = fsum(
        bond.coupon * schedule.accruals[k - 1] * dfs[k] * qs[k]
        for k in range(idx + 2, len(dfs))
    )
    recovery = fsum(
        dfs[k - 1] * (qs[k - 1] - qs[k]) for k in range(idx + 2, len(dfs))
    )
    return (coupons + dfs[-1] * qs[-1] + bond.recovery * recovery) / (df_r * q_r)


def par_cancelable_asw_spread_generalized(
    discount: DiscountCurve,
    survival: SurvivalCurve,
    schedule: Schedule,
    bond: BondSpec,
    repo_maturity: float,
    forward_price: float,
) -> SpreadResult:
    """Break-clause asset swap par spread when the repo ends at T_r <= t_N.

    (X - floater(T_r)) over the defaultable annuity to T_r; reduces to the
    plain break-clause spread at T_r = t_N with X = 1.
    """
    truncated = truncate_schedule(schedule, repo_maturity)
    annuity = annuity_defaultable(discount, survival, truncated)
    if annuity <= 0.0:
        raise DegenerateAnnuity(f"defaultable annuity {annuity} is not positive")
    numerator = forward_price - price_risky_floater(discount, survival, truncated, bond.recovery)
    return SpreadResult(spread=numerator / annuity, numerator=numerator, annuity=annuity)


def implied_repo_spreads(
    cds_bid: float, cds_ask: float, aswc_bid: float, aswc_ask: float
) -> ImpliedRepoSpreads:
    """Repo and reverse-repo spreads implied by CDS and break-clause ASW quotes."""
    if cds_bid > cds_ask:
        raise CrossedMarket(f"cds bid {cds_bid} exceeds ask {cds_ask}")
    if aswc_bid > aswc_ask:
        raise CrossedMarket(f"asw bid {aswc_bid} exceeds ask {aswc_ask}")
    return ImpliedRepoSpreads(repo=cds_ask - aswc_bid, reverse_repo=cds_bid - aswc_ask)
