"""Payment grid shared by every instrument.

Times are year fractions from the anchor t0 (no calendar dates); the
accrual of period k is exactly t_k - t_{k-1}. Business-day calendars,
stubs, and roll conventions are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidFrequency, InvalidInterval, MaturityNotOnGrid, NonIntegralPeriods

VALID_FREQUENCIES = (1, 2, 4, 12)

_GRID_TOL = 1e-9
_ACCRUAL_TOL = 1e-12


@dataclass(frozen=True)
class Schedule:
    """Payment dates t_1 < ... < t_N with accruals theta_k = t_k - t_{k-1}.

    Immutable after construction; safe to share across threads.
    """

    t0: float
    dates: tuple[float, ...]
    accruals: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dates", tuple(float(t) for t in self.dates))
        object.__setattr__(self, "accruals", tuple(float(a) for a in self.accruals))
        if not self.dates:
            raise ValueError("schedule needs at least one payment date")
        if len(self.dates) != len(self.accruals):
            raise ValueError("dates and accruals must have the same length")
        prev = self.t0
        for t, theta in zip(self.dates, self.accruals):
            if t <= prev:
                raise ValueError("dates must be strictly increasing and after t0")
            if theta <= 0.0:
                raise ValueError("accruals must be positive")
            if abs(theta - (t - prev)) > _ACCRUAL_TOL:
                raise ValueError(f"accrual {theta} does not match date gap {t - prev}")
            prev = t

    @property
    def n_periods(self) -> int:
        return len(self.dates)

    @property
    def maturity(self) -> float:
        return self.dates[-1]

    def index_at(self, t: float, tol: float = _GRID_TOL) -> int:
        """0-based index of the payment date equal to t (within tol)."""
        for i, date in enumerate(self.dates):
            if abs(date - t) <= tol:
                return i
        raise MaturityNotOnGrid(f"time {t} is not a payment date of the schedule")


def build_schedule(t0: float, maturity: float, frequency: int) -> Schedule:
    """Build a regular grid with `frequency` payments per year.

    (maturity - t0) * frequency must be an integer (within 1e-9).
    """
    if frequency not in VALID_FREQUENCIES:
        raise InvalidFrequency(f"frequency must be one of {VALID_FREQUENCIES}, got {frequency}")
    if maturity <= t0:
        raise InvalidInterval(f"maturity {maturity} must exceed anchor {t0}")
    n_exact = (maturity - t0) * frequency
    n = round(n_exact)
    if abs(n_exact - n) > _GRID_TOL:
        raise NonIntegralPeriods(
            f"(maturity - t0) * frequency = {n_exact} is not an integer number of periods"
        )
    dt = 1.0 / frequency
    dates = tuple(t0 + k * dt for k in range(1, n + 1))
    return Schedule(t0=t0, dates=dates, accruals=(dt,) * n)


def truncate_schedule(schedule: Schedule, maturity: float) -> Schedule:
    """Prefix of the schedule ending at `maturity`, which must lie on the grid."""
    idx = schedule.index_at(maturity)
    return Schedule(
        t0=schedule.t0,
        dates=schedule.dates[: idx + 1],
        accruals=schedule.accruals[: idx + 1],
    )
