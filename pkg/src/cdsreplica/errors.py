"""Exception types raised across the library."""


class PricingError(ValueError):
    """Base class for all library-specific errors."""


class InvalidFrequency(PricingError):
    """Payment frequency outside the supported set {1, 2, 4, 12}."""


class NonIntegralPeriods(PricingError):
    """Maturity minus anchor is not an integer number of periods."""


class MaturityNotOnGrid(PricingError):
    """Requested maturity does not coincide with any payment date."""


class TimeBeforeAnchor(PricingError):
    """Query time precedes the curve anchor."""


class InvalidInterval(PricingError):
    """Degenerate or reversed time interval."""


class QuoteUnattainable(PricingError):
    """No hazard rate in the search bracket reproduces the quote."""


class DegenerateAnnuity(PricingError):
    """Annuity is zero or negative; par spread is undefined."""


class CrossedMarket(PricingError):
    """A bid quote exceeds its ask."""


class InconsistentSpecs(PricingError):
    """Repo, bond, and schedule parameters disagree."""


class ConfigError(PricingError):
    """Market configuration failed validation."""
