from types import SimpleNamespace

import pytest

from cdsreplica import BondSpec, DiscountCurve, SurvivalCurve, build_schedule


@pytest.fixture
def f1():
    """Flat reference market: r = 2%, hazard = 2%, R = 40%, c = 5%, annual over 5y."""
    return SimpleNamespace(
        r=0.02,
        hazard=0.02,
        coupon=0.05,
        recovery=0.4,
        times=[1.0, 2.0, 3.0, 4.0, 5.0],
        discount=DiscountCurve.flat(0.02),
        survival=SurvivalCurve.flat(0.02),
        schedule=build_schedule(0.0, 5.0, 1),
        bond=BondSpec(coupon=0.05, recovery=0.4),
    )
