import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SOLAR_COMPOSITION, make_solar_market, seed_solar_pools
from twotier.composite import AssetDefinition
from twotier.errors import MissingPrice
from twotier.pricing import nav, nav_report, premium_bps


def make_asset(composition):
    return AssetDefinition(composite="W", composition=list(composition),
                           mint_fee_bps=0, redeem_fee_bps=0,
                           escrow="escrow:W", fee_sink="fee_sink:W", unit=1)


SOLAR = make_asset(SOLAR_COMPOSITION)


def test_nav_unit_prices():
    prices = {"energy": Fraction(1), "land": Fraction(1), "carbon": Fraction(1)}
    assert nav(SOLAR, prices) == 1200


def test_nav_mixed_prices():
    prices = {"energy": Fraction(3), "land": Fraction(1, 2), "carbon": Fraction(10)}
    assert nav(SOLAR, prices) == 100 * 3 + Fraction(1000, 2) + 100 * 10


def test_nav_missing_price():
    with pytest.raises(MissingPrice):
        nav(SOLAR, {"energy": Fraction(1), "land": Fraction(1)})


def test_nav_dot_product_oracle():
    # independent evaluation: sum of amount * price as plain Fractions
    rng = random.Random(0xFEED)
    for _ in range(1000):
        comp = [(f"e{i}", rng.randint(1, 10 ** 6)) for i in range(rng.randint(1, 6))]
        prices = {el: Fraction(rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 6))
                  for el, _ in comp}
        expected = sum((qty * prices[el] for el, qty in comp), Fraction(0))
        assert nav(make_asset(comp), prices) == expected


def test_premium_at_par_is_zero():
    assert premium_bps(Fraction(1200), Fraction(1200)) == 0


def test_premium_ten_percent():
    assert premium_bps(Fraction(1200) * Fraction(11, 10), Fraction(1200)) == 1000
    assert premium_bps(Fraction(1200) * Fraction(9, 10), Fraction(1200)) == -1000


def test_premium_rounds_half_away_from_zero():
    # 0.25bps -> 0;  0.5bps -> 1;  -0.5bps -> -1
    base = Fraction(10_000)
    assert premium_bps(base + Fraction(1, 4), base) == 0
    assert premium_bps(base + Fraction(1, 2), base) == 1
    assert premium_bps(base - Fraction(1, 2), base) == -1


def test_premium_requires_positive_nav():
    with pytest.raises(MissingPrice):
        premium_bps(Fraction(1), Fraction(0))


@given(spot=st.fractions(min_value=0, max_value=10 ** 9),
       navv=st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 9),
       scale=st.fractions(min_value=Fraction(1, 1000), max_value=1000))
@settings(max_examples=300, deadline=None)
def test_premium_scale_invariant(spot, navv, scale):
    assert premium_bps(spot * scale, navv * scale) == premium_bps(spot, navv)


@given(prices=st.lists(st.fractions(min_value=Fraction(1, 100), max_value=10 ** 6),
                       min_size=3, max_size=3),
       k=st.fractions(min_value=Fraction(1, 100), max_value=100))
@settings(max_examples=200, deadline=None)
def test_nav_homogeneity(prices, k):
    p = dict(zip(("energy", "land", "carbon"), prices))
    scaled = {el: v * k for el, v in p.items()}
    assert nav(SOLAR, scaled) == k * nav(SOLAR, p)


def test_nav_report_at_par():
    market, cid = make_solar_market()
    seed_solar_pools(market, w_premium_bps=0, pool_fee_bps=0)
    report = nav_report(market.composites.assets[cid], market.venues)
    assert report.nav == 1200
    assert report.composite_spot == 1200
    assert report.premium_bps == 0


def test_nav_report_seeded_premium():
    market, cid = make_solar_market()
    seed_solar_pools(market, w_premium_bps=500, pool_fee_bps=0)
    report = nav_report(market.composites.assets[cid], market.venues)
    assert abs(report.premium_bps - 500) <= 1


def test_nav_report_missing_composite_pool():
    market, cid = make_solar_market()
    # seed only the element pools
    from conftest import grant_elements
    market.registry.ensure_account("issuer")
    market.fund_numeraire("issuer", 10 ** 13)
    grant_elements(market, "issuer",
                   {"energy": 10 ** 8, "land": 10 ** 9, "carbon": 10 ** 8})
    market.venues.create_pool("energy", 0, 10 ** 8, 10 ** 8, "issuer")
    market.venues.create_pool("land", 0, 10 ** 9, 10 ** 9, "issuer")
    market.venues.create_pool("carbon", 0, 10 ** 8, 10 ** 8, "issuer")
    with pytest.raises(MissingPrice):
        nav_report(market.composites.assets[cid], market.venues)