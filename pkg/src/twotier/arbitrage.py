"""Execution routing and NAV arbitrage.

The router prices three ways of moving in or out of a composite position:
trading it directly against its pool, redeeming and selling the elements, or
buying elements and minting. The arbitrage planner chains the element-side
route with the opposite direct trade to monetize premium or discount, sizing
the trade on the unimodal profit curve that constant-product impact creates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .amm import SwapDirection
from .errors import AmmError, CompositeError, MissingPrice, NoExecutablePath, StalePlan
from .market import Market
from .pricing import nav_report


class RouteKind(str, Enum):
    DIRECT_W = "direct_w"
    REDEEM_THEN_SELL_ELEMENTS = "redeem_then_sell_elements"
    BUY_ELEMENTS_THEN_MINT_W = "buy_elements_then_mint_w"


class Side(str, Enum):
    ACQUIRE_W = "acquire"
    DISPOSE_W = "dispose"


@dataclass
class Leg:
    op: str                      # "swap" | "mint_composite" | "redeem_composite"
    params: dict
    expected: dict


@dataclass
class Route:
    kind: RouteKind
    legs: list[Leg]


@dataclass
class ExecutionPlan:
    route: Route
    side: Side
    quantity_w: int
    simulated_cost_or_proceeds: int   # numeraire: cost for acquire, proceeds for dispose
    expected_profit: int | None = None


@dataclass
class ExecutionResult:
    realized_profit: int
    legs_executed: int


# --- route simulation (pure, state-dependent quotes only) ---

def _acquire_direct(market: Market, asset, q: int) -> Route | None:
    pool = market.venues.pool_for(asset.composite)
    if pool is None:
        return None
    try:
        d = market.venues.required_in_for_out(pool.pool_id, SwapDirection.NUMERAIRE_IN, q)
        quote = market.venues.quote_exact_in(pool.pool_id, SwapDirection.NUMERAIRE_IN, d)
    except AmmError:
        return None
    leg = Leg("swap", {"pool": pool.pool_id, "direction": SwapDirection.NUMERAIRE_IN,
                       "amount_in": d},
              {"amount_out": quote.amount_out})
    return Route(RouteKind.DIRECT_W, [leg])


def _acquire_via_elements(market: Market, asset, q: int) -> Route | None:
    try:
        needs = market.composites.required_deposit(asset.composite, q)
    except CompositeError:
        return None
    legs = []
    for element, need in needs:
        pool = market.venues.pool_for(element)
        if pool is None:
            return None
        try:
            d = market.venues.required_in_for_out(
                pool.pool_id, SwapDirection.NUMERAIRE_IN, need)
            quote = market.venues.quote_exact_in(
                pool.pool_id, SwapDirection.NUMERAIRE_IN, d)
        except AmmError:
            return None
        legs.append(Leg("swap", {"pool": pool.pool_id,
                                 "direction": SwapDirection.NUMERAIRE_IN,
                                 "amount_in": d},
                        {"amount_out": quote.amount_out}))
    legs.append(Leg("mint_composite", {"asset": asset.composite, "q": q},
                    {"deposits": needs}))
    return Route(RouteKind.BUY_ELEMENTS_THEN_MINT_W, legs)


def _dispose_direct(market: Market, asset, q: int) -> Route | None:
    pool = market.venues.pool_for(asset.composite)
    if pool is None:
        return None
    try:
        quote = market.venues.quote_exact_in(pool.pool_id, SwapDirection.BASE_IN, q)
    except AmmError:
        return None
    leg = Leg("swap", {"pool": pool.pool_id, "direction": SwapDirection.BASE_IN,
                       "amount_in": q},
              {"amount_out": quote.amount_out})
    return Route(RouteKind.DIRECT_W, [leg])


def _dispose_via_elements(market: Market, asset, q: int) -> Route | None:
    try:
        payouts = market.composites.redemption_value(asset.composite, q)
    except CompositeError:
        return None
    legs = [Leg("redeem_composite", {"asset": asset.composite, "q": q},
                {"basket_out": payouts})]
    for element, payout in payouts:
        if payout == 0:
            continue
        pool = market.venues.pool_for(element)
        if pool is None:
            return None
        try:
            quote = market.venues.quote_exact_in(
                pool.pool_id, SwapDirection.BASE_IN, payout)
        except AmmError:
            return None
        legs.append(Leg("swap", {"pool": pool.pool_id,
                                 "direction": SwapDirection.BASE_IN,
                                 "amount_in": payout},
                        {"amount_out": quote.amount_out}))
    return Route(RouteKind.REDEEM_THEN_SELL_ELEMENTS, legs)


def _route_cost(route: Route) -> int:
    """Numeraire spent on swaps (acquire routes only buy with numeraire)."""
    return sum(leg.params["amount_in"] for leg in route.legs
               if leg.op == "swap" and leg.params["direction"] == SwapDirection.NUMERAIRE_IN)


def _route_proceeds(route: Route) -> int:
    return sum(leg.expected["amount_out"] for leg in route.legs
               if leg.op == "swap" and leg.params["direction"] == SwapDirection.BASE_IN)


def simulate_routes(market: Market, asset_id: str, side: Side,
                    quantity_w: int) -> list[ExecutionPlan]:
    """All executable route plans for the request, in route-kind order."""
    asset = market.composites.get(asset_id)
    plans = []
    if side == Side.ACQUIRE_W:
        candidates = [_acquire_direct(market, asset, quantity_w),
                      _acquire_via_elements(market, asset, quantity_w)]
        for route in candidates:
            if route is not None:
                plans.append(ExecutionPlan(route, side, quantity_w,
                                           _route_cost(route)))
    else:
        candidates = [_dispose_direct(market, asset, quantity_w),
                      _dispose_via_elements(market, asset, quantity_w)]
        for route in candidates:
            if route is not None:
                plans.append(ExecutionPlan(route, side, quantity_w,
                                           _route_proceeds(route)))
    return plans


def best_route(market: Market, asset_id: str, side: Side,
               quantity_w: int) -> ExecutionPlan:
    """Cheapest acquisition or richest disposal among executable routes.

    Ties go to the earlier route kind (direct trade first).
    """
    plans = simulate_routes(market, asset_id, side, quantity_w)
    if not plans:
        raise NoExecutablePath(f"{side.value} {quantity_w} of {asset_id}")
    if side == Side.ACQUIRE_W:
        return min(plans, key=lambda p: p.simulated_cost_or_proceeds)
    return max(plans, key=lambda p: p.simulated_cost_or_proceeds)


# --- arbitrage ---

def _cycle_plan(market: Market, asset_id: str, q: int,
                positive_premium: bool) -> ExecutionPlan | None:
    """One round trip sized q: element route on one side, direct trade on the other."""
    asset = market.composites.get(asset_id)
    if positive_premium:
        acquire = _acquire_via_elements(market, asset, q)
        dispose = _dispose_direct(market, asset, q)
        if acquire is None or dispose is None:
            return None
        legs = acquire.legs + dispose.legs
        kind = RouteKind.BUY_ELEMENTS_THEN_MINT_W
        profit = _route_proceeds(dispose) - _route_cost(acquire)
        proceeds = _route_proceeds(dispose)
    else:
        acquire = _acquire_direct(market, asset, q)
        dispose = _dispose_via_elements(market, asset, q)
        if acquire is None or dispose is None:
            return None
        legs = acquire.legs + dispose.legs
        kind = RouteKind.REDEEM_THEN_SELL_ELEMENTS
        profit = _route_proceeds(dispose) - _route_cost(acquire)
        proceeds = _route_proceeds(dispose)
    return ExecutionPlan(Route(kind, legs), Side.DISPOSE_W, q, proceeds,
                         expected_profit=profit)


def detect_arbitrage(market: Market, asset_id: str, min_profit: int = 1,
                     max_size: int = 1 << 30) -> ExecutionPlan | None:
    """Best profitable premium/discount round trip, or None.

    Size search: geometric sweep to bracket the unimodal profit curve, then
    ternary refinement on the bracket.
    """
    try:
        report = nav_report(market.composites.get(asset_id), market.venues)
    except (MissingPrice, CompositeError):
        return None
    if report.premium_bps == 0:
        return None
    positive = report.premium_bps > 0

    def profit(q: int) -> int:
        if q < 1 or q > max_size:
            return -(1 << 62)
        plan = _cycle_plan(market, asset_id, q, positive)
        return plan.expected_profit if plan is not None else -(1 << 62)

    best_q, best_p = 0, -(1 << 62)
    q = 1
    while q <= max_size:
        p = profit(q)
        if p > best_p:
            best_q, best_p = q, p
        q *= 2
    if best_q == 0:
        return None

    lo, hi = max(1, best_q // 2), min(max_size, best_q * 2)
    while hi - lo > 3:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if profit(m1) < profit(m2):
            lo = m1 + 1
        else:
            hi = m2
    for q in range(lo, hi + 1):
        p = profit(q)
        if p > best_p:
            best_q, best_p = q, p

    if best_p < min_profit:
        return None
    return _cycle_plan(market, asset_id, best_q, positive)


# --- execution ---

def execute_plan(market: Market, plan: ExecutionPlan | None, account: str) -> ExecutionResult:
    """Run every leg atomically; any deviation from the simulation aborts.

    The caller's numeraire delta is the realized profit (meaningful for
    arbitrage cycle plans; for one-sided plans it is the signed cash flow).
    """
    if plan is None or not plan.route.legs:
        return ExecutionResult(realized_profit=0, legs_executed=0)
    reg = market.registry
    before = reg.balance_of(market.numeraire, account)
    with reg.transaction():
        for leg in plan.route.legs:
            try:
                if leg.op == "swap":
                    quote = market.venues.swap_exact_in(
                        leg.params["pool"], leg.params["direction"],
                        leg.params["amount_in"], account)
                    if quote.amount_out != leg.expected["amount_out"]:
                        raise StalePlan(
                            f"swap {leg.params['pool']}: expected "
                            f"{leg.expected['amount_out']}, got {quote.amount_out}")
                elif leg.op == "mint_composite":
                    market.composites.mint_composite(
                        leg.params["asset"], account, leg.params["q"])
                elif leg.op == "redeem_composite":
                    receipt = market.composites.redeem_composite(
                        leg.params["asset"], account, leg.params["q"])
                    if receipt.basket_out != leg.expected["basket_out"]:
                        raise StalePlan(f"redeem {leg.params['asset']}: basket changed")
                else:
                    raise StalePlan(f"unknown leg op {leg.op!r}")
            except StalePlan:
                raise
            except Exception as exc:
                raise StalePlan(f"leg failed: {exc}") from exc
        after = reg.balance_of(market.numeraire, account)
        realized = after - before
        if plan.expected_profit is not None and realized != plan.expected_profit:
            raise StalePlan(
                f"profit drifted: expected {plan.expected_profit}, got {realized}")
    return ExecutionResult(realized_profit=realized, legs_executed=len(plan.route.legs))
