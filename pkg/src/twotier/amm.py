"""Constant-product pools pairing a token against the numeraire.

Reserves live in a registry account per pool, so ledger conservation covers
them automatically. Swap output uses the closed form floor(y*e/(x+e)) with
the fee taken from the input side; the fee stays in the pool, so the
reserve product never decreases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DrainedPool, DuplicatePool, UnknownPool, ZeroInput
from .ledger import AccountRole, Registry, TokenKind, TokenMeta, check_amount

BPS = 10_000


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class SwapDirection(str, Enum):
    BASE_IN = "base_in"
    NUMERAIRE_IN = "numeraire_in"


@dataclass
class SwapQuote:
    direction: SwapDirection
    amount_in: int
    amount_out: int
    fee_paid: int
    spot_price_before: Fraction
    spot_price_after: Fraction
    price_impact_bps: int


@dataclass
class Pool:
    pool_id: str
    base: str
    fee_bps: int
    lp_token: str
    account: str


class AmmVenues:
    """All pools of one market; every pool quotes base against the numeraire."""

    AUTHORITY = "amm-venues"

    def __init__(self, registry: Registry, numeraire: str):
        self.registry = registry
        self.numeraire = numeraire
        self.pools: dict[str, Pool] = {}
        self._by_base: dict[str, str] = {}

    # --- admin ---

    def create_pool(self, base: str, fee_bps: int, seed_base: int, seed_numeraire: int,
                    provider: str) -> Pool:
        if base in self._by_base:
            raise DuplicatePool(base)
        if not (0 <= fee_bps < BPS):
            raise ValueError(f"fee_bps out of range: {fee_bps}")
        if check_amount(seed_base) == 0 or check_amount(seed_numeraire) == 0:
            raise ZeroInput("pool seeds must be positive")
        pool_id = f"pool:{base}"
        lp_token = self.registry.create_token(
            TokenMeta(token=f"lp:{base}", kind=TokenKind.LP_SHARE, decimals=0),
            authority=self.AUTHORITY)
        account = self.registry.create_account(f"pool_account:{base}", AccountRole.USER)
        pool = Pool(pool_id=pool_id, base=base, fee_bps=fee_bps,
                    lp_token=lp_token, account=account)
        with self.registry.transaction():
            self.registry.transfer(base, provider, account, seed_base)
            self.registry.transfer(self.numeraire, provider, account, seed_numeraire)
            self.registry.mint(lp_token, provider,
                               math.isqrt(seed_base * seed_numeraire), self.AUTHORITY)
        self.pools[pool_id] = pool
        self._by_base[base] = pool_id
        return pool

    def get(self, pool_id: str) -> Pool:
        try:
            return self.pools[pool_id]
        except KeyError:
            raise UnknownPool(pool_id) from None

    def pool_for(self, base: str) -> Pool | None:
        pid = self._by_base.get(base)
        return self.pools[pid] if pid else None

    # --- views ---

    def reserves(self, pool_id: str) -> tuple[int, int]:
        pool = self.get(pool_id)
        return (self.registry.balance_of(pool.base, pool.account),
                self.registry.balance_of(self.numeraire, pool.account))

    def lp_supply(self, pool_id: str) -> int:
        return self.registry.total_supply(self.get(pool_id).lp_token)

    def spot_price(self, pool_id: str) -> Fraction:
        rb, rn = self.reserves(pool_id)
        return Fraction(rn, rb)

    # --- swaps ---

    def quote_exact_in(self, pool_id: str, direction: SwapDirection,
                       amount_in: int) -> SwapQuote:
        pool = self.get(pool_id)
        if check_amount(amount_in) == 0:
            raise ZeroInput(pool_id)
        rb, rn = self.reserves(pool_id)
        x, y = (rb, rn) if direction == SwapDirection.BASE_IN else (rn, rb)
        e = amount_in * (BPS - pool.fee_bps) // BPS
        out = y * e // (x + e)
        if out >= y:
            raise DrainedPool(pool_id)
        before = Fraction(rn, rb)
        if direction == SwapDirection.BASE_IN:
            after = Fraction(rn - out, rb + amount_in)
        else:
            after = Fraction(rn + amount_in, rb - out)
        impact = abs(after - before) / before * BPS
        return SwapQuote(direction=direction, amount_in=amount_in, amount_out=out,
                         fee_paid=amount_in - e, spot_price_before=before,
                         spot_price_after=after,
                         price_impact_bps=int(impact))

    def swap_exact_in(self, pool_id: str, direction: SwapDirection, amount_in: int,
                      trader: str) -> SwapQuote:
        quote = self.quote_exact_in(pool_id, direction, amount_in)
        pool = self.get(pool_id)
        tok_in, tok_out = ((pool.base, self.numeraire)
                           if direction == SwapDirection.BASE_IN
                           else (self.numeraire, pool.base))
        with self.registry.transaction():
            self.registry.transfer(tok_in, trader, pool.account, amount_in)
            self.registry.transfer(tok_out, pool.account, trader, quote.amount_out)
        return quote

    def required_in_for_out(self, pool_id: str, direction: SwapDirection,
                            amount_out: int) -> int:
        """Smallest input such that swap_exact_in delivers >= amount_out."""
        pool = self.get(pool_id)
        if check_amount(amount_out) == 0:
            raise ZeroInput(pool_id)
        rb, rn = self.reserves(pool_id)
        x, y = (rb, rn) if direction == SwapDirection.BASE_IN else (rn, rb)
        if amount_out >= y:
            raise DrainedPool(pool_id)
        e_min = ceil_div(amount_out * x, y - amount_out)
        return ceil_div(e_min * BPS, BPS - pool.fee_bps)

    # --- liquidity ---

    def add_liquidity(self, pool_id: str, max_base: int, max_numeraire: int,
                      provider: str) -> int:
        pool = self.get(pool_id)
        check_amount(max_base)
        check_amount(max_numeraire)
        rb, rn = self.reserves(pool_id)
        supply = self.lp_supply(pool_id)
        minted = min(max_base * supply // rb, max_numeraire * supply // rn)
        if minted == 0:
            return 0
        need_base = ceil_div(minted * rb, supply)
        need_num = ceil_div(minted * rn, supply)
        with self.registry.transaction():
            self.registry.transfer(pool.base, provider, pool.account, need_base)
            self.registry.transfer(self.numeraire, provider, pool.account, need_num)
            self.registry.mint(pool.lp_token, provider, minted, self.AUTHORITY)
        return minted

    def remove_liquidity(self, pool_id: str, lp_burned: int,
                         provider: str) -> tuple[int, int]:
        pool = self.get(pool_id)
        check_amount(lp_burned)
        if lp_burned == 0:
            return (0, 0)
        rb, rn = self.reserves(pool_id)
        supply = self.lp_supply(pool_id)
        base_out = lp_burned * rb // supply
        num_out = lp_burned * rn // supply
        with self.registry.transaction():
            self.registry.burn(pool.lp_token, provider, lp_burned, self.AUTHORITY)
            self.registry.transfer(pool.base, pool.account, provider, base_out)
            self.registry.transfer(self.numeraire, pool.account, provider, num_out)
        return (base_out, num_out)
