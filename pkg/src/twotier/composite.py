"""Composite token creation/redemption at fixed element ratios.

One composite unit is backed by a fixed basket of element tokens held in a
per-asset escrow account. Rounding always favors the escrow: deposits are
rounded up against the caller, payouts rounded down, and every residue is
routed to the asset's fee sink, so the escrow balance equals the exact
backing requirement after every operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CompositeAlreadyBound,
    EmptyComposition,
    InsufficientBalance,
    InvariantViolation,
    UnknownAsset,
    UnknownElement,
    ZeroQuantity,
)
from .ledger import AccountRole, Registry, TokenKind, TokenMeta, check_amount

BPS = 10_000


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass
class AssetDefinition:
    composite: str
    # ordered (element token id, amount per 1.0 composite unit)
    composition: list[tuple[str, int]]
    mint_fee_bps: int
    redeem_fee_bps: int
    escrow: str
    fee_sink: str
    unit: int  # 10**decimals of the composite token

    def __post_init__(self):
        if not (0 <= self.mint_fee_bps <= BPS and 0 <= self.redeem_fee_bps <= BPS):
            raise ValueError("fee bps out of range")


@dataclass
class MintReceipt:
    asset: str
    minted: int
    deposits: list[tuple[str, int]]
    fees: list[tuple[str, int]]


@dataclass
class RedeemReceipt:
    asset: str
    burned: int
    basket_out: list[tuple[str, int]]
    fees: list[tuple[str, int]]


class CompositeEngine:
    """Per-registry engine holding all asset definitions and their escrows."""

    def __init__(self, registry: Registry):
        self.registry = registry
        self.assets: dict[str, AssetDefinition] = {}

    def authority_for(self, composite_id: str) -> str:
        return f"composite-engine:{composite_id}"

    def define_asset(self, composite_meta: TokenMeta, composition: list[tuple[str, int]],
                     mint_fee_bps: int = 0, redeem_fee_bps: int = 0) -> AssetDefinition:
        if not composition:
            raise EmptyComposition(composite_meta.token)
        seen = set()
        for element, per_unit in composition:
            if element not in self.registry.tokens:
                raise UnknownElement(element)
            if self.registry.meta(element).kind != TokenKind.ELEMENT:
                raise UnknownElement(f"{element} is not an element token")
            if element in seen:
                raise UnknownElement(f"duplicate element {element} in composition")
            seen.add(element)
            if check_amount(per_unit) == 0:
                raise EmptyComposition(f"zero ratio for {element}")
        cid = composite_meta.token
        if cid in self.assets or cid in self.registry.tokens:
            raise CompositeAlreadyBound(cid)
        if composite_meta.kind != TokenKind.COMPOSITE:
            raise CompositeAlreadyBound(f"{cid} must have composite kind")

        self.registry.create_token(composite_meta, authority=self.authority_for(cid))
        escrow = self.registry.create_account(f"escrow:{cid}", AccountRole.ESCROW_RESERVE)
        fee_sink = self.registry.create_account(f"fee_sink:{cid}", AccountRole.FEE_SINK)
        asset = AssetDefinition(
            composite=cid,
            composition=[(e, a) for e, a in composition],
            mint_fee_bps=mint_fee_bps,
            redeem_fee_bps=redeem_fee_bps,
            escrow=escrow,
            fee_sink=fee_sink,
            unit=10 ** composite_meta.decimals,
        )
        self.assets[cid] = asset
        return asset

    def get(self, asset_id: str) -> AssetDefinition:
        try:
            return self.assets[asset_id]
        except KeyError:
            raise UnknownAsset(asset_id) from None

    # --- quotes ---

    def _backing(self, asset: AssetDefinition, supply: int, per_unit: int) -> int:
        # exact escrow requirement for a given composite supply
        return ceil_div(per_unit * supply, asset.unit)

    def required_deposit(self, asset_id: str, q: int) -> list[tuple[str, int]]:
        """Element amounts owed (deposit + mint fee) to create q composite units."""
        asset = self.get(asset_id)
        if check_amount(q) == 0:
            raise ZeroQuantity(asset_id)
        s = self.registry.total_supply(asset.composite)
        out = []
        for element, a in asset.composition:
            deposit = self._backing(asset, s + q, a) - self._backing(asset, s, a)
            fee = ceil_div(a * q * asset.mint_fee_bps, BPS * asset.unit)
            out.append((element, deposit + fee))
        return out

    def redemption_value(self, asset_id: str, q: int) -> list[tuple[str, int]]:
        """Element amounts paid out (net of redeem fee) for burning q units."""
        asset = self.get(asset_id)
        if check_amount(q) == 0:
            raise ZeroQuantity(asset_id)
        s = self.registry.total_supply(asset.composite)
        out = []
        for element, a in asset.composition:
            released = self._backing(asset, s, a) - self._backing(asset, s - q, a) \
                if s >= q else ceil_div(a * q, asset.unit)
            payout = released * (BPS - asset.redeem_fee_bps) // BPS
            out.append((element, payout))
        return out

    # --- state transitions ---

    def mint_composite(self, asset_id: str, caller: str, q: int) -> MintReceipt:
        asset = self.get(asset_id)
        if check_amount(q) == 0:
            raise ZeroQuantity(asset_id)
        reg = self.registry
        s = reg.total_supply(asset.composite)

        moves = []  # (element, deposit, fee)
        for element, a in asset.composition:
            deposit = self._backing(asset, s + q, a) - self._backing(asset, s, a)
            fee = ceil_div(a * q * asset.mint_fee_bps, BPS * asset.unit)
            have = reg.balance_of(element, caller)
            if have < deposit + fee:
                raise InsufficientBalance(
                    f"mint {asset_id}: need {deposit + fee} of {element}, have {have}",
                    token=element, shortfall=deposit + fee - have)
            moves.append((element, deposit, fee))

        with reg.transaction():
            for element, deposit, fee in moves:
                reg.transfer(element, caller, asset.escrow, deposit)
                if fee:
                    reg.transfer(element, caller, asset.fee_sink, fee)
            reg.mint(asset.composite, caller, q, self.authority_for(asset.composite))
        self._assert_backing(asset)
        return MintReceipt(asset=asset_id, minted=q,
                           deposits=[(e, d) for e, d, _ in moves],
                           fees=[(e, f) for e, _, f in moves])

    def redeem_composite(self, asset_id: str, caller: str, q: int) -> RedeemReceipt:
        asset = self.get(asset_id)
        if check_amount(q) == 0:
            raise ZeroQuantity(asset_id)
        reg = self.registry
        have = reg.balance_of(asset.composite, caller)
        if have < q:
            raise InsufficientBalance(
                f"redeem {asset_id}: need {q} composite, have {have}",
                token=asset.composite, shortfall=q - have)
        s = reg.total_supply(asset.composite)

        moves = []  # (element, payout, fee_and_residue)
        for element, a in asset.composition:
            released = self._backing(asset, s, a) - self._backing(asset, s - q, a)
            payout = released * (BPS - asset.redeem_fee_bps) // BPS
            moves.append((element, payout, released - payout))

        with reg.transaction():
            reg.burn(asset.composite, caller, q, self.authority_for(asset.composite))
            for element, payout, fee in moves:
                reg.transfer(element, asset.escrow, caller, payout)
                if fee:
                    reg.transfer(element, asset.escrow, asset.fee_sink, fee)
        self._assert_backing(asset)
        return RedeemReceipt(asset=asset_id, burned=q,
                             basket_out=[(e, p) for e, p, _ in moves],
                             fees=[(e, f) for e, _, f in moves])

    # --- audit ---

    def full_backing_ok(self, asset_id: str) -> bool:
        asset = self.get(asset_id)
        s = self.registry.total_supply(asset.composite)
        return all(
            self.registry.balance_of(element, asset.escrow) == self._backing(asset, s, a)
            for element, a in asset.composition)

    def _assert_backing(self, asset: AssetDefinition):
        if not self.full_backing_ok(asset.composite):
            raise InvariantViolation(f"full backing broken for {asset.composite}")
