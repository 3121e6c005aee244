"""Authoritative token ledger: balances, supplies, mint/burn controls.

All quantities are non-negative integers at each token's own decimal scale.
No floating point enters this module. Every mutating operation validates its
preconditions fully before touching state, so a raised error never leaves a
partial write behind.
"""

from __future__ import annotations

import hashlib
import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DuplicateAccount,
    DuplicateToken,
    InsufficientBalance,
    InvariantViolation,
    NotAllowlisted,
    Overflow,
    TokenPaused,
    Unauthorized,
    UnknownAccount,
    UnknownToken,
)


class TokenKind(str, Enum):
    ELEMENT = "element"
    COMPOSITE = "composite"
    NUMERAIRE = "numeraire"
    LP_SHARE = "lp_share"


class AccountRole(str, Enum):
    USER = "user"
    ESCROW_RESERVE = "escrow_reserve"
    FEE_SINK = "fee_sink"
    YIELD_POOL = "yield_pool"
    ISSUER = "issuer"


MAX_DECIMALS = 18


def check_amount(qty) -> int:
    """Validate a ledger quantity: a plain non-negative int."""
    if isinstance(qty, bool) or not isinstance(qty, int):
        raise Overflow(f"amount must be an int, got {type(qty).__name__}")
    if qty < 0:
        raise Overflow(f"amount must be non-negative, got {qty}")
    return qty


@dataclass
class TokenMeta:
    token: str
    kind: TokenKind
    unit_label: str = ""
    decimals: int = 0
    paused: bool = False
    allowlist_enabled: bool = False
    allowlist: set = field(default_factory=set)

    def __post_init__(self):
        if not (0 <= self.decimals <= MAX_DECIMALS):
            raise ValueError(f"decimals out of range: {self.decimals}")


class Registry:
    """Single-writer ledger for one simulation universe.

    Mint/burn are gated per token by a registered authority key (an opaque
    string handed out at token creation). An append-only event log records
    every state transition; replaying it from genesis reproduces the ledger
    exactly (see `replay_events`).
    """

    def __init__(self):
        self.tokens: dict[str, TokenMeta] = {}
        self.accounts: dict[str, AccountRole] = {}
        self._authority: dict[str, str] = {}
        self._balances: dict[str, dict[str, int]] = {}
        self._supply: dict[str, int] = {}
        self.events: list[dict] = []
        self._seq = 0
        # token -> list of fn(account) called just before a balance change
        self._balance_listeners: dict[str, list] = {}

    # --- accounts ---

    def create_account(self, account_id: str, role: AccountRole = AccountRole.USER) -> str:
        if account_id in self.accounts:
            raise DuplicateAccount(account_id)
        self.accounts[account_id] = role
        self._log("create_account", token="", accounts=[account_id], qty=0,
                  meta={"role": role.value})
        return account_id

    def ensure_account(self, account_id: str, role: AccountRole = AccountRole.USER) -> str:
        if account_id not in self.accounts:
            self.create_account(account_id, role)
        return account_id

    def _require_account(self, account_id: str):
        if account_id not in self.accounts:
            raise UnknownAccount(account_id)

    # --- token admin ---

    def create_token(self, meta: TokenMeta, authority: str) -> str:
        if meta.token in self.tokens:
            raise DuplicateToken(meta.token)
        self.tokens[meta.token] = meta
        self._authority[meta.token] = authority
        self._balances[meta.token] = {}
        self._supply[meta.token] = 0
        self._log("create_token", token=meta.token, accounts=[], qty=0,
                  meta={"kind": meta.kind.value, "decimals": meta.decimals,
                        "unit_label": meta.unit_label, "authority": authority})
        return meta.token

    def meta(self, token: str) -> TokenMeta:
        try:
            return self.tokens[token]
        except KeyError:
            raise UnknownToken(token) from None

    def set_paused(self, token: str, flag: bool):
        self.meta(token).paused = flag
        self._log("set_paused", token=token, accounts=[], qty=0, meta={"flag": flag})

    def set_allowlist_enabled(self, token: str, flag: bool):
        self.meta(token).allowlist_enabled = flag
        self._log("set_allowlist_enabled", token=token, accounts=[], qty=0,
                  meta={"flag": flag})

    def set_allowlist(self, token: str, account: str, flag: bool):
        meta = self.meta(token)
        if flag:
            meta.allowlist.add(account)
        else:
            meta.allowlist.discard(account)
        self._log("set_allowlist", token=token, accounts=[account], qty=0,
                  meta={"flag": flag})

    def add_balance_listener(self, token: str, fn):
        """Register fn(account) to run before any balance change of `token`."""
        self._balance_listeners.setdefault(token, []).append(fn)

    # --- queries ---

    def balance_of(self, token: str, account: str) -> int:
        if token not in self.tokens:
            raise UnknownToken(token)
        return self._balances[token].get(account, 0)

    def total_supply(self, token: str) -> int:
        if token not in self.tokens:
            raise UnknownToken(token)
        return self._supply[token]

    def holders(self, token: str) -> list[str]:
        return [a for a, v in self._balances[token].items() if v > 0]

    # --- mutations ---

    def mint(self, token: str, to: str, qty: int, authority: str):
        qty = check_amount(qty)
        meta = self.meta(token)
        self._require_account(to)
        if self._authority[token] != authority:
            raise Unauthorized(f"{authority!r} is not the minter of {token}")
        if meta.paused:
            raise TokenPaused(token)
        self._check_allowlist(meta, to)
        self._touch(token, to)
        self._balances[token][to] = self.balance_of(token, to) + qty
        self._supply[token] += qty
        self._log("mint", token=token, accounts=[to], qty=qty)
        self._check_conservation(token)

    def burn(self, token: str, frm: str, qty: int, authority: str):
        qty = check_amount(qty)
        meta = self.meta(token)
        self._require_account(frm)
        if self._authority[token] != authority:
            raise Unauthorized(f"{authority!r} is not the minter of {token}")
        if meta.paused:
            raise TokenPaused(token)
        self._check_allowlist(meta, frm)
        bal = self.balance_of(token, frm)
        if bal < qty:
            raise InsufficientBalance(f"burn {qty} of {token}, balance {bal}",
                                      token=token, shortfall=qty - bal)
        self._touch(token, frm)
        self._balances[token][frm] = bal - qty
        self._supply[token] -= qty
        self._log("burn", token=token, accounts=[frm], qty=qty)
        self._check_conservation(token)

    def transfer(self, token: str, frm: str, to: str, qty: int):
        qty = check_amount(qty)
        meta = self.meta(token)
        self._require_account(frm)
        self._require_account(to)
        if meta.paused:
            raise TokenPaused(token)
        self._check_allowlist(meta, frm)
        self._check_allowlist(meta, to)
        bal = self.balance_of(token, frm)
        if bal < qty:
            raise InsufficientBalance(f"transfer {qty} of {token}, balance {bal}",
                                      token=token, shortfall=qty - bal)
        self._touch(token, frm)
        self._touch(token, to)
        self._balances[token][frm] = bal - qty
        self._balances[token][to] = self.balance_of(token, to) + qty
        self._log("transfer", token=token, accounts=[frm, to], qty=qty)
        self._check_conservation(token)

    # --- transactions ---

    @contextmanager
    def transaction(self):
        """Roll back balances, supplies and the event log on any exception.

        Used by multi-step operations (composite mint/redeem, pool swaps,
        plan execution) to keep them atomic. Token metadata flags are not
        mutated inside such operations, so they are not snapshotted.
        """
        balances = {t: dict(b) for t, b in self._balances.items()}
        supply = dict(self._supply)
        n_events, seq = len(self.events), self._seq
        try:
            yield
        except BaseException:
            self._balances = balances
            self._supply = supply
            del self.events[n_events:]
            self._seq = seq
            raise

    # --- internals ---

    def _check_allowlist(self, meta: TokenMeta, account: str):
        if meta.allowlist_enabled and account not in meta.allowlist:
            raise NotAllowlisted(f"{account} not allowlisted for {meta.token}")

    def _touch(self, token: str, account: str):
        for fn in self._balance_listeners.get(token, ()):
            fn(account)

    def _log(self, op: str, token: str, accounts: list, qty: int, meta: dict | None = None):
        ev = {"seq": self._seq, "op": op, "token": token,
              "accounts": accounts, "qty": qty}
        if meta:
            ev["meta"] = meta
        self.events.append(ev)
        self._seq += 1

    def _check_conservation(self, token: str):
        total = sum(self._balances[token].values())
        if total != self._supply[token]:
            raise InvariantViolation(
                f"conservation: sum(balances)={total} != supply={self._supply[token]} for {token}")

    # --- snapshots / audit ---

    def state_hash(self) -> str:
        """Deterministic digest of balances, supplies and token flags."""
        state = {
            "supply": dict(sorted(self._supply.items())),
            "balances": {t: dict(sorted((a, v) for a, v in b.items() if v != 0))
                         for t, b in sorted(self._balances.items())},
            "tokens": {t: [m.kind.value, m.decimals, m.paused, m.allowlist_enabled,
                           sorted(m.allowlist)]
                       for t, m in sorted(self.tokens.items())},
            "accounts": dict(sorted((a, r.value) for a, r in self.accounts.items())),
        }
        blob = json.dumps(state, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def export_events(self) -> list[str]:
        """Event log as line-delimited JSON strings."""
        return [json.dumps(ev, sort_keys=True, separators=(",", ":"))
                for ev in self.events]


def replay_events(events: list[dict]) -> Registry:
    """Rebuild a Registry from an event log produced by another Registry.

    Replay applies raw state transitions; authority checks were already
    enforced when the log was written.
    """
    reg = Registry()
    for ev in events:
        op = ev["op"]
        token, accounts, qty = ev["token"], ev["accounts"], ev["qty"]
        meta = ev.get("meta", {})
        if op == "create_account":
            reg.create_account(accounts[0], AccountRole(meta["role"]))
        elif op == "create_token":
            reg.create_token(
                TokenMeta(token=token, kind=TokenKind(meta["kind"]),
                          unit_label=meta.get("unit_label", ""),
                          decimals=meta["decimals"]),
                authority=meta["authority"])
        elif op == "mint":
            reg.mint(token, accounts[0], qty, reg._authority[token])
        elif op == "burn":
            reg.burn(token, accounts[0], qty, reg._authority[token])
        elif op == "transfer":
            reg.transfer(token, accounts[0], accounts[1], qty)
        elif op == "set_paused":
            reg.meta(token).paused = meta["flag"]
            reg._log("set_paused", token=token, accounts=[], qty=0, meta=meta)
        elif op == "set_allowlist_enabled":
            reg.meta(token).allowlist_enabled = meta["flag"]
            reg._log("set_allowlist_enabled", token=token, accounts=[], qty=0, meta=meta)
        elif op == "set_allowlist":
            if meta["flag"]:
                reg.meta(token).allowlist.add(accounts[0])
            else:
                reg.meta(token).allowlist.discard(accounts[0])
            reg._log("set_allowlist", token=token, accounts=accounts, qty=0, meta=meta)
        else:
            raise ValueError(f"unknown event op {op!r}")
    return reg
