"""Simulated permissioned ledger: an append-only hash chain of blocks
carrying authenticated transactions, applied to a deterministic
contract-style state machine.

Consensus is a single in-process sequencer; every submission is
serialized through one lock. Persistence is newline-delimited canonical
JSON (sorted keys, no insignificant whitespace, numerics carried as
fixed-format strings) in an append-only file headed `psb-ledger v1`.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import threading
import time
from dataclasses import dataclass, field

from .errors import (AuthenticationError, AuthorizationError, ConflictError,
                     NotFoundError, ValidationError)

FILE_HEADER = "psb-ledger v1"
GENESIS_PREV_HASH = "0" * 64

KIND_REGISTER_DEVICE = "RegisterDevice"
KIND_RECORD_SCHEDULE = "RecordSchedule"
KIND_RECORD_USAGE = "RecordUsage"
TX_KINDS = (KIND_REGISTER_DEVICE, KIND_RECORD_SCHEDULE, KIND_RECORD_USAGE)


def canonical_json(obj) -> str:
    """Canonical encoding: sorted keys, tight separators, floats banned
    (callers pre-format numerics as fixed-decimal strings)."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _reject_floats(obj):
    if isinstance(obj, float):
        raise ValidationError("floats are not allowed in ledger payloads; "
                              "format as fixed-decimal strings")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _reject_floats(k)
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class Member:
    member_id: str
    auth_key: bytes


@dataclass(frozen=True)
class Transaction:
    member_id: str
    kind: str
    payload: dict
    auth_tag: str
    tx_id: str

    @staticmethod
    def _tag(member: Member, kind: str, payload: dict,
             prev_block_hash: str) -> str:
        msg = "\n".join((member.member_id, kind, canonical_json(payload),
                         prev_block_hash)).encode()
        return hmac.new(member.auth_key, msg, hashlib.sha256).hexdigest()

    @classmethod
    def create(cls, member: Member, kind: str, payload: dict,
               prev_block_hash: str) -> "Transaction":
        tag = cls._tag(member, kind, payload, prev_block_hash)
        body = canonical_json({"member_id": member.member_id, "kind": kind,
                               "payload": payload, "auth_tag": tag})
        return cls(member_id=member.member_id, kind=kind, payload=payload,
                   auth_tag=tag, tx_id=sha256_hex(body.encode()))

    def verify_tag(self, member: Member, prev_block_hash: str) -> bool:
        expect = self._tag(member, self.kind, self.payload, prev_block_hash)
        return hmac.compare_digest(expect, self.auth_tag)

    def to_doc(self) -> dict:
        return {"member_id": self.member_id, "kind": self.kind,
                "payload": self.payload, "auth_tag": self.auth_tag,
                "tx_id": self.tx_id}

    @classmethod
    def from_doc(cls, doc: dict) -> "Transaction":
        return cls(member_id=doc["member_id"], kind=doc["kind"],
                   payload=doc["payload"], auth_tag=doc["auth_tag"],
                   tx_id=doc["tx_id"])


@dataclass(frozen=True)
class LedgerBlock:
    height: int
    prev_hash: str
    timestamp: int  # seconds since epoch
    txs: tuple
    block_hash: str

    @staticmethod
    def compute_hash(height: int, prev_hash: str, timestamp: int, txs) -> str:
        body = canonical_json({
            "height": height,
            "prev_hash": prev_hash,
            "timestamp": timestamp,
            "txs": [tx.to_doc() for tx in txs],
        })
        return sha256_hex(body.encode())

    @classmethod
    def seal(cls, height, prev_hash, timestamp, txs) -> "LedgerBlock":
        txs = tuple(txs)
        return cls(height=height, prev_hash=prev_hash, timestamp=timestamp,
                   txs=txs,
                   block_hash=cls.compute_hash(height, prev_hash, timestamp, txs))

    def to_line(self) -> str:
        return canonical_json({
            "height": self.height,
            "prev_hash": self.prev_hash,
            "timestamp": self.timestamp,
            "txs": [tx.to_doc() for tx in self.txs],
            "block_hash": self.block_hash,
        })

    @classmethod
    def from_line(cls, line: str) -> "LedgerBlock":
        doc = json.loads(line)
        return cls(height=doc["height"], prev_hash=doc["prev_hash"],
                   timestamp=doc["timestamp"],
                   txs=tuple(Transaction.from_doc(t) for t in doc["txs"]),
                   block_hash=doc["block_hash"])


class ContractState:
    """Deterministic state machine over the transaction log."""

    def __init__(self):
        self.devices = {}    # device_id -> descriptor
        self.schedules = {}  # "building|date" -> schedule record
        self.usage = {}      # "building|date|hour|action" -> usage record
        self.seen_tx = set()

    def apply(self, tx: Transaction):
        """Validate and apply; raises without mutating on any rejection."""
        if tx.tx_id in self.seen_tx:
            raise ConflictError(f"duplicate transaction {tx.tx_id[:16]}")
        handler = {
            KIND_REGISTER_DEVICE: self._apply_register_device,
            KIND_RECORD_SCHEDULE: self._apply_record_schedule,
            KIND_RECORD_USAGE: self._apply_record_usage,
        }.get(tx.kind)
        if handler is None:
            raise ValidationError(f"unknown transaction kind {tx.kind!r}")
        handler(tx.payload)
        self.seen_tx.add(tx.tx_id)

    @staticmethod
    def _require(payload, fields):
        if not isinstance(payload, dict):
            raise ValidationError("payload must be an object")
        for name, typ in fields:
            if name not in payload:
                raise ValidationError(f"payload missing field {name!r}")
            if not isinstance(payload[name], typ):
                raise ValidationError(f"payload field {name!r} has wrong type")

    def _apply_register_device(self, p):
        self._require(p, [("device_id", str), ("building_id", str),
                          ("base_url", str), ("event_on", str),
                          ("event_off", str), ("key", str)])
        self.devices[p["device_id"]] = dict(p)

    def _apply_record_schedule(self, p):
        self._require(p, [("building_id", str), ("date", str),
                          ("slots", str), ("ehp_hours", int),
                          ("forecast_digest", str), ("client_ts", int)])
        if len(p["slots"]) != 24 or set(p["slots"]) - {"#", "."}:
            raise ValidationError("slots must be 24 chars of '#'/'.'")
        if p["ehp_hours"] != p["slots"].count("#"):
            raise ValidationError("ehp_hours disagrees with slots")
        key = f'{p["building_id"]}|{p["date"]}'
        prev = self.schedules.get(key)
        if prev is not None and p["client_ts"] <= prev["client_ts"]:
            raise ConflictError(
                f"stale schedule for {key}: client_ts not newer")
        self.schedules[key] = dict(p)

    def _apply_record_usage(self, p):
        self._require(p, [("building_id", str), ("date", str),
                          ("hour", int), ("action", str), ("outcome", str),
                          ("attempt_count", int)])
        if not (0 <= p["hour"] <= 24):
            raise ValidationError("hour must lie in 0..24")
        if p["action"] not in ("ON", "OFF"):
            raise ValidationError("action must be ON or OFF")
        if p["outcome"] not in ("Acked", "Failed"):
            raise ValidationError("outcome must be Acked or Failed")
        key = f'{p["building_id"]}|{p["date"]}|{p["hour"]:02d}|{p["action"]}'
        self.usage[key] = dict(p)

    def state_root(self) -> str:
        body = canonical_json({
            "devices": self.devices,
            "schedules": self.schedules,
            "usage": self.usage,
        })
        return sha256_hex(body.encode())


@dataclass(frozen=True)
class Receipt:
    height: int
    tx_index: int


@dataclass(frozen=True)
class VerificationReport:
    intact: bool
    height: int | None = None  # first corrupted height, if any
    detail: str = "intact"
    replay_root: str | None = None
    stored_root: str | None = None

    def to_doc(self) -> dict:
        return {"intact": self.intact, "height": self.height,
                "detail": self.detail, "replay_root": self.replay_root,
                "stored_root": self.stored_root}


class Ledger:
    """Single-sequencer ledger over an append-only file.

    All mutations serialize through one lock; sealed blocks are
    immutable, so reads need no locking discipline beyond list copies.
    """

    def __init__(self, path, members, block_interval_ms: int = 0,
                 now=time.time):
        self.path = str(path)
        self.members = {m.member_id: m for m in members}
        self.block_interval_ms = block_interval_ms
        self._now = now
        self._lock = threading.Lock()
        self._blocks: list[LedgerBlock] = []
        self.state = ContractState()
        self._pending: list[Transaction] = []
        self._pending_opened_at = None
        self._load_or_create()

    # -- persistence ----------------------------------------------------

    def _load_or_create(self):
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except FileNotFoundError:
            genesis = LedgerBlock.seal(0, GENESIS_PREV_HASH,
                                       int(self._now()), ())
            self._blocks = [genesis]
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(FILE_HEADER + "\n")
                fh.write(genesis.to_line() + "\n")
            return
        if not lines or lines[0] != FILE_HEADER:
            raise ValidationError(f"{self.path}: not a ledger file")
        for line in lines[1:]:
            block = LedgerBlock.from_line(line)
            self._blocks.append(block)
            for tx in block.txs:
                self.state.apply(tx)

    def _append_block(self, block: LedgerBlock):
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(block.to_line() + "\n")

    # -- submission -----------------------------------------------------

    @property
    def head_hash(self) -> str:
        """Hash new transactions must authenticate against."""
        with self._lock:
            return self._auth_anchor()

    def _auth_anchor(self) -> str:
        return self._blocks[-1].block_hash

    def member(self, member_id: str) -> Member:
        try:
            return self.members[member_id]
        except KeyError:
            raise AuthorizationError(f"unknown member {member_id!r}") from None

    def submit(self, tx: Transaction) -> Receipt:
        """Authenticate, apply to state, and seal into the chain.

        With block_interval_ms == 0 every transaction seals its own
        block immediately; otherwise transactions batch until the
        interval elapses (or flush() is called).
        """
        with self._lock:
            if tx.tx_id in self.state.seen_tx:
                raise ConflictError(f"duplicate transaction {tx.tx_id[:16]}")
            member = self.member(tx.member_id)
            if not tx.verify_tag(member, self._auth_anchor()):
                raise AuthenticationError(
                    f"authentication tag does not verify for {tx.member_id!r}")
            self.state.apply(tx)

            self._pending.append(tx)
            if self._pending_opened_at is None:
                self._pending_opened_at = self._now()
            height = self._blocks[-1].height + 1
            index = len(self._pending) - 1

            interval_s = self.block_interval_ms / 1000.0
            if (self.block_interval_ms == 0
                    or self._now() - self._pending_opened_at >= interval_s):
                self._seal_pending()
            return Receipt(height=height, tx_index=index)

    def flush(self):
        """Seal any batched transactions into a block now."""
        with self._lock:
            if self._pending:
                self._seal_pending()

    def _seal_pending(self):
        prev = self._blocks[-1]
        block = LedgerBlock.seal(prev.height + 1, prev.block_hash,
                                 int(self._now()), self._pending)
        self._blocks.append(block)
        self._append_block(block)
        self._pending = []
        self._pending_opened_at = None

    # -- queries --------------------------------------------------------

    @property
    def height(self) -> int:
        with self._lock:
            return self._blocks[-1].height

    def blocks(self, start: int = 0, end: int | None = None):
        with self._lock:
            chain = list(self._blocks)
        if end is None:
            end = chain[-1].height
        return [b for b in chain if start <= b.height <= end]

    def schedule_record(self, building_id: str, date: str) -> dict:
        rec = self.state.schedules.get(f"{building_id}|{date}")
        if rec is None:
            raise NotFoundError(
                f"no schedule recorded for {building_id} on {date}")
        return dict(rec)

    def query_metrics(self, building_id: str, date: str):
        """Recorded schedule plus usage acknowledgments in hour order."""
        schedule = self.schedule_record(building_id, date)
        prefix = f"{building_id}|{date}|"
        acks = [dict(v) for k, v in sorted(self.state.usage.items())
                if k.startswith(prefix)]
        return schedule, acks

    def device_for_building(self, building_id: str) -> dict:
        for desc in self.state.devices.values():
            if desc["building_id"] == building_id:
                return dict(desc)
        raise NotFoundError(f"no device registered for {building_id}")

    # -- verification ---------------------------------------------------

    def verify_chain(self) -> VerificationReport:
        """Re-read the persisted file, recompute every hash and link,
        replay state, and compare against the live incremental root."""
        report = verify_ledger_file(self.path, self.members.values())
        if not report.intact:
            return report
        with self._lock:
            stored = self.state.state_root()
        intact = report.replay_root == stored
        return VerificationReport(
            intact=intact,
            height=None if intact else self._blocks[-1].height,
            detail="intact" if intact
            else "replayed state root disagrees with live state root",
            replay_root=report.replay_root, stored_root=stored)


def verify_ledger_file(path, members) -> VerificationReport:
    """Standalone integrity check of a persisted ledger file.

    Corruption is a report outcome, never an exception; the report names
    the first divergent block height (header damage reports height 0).
    """
    registry = {m.member_id: m for m in members}

    def corrupt(height, detail):
        return VerificationReport(intact=False, height=height, detail=detail)

    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        return corrupt(0, f"unreadable ledger file: {exc}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        return corrupt(0, "ledger file is not valid UTF-8")

    lines = text.splitlines()
    if not lines or lines[0] != FILE_HEADER:
        return corrupt(0, "bad or missing ledger file header")
    if not text.endswith("\n"):
        return corrupt(max(0, len(lines) - 2), "truncated final block line")

    state = ContractState()
    prev: LedgerBlock | None = None
    for i, line in enumerate(lines[1:]):
        expected_height = i
        try:
            block = LedgerBlock.from_line(line)
        except Exception:
            return corrupt(expected_height,
                           f"unparseable block at height {expected_height}")
        if block.height != expected_height:
            return corrupt(expected_height,
                           f"height discontinuity at {expected_height}")
        try:
            recomputed = LedgerBlock.compute_hash(block.height,
                                                  block.prev_hash,
                                                  block.timestamp, block.txs)
        except Exception:
            # e.g. a mutated digit turned an int into a float or Infinity
            return corrupt(block.height,
                           f"unhashable block content at height {block.height}")
        if recomputed != block.block_hash:
            return corrupt(block.height,
                           f"block hash mismatch at height {block.height}")
        want_prev = GENESIS_PREV_HASH if prev is None else prev.block_hash
        if block.prev_hash != want_prev:
            return corrupt(block.height,
                           f"broken chain link at height {block.height}")
        for tx in block.txs:
            try:
                body = canonical_json({"member_id": tx.member_id,
                                       "kind": tx.kind,
                                       "payload": tx.payload,
                                       "auth_tag": tx.auth_tag})
            except Exception:
                return corrupt(block.height,
                               f"unhashable transaction at height {block.height}")
            if sha256_hex(body.encode()) != tx.tx_id:
                return corrupt(block.height,
                               f"transaction id mismatch at height {block.height}")
            member = registry.get(tx.member_id)
            if member is None or not tx.verify_tag(member, block.prev_hash):
                return corrupt(block.height,
                               f"transaction fails authentication at height "
                               f"{block.height}")
            try:
                state.apply(tx)
            except Exception:
                return corrupt(block.height,
                               f"invalid state transition at height {block.height}")
        prev = block

    if prev is None:
        return corrupt(0, "ledger file has no genesis block")
    return VerificationReport(intact=True, detail="intact",
                              replay_root=state.state_root())
