"""Durable storage: profiles, conversation history, blobs, and the audit ledger.

Everything lives in one directory tree of canonical-JSON documents plus
content-addressed blob files (layout documented in docs/storage.md), so tests
are hermetic and the whole store is inspectable with a text editor. Writers
are serialized per profile; readers are lock-free.

The audit ledger is the authorship trail: one hash-chained record per spoken
output, append-only, verifiable offline. Records are never rewritten;
deleting a profile appends a tombstone record instead of touching history.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .domain import (
    BlobRef,
    ConversationTurn,
    UserProfile,
    canonical_json,
    format_timestamp,
    utc_now,
)
from .errors import (
    ChainCorrupt,
    DuplicateTurnId,
    StorageUnavailable,
    UnknownProfile,
    ValidationError,
)

#: root of every audit chain
GENESIS_HASH = "0" * 64

#: turn_id marker for the terminal record appended when a profile is deleted
TOMBSTONE_TURN_ID = "__tombstone__"

_EMPTY_SHA256 = hashlib.sha256(b"").hexdigest()


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_text(text: str) -> str:
    return sha256_hex(text.encode("utf-8"))


@dataclass(frozen=True)
class AuditRecord:
    """One link of the authorship chain.

    ``this_hash`` commits to every other field plus the previous record's
    hash, so any mutation anywhere in the chain is detectable.
    """

    seq: int
    timestamp: str
    turn_id: str
    event_id: str
    request_id: str
    selected_index: int
    spoken_text_sha256: str
    artifact_fingerprint: str
    prev_hash: str
    this_hash: str

    def core_fields(self) -> dict:
        return {
            "seq": self.seq,
            "timestamp": self.timestamp,
            "turn_id": self.turn_id,
            "event_id": self.event_id,
            "request_id": self.request_id,
            "selected_index": self.selected_index,
            "spoken_text_sha256": self.spoken_text_sha256,
            "artifact_fingerprint": self.artifact_fingerprint,
        }

    def compute_hash(self) -> str:
        return sha256_text(self.prev_hash + canonical_json(self.core_fields()))

    def to_json_dict(self) -> dict:
        out = self.core_fields()
        out["prev_hash"] = self.prev_hash
        out["this_hash"] = self.this_hash
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "AuditRecord":
        return cls(
            seq=int(data["seq"]),
            timestamp=data["timestamp"],
            turn_id=data["turn_id"],
            event_id=data["event_id"],
            request_id=data["request_id"],
            selected_index=int(data["selected_index"]),
            spoken_text_sha256=data["spoken_text_sha256"],
            artifact_fingerprint=data["artifact_fingerprint"],
            prev_hash=data["prev_hash"],
            this_hash=data["this_hash"],
        )


class AuditLedger:
    """Append-only, hash-chained record file: one canonical-JSON line each."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(
        self,
        *,
        turn_id: str,
        event_id: str,
        request_id: str,
        selected_index: int,
        spoken_text_sha256: str,
        artifact_fingerprint: str,
    ) -> AuditRecord:
        with self._lock:
            records = self._read()
            prev_hash = records[-1].this_hash if records else GENESIS_HASH
            record = AuditRecord(
                seq=len(records) + 1,
                timestamp=format_timestamp(utc_now()),
                turn_id=turn_id,
                event_id=event_id,
                request_id=request_id,
                selected_index=selected_index,
                spoken_text_sha256=spoken_text_sha256,
                artifact_fingerprint=artifact_fingerprint,
                prev_hash=prev_hash,
                this_hash="",
            )
            object.__setattr__(record, "this_hash", record.compute_hash())
            line = canonical_json(record.to_json_dict())
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(line + "\n")
                    f.flush()
                    os.fsync(f.fileno())
            except OSError as exc:
                raise StorageUnavailable(str(exc)) from exc
            return record

    def append_tombstone(self) -> AuditRecord:
        """Terminal record marking profile deletion; the chain stays verifiable."""
        return self.append(
            turn_id=TOMBSTONE_TURN_ID,
            event_id="",
            request_id="",
            selected_index=0,
            spoken_text_sha256=_EMPTY_SHA256,
            artifact_fingerprint="",
        )

    def records(self) -> List[AuditRecord]:
        with self._lock:
            return self._read()

    def _read(self) -> List[AuditRecord]:
        if not self.path.exists():
            return []
        records = []
        try:
            text = self.path.read_text("utf-8")
        except OSError as exc:
            raise StorageUnavailable(str(exc)) from exc
        for line in text.splitlines():
            if not line.strip():
                continue
            records.append(AuditRecord.from_json_dict(json.loads(line)))
        return records

    def verify(self) -> Tuple[bool, Optional[int]]:
        """True iff every hash recomputes, links, and seq numbers are gapless
        from 1; otherwise (False, seq of the first bad record)."""
        if not self.path.exists():
            return True, None
        try:
            text = self.path.read_text("utf-8")
        except OSError as exc:
            raise StorageUnavailable(str(exc)) from exc
        prev_hash = GENESIS_HASH
        expected_seq = 1
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                record = AuditRecord.from_json_dict(json.loads(line))
            except (ValueError, KeyError, TypeError):
                return False, expected_seq
            if (
                record.seq != expected_seq
                or record.prev_hash != prev_hash
                or record.compute_hash() != record.this_hash
            ):
                return False, expected_seq
            prev_hash = record.this_hash
            expected_seq += 1
        return True, None

    def check(self) -> None:
        ok, first_bad = self.verify()
        if not ok:
            raise ChainCorrupt(first_bad if first_bad is not None else 0)


class BlobStore:
    """Write-once, content-addressed blob files under blobs/<aa>/<sha256>."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _path(self, sha256: str) -> Path:
        if len(sha256) != 64:
            raise ValidationError(f"bad blob digest: {sha256!r}")
        return self.root / sha256[:2] / sha256

    def put(self, data: bytes, media_type: str = "application/octet-stream") -> BlobRef:
        digest = sha256_hex(data)
        path = self._path(digest)
        if not path.exists():
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(".tmp")
                tmp.write_bytes(data)
                os.replace(tmp, path)
            except OSError as exc:
                raise StorageUnavailable(str(exc)) from exc
        return BlobRef(sha256=digest, length=len(data), media_type=media_type)

    def get(self, sha256: str) -> bytes:
        path = self._path(sha256)
        if not path.exists():
            raise KeyError(sha256)
        try:
            return path.read_bytes()
        except OSError as exc:
            raise StorageUnavailable(str(exc)) from exc

    def exists(self, sha256: str) -> bool:
        return self._path(sha256).exists()


class Store:
    """Profile documents, per-profile history, blobs, and audit ledgers.

    Mutations for one profile are serialized by a per-profile lock; the blob
    store is safe under concurrency by construction (write-once by content
    address).
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self.blobs = BlobStore(self.root / "blobs")
        self._locks: Dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._locks_guard = threading.Lock()
        self._ledgers: Dict[str, AuditLedger] = {}

    def _lock_for(self, profile_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks[profile_id]

    # -- profiles ----------------------------------------------------------

    def _profile_path(self, profile_id: str) -> Path:
        return self.root / "profiles" / f"{profile_id}.json"

    def save_profile(self, profile: UserProfile) -> None:
        with self._lock_for(profile.profile_id):
            self._write_json(self._profile_path(profile.profile_id), profile.to_json_dict())

    def load_profile(self, profile_id: str) -> UserProfile:
        path = self._profile_path(profile_id)
        if not path.exists():
            raise UnknownProfile(profile_id)
        return UserProfile.from_json_dict(self._read_json(path))

    def profile_exists(self, profile_id: str) -> bool:
        return self._profile_path(profile_id).exists()

    def list_profiles(self) -> List[str]:
        folder = self.root / "profiles"
        if not folder.exists():
            return []
        return sorted(p.stem for p in folder.glob("*.json"))

    def delete_profile(self, profile_id: str) -> None:
        """Remove profile, history, and banking documents; tombstone the audit
        chain rather than deleting it. Blob files are not collected."""
        if not self.profile_exists(profile_id):
            raise UnknownProfile(profile_id)
        with self._lock_for(profile_id):
            self.ledger(profile_id).append_tombstone()
            try:
                self._profile_path(profile_id).unlink()
                for folder in (self.root / "history" / profile_id, self.root / "voicebank" / profile_id):
                    if folder.exists():
                        for f in folder.glob("*.json"):
                            f.unlink()
                        folder.rmdir()
            except OSError as exc:
                raise StorageUnavailable(str(exc)) from exc

    # -- conversation history ----------------------------------------------

    def _history_dir(self, profile_id: str) -> Path:
        return self.root / "history" / profile_id

    def append_turn(self, profile_id: str, turn: ConversationTurn) -> None:
        if not self.profile_exists(profile_id):
            raise UnknownProfile(profile_id)
        with self._lock_for(profile_id):
            folder = self._history_dir(profile_id)
            path = folder / f"{turn.turn_id}.json"
            index_path = folder / "_index.json"
            index = self._read_json(index_path) if index_path.exists() else []
            if path.exists() or turn.turn_id in index:
                raise DuplicateTurnId(turn.turn_id)
            self._write_json(path, turn.to_json_dict())
            index.append(turn.turn_id)
            self._write_json(index_path, index)

    def query_history(
        self, profile_id: str, receiver: Optional[str] = None, limit: Optional[int] = None
    ) -> List[ConversationTurn]:
        """Most-recent-first turns, optionally filtered by receiver label.

        Ordered by timestamp descending; ties broken by append order (latest
        appended first)."""
        if not self.profile_exists(profile_id):
            raise UnknownProfile(profile_id)
        if limit is not None and limit < 0:
            raise ValidationError("limit must be >= 0")
        folder = self._history_dir(profile_id)
        index_path = folder / "_index.json"
        if not index_path.exists():
            return []
        index = self._read_json(index_path)
        turns = []
        for position, turn_id in enumerate(index):
            data = self._read_json(folder / f"{turn_id}.json")
            turns.append((position, ConversationTurn.from_json_dict(data)))
        turns.sort(key=lambda pair: (pair[1].timestamp, pair[0]), reverse=True)
        result = [turn for _, turn in turns]
        if receiver is not None:
            result = [
                t for t in result
                if t.context.receiver is not None and t.context.receiver.label == receiver
            ]
        if limit is not None:
            result = result[:limit]
        return result

    # -- audit ---------------------------------------------------------------

    def ledger(self, profile_id: str) -> AuditLedger:
        with self._locks_guard:
            if profile_id not in self._ledgers:
                self._ledgers[profile_id] = AuditLedger(self.root / "audit" / f"{profile_id}.log")
            return self._ledgers[profile_id]

    # -- banking session documents -------------------------------------------

    def _banking_path(self, profile_id: str, emotion: str) -> Path:
        return self.root / "voicebank" / profile_id / f"{emotion}.json"

    def save_banking_doc(self, profile_id: str, emotion: str, doc: dict) -> None:
        with self._lock_for(profile_id):
            self._write_json(self._banking_path(profile_id, emotion), doc)

    def load_banking_doc(self, profile_id: str, emotion: str) -> Optional[dict]:
        path = self._banking_path(profile_id, emotion)
        if not path.exists():
            return None
        return self._read_json(path)

    # -- file primitives -------------------------------------------------------

    @staticmethod
    def _write_json(path: Path, data: Any) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(canonical_json(data), "utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageUnavailable(str(exc)) from exc

    @staticmethod
    def _read_json(path: Path) -> Any:
        try:
            return json.loads(path.read_text("utf-8"))
        except OSError as exc:
            raise StorageUnavailable(str(exc)) from exc
