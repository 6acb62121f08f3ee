"""Detection event streams and their on-disk formats.

Text format: comment header lines starting with ``#`` carrying run metadata,
a ``trial_id,channel,detector_id,t_ns`` header row, then one event per line
sorted by (trial_id, t_ns).  Channels are written as ``S`` / ``AS``.

Binary format: 32-byte little-endian header (magic ``AFCDLCZ1``, format
version, trial count, event count) followed by fixed 16-byte records
``<uint64 trial_id, uint32 t_ns, uint8 channel, uint8 detector, uint16 0>``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .config import CHANNEL_CODES, CHANNEL_NAMES

__all__ = ["EventStream", "StreamFormatError"]

_MAGIC = b"AFCDLCZ1"
_HEADER = struct.Struct("<8sHxxxxxxQQ")
_RECORD_DTYPE = np.dtype(
    [
        ("trial_id", "<u8"),
        ("t_ns", "<u4"),
        ("channel", "u1"),
        ("detector_id", "u1"),
        ("reserved", "<u2"),
    ]
)


class StreamFormatError(ValueError):
    """Raised for malformed or unsorted event files."""


@dataclass
class EventStream:
    """Column-oriented event record: parallel numpy arrays plus metadata."""

    trial_id: np.ndarray
    channel: np.ndarray
    detector_id: np.ndarray
    t_ns: np.ndarray
    n_trials: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.trial_id)
        if not (len(self.channel) == len(self.detector_id) == len(self.t_ns) == n):
            raise ValueError("event columns must have equal length")

    def __len__(self) -> int:
        return len(self.trial_id)

    @classmethod
    def empty(cls, n_trials: int, meta: dict | None = None) -> "EventStream":
        return cls(
            trial_id=np.empty(0, dtype=np.int64),
            channel=np.empty(0, dtype=np.uint8),
            detector_id=np.empty(0, dtype=np.uint8),
            t_ns=np.empty(0, dtype=np.int64),
            n_trials=n_trials,
            meta=dict(meta or {}),
        )

    def is_sorted(self) -> bool:
        if len(self) < 2:
            return True
        t = self.trial_id
        dt = np.diff(t)
        if np.any(dt < 0):
            return False
        same = dt == 0
        return not np.any(np.diff(self.t_ns)[same] < 0)

    def sort(self) -> "EventStream":
        order = np.lexsort((self.detector_id, self.channel, self.t_ns, self.trial_id))
        return EventStream(
            trial_id=self.trial_id[order],
            channel=self.channel[order],
            detector_id=self.detector_id[order],
            t_ns=self.t_ns[order],
            n_trials=self.n_trials,
            meta=dict(self.meta),
        )

    def select_channel(self, channel: int) -> "EventStream":
        m = self.channel == channel
        return EventStream(
            trial_id=self.trial_id[m],
            channel=self.channel[m],
            detector_id=self.detector_id[m],
            t_ns=self.t_ns[m],
            n_trials=self.n_trials,
            meta=dict(self.meta),
        )

    @staticmethod
    def concatenate(parts: list["EventStream"], n_trials: int, meta: dict | None = None) -> "EventStream":
        if not parts:
            return EventStream.empty(n_trials, meta)
        return EventStream(
            trial_id=np.concatenate([p.trial_id for p in parts]),
            channel=np.concatenate([p.channel for p in parts]),
            detector_id=np.concatenate([p.detector_id for p in parts]),
            t_ns=np.concatenate([p.t_ns for p in parts]),
            n_trials=n_trials,
            meta=dict(meta or {}),
        )

    # --- text format --------------------------------------------------------

    def write_text(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"# n_trials={self.n_trials}\n")
            for key, value in sorted(self.meta.items()):
                fh.write(f"# {key}={value}\n")
            fh.write("trial_id,channel,detector_id,t_ns\n")
            names = CHANNEL_NAMES
            for i in range(len(self)):
                fh.write(
                    f"{self.trial_id[i]},{names[int(self.channel[i])]},"
                    f"{self.detector_id[i]},{self.t_ns[i]}\n"
                )

    @classmethod
    def read_text(cls, path) -> "EventStream":
        meta: dict = {}
        n_trials = None
        rows_trial: list[int] = []
        rows_chan: list[int] = []
        rows_det: list[int] = []
        rows_t: list[int] = []
        with open(path) as fh:
            header_seen = False
            for raw in fh:
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if "=" in body:
                        key, _, value = body.partition("=")
                        meta[key.strip()] = value.strip()
                    continue
                if not header_seen:
                    if line != "trial_id,channel,detector_id,t_ns":
                        raise StreamFormatError(f"unexpected header row: {line!r}")
                    header_seen = True
                    continue
                parts = line.split(",")
                if len(parts) != 4:
                    raise StreamFormatError(f"bad event line: {line!r}")
                trial, chan, det, t = parts
                if chan not in CHANNEL_CODES:
                    raise StreamFormatError(f"unknown channel {chan!r}")
                rows_trial.append(int(trial))
                rows_chan.append(CHANNEL_CODES[chan])
                rows_det.append(int(det))
                rows_t.append(int(t))
        if "n_trials" in meta:
            n_trials = int(meta.pop("n_trials"))
        if n_trials is None:
            raise StreamFormatError("missing '# n_trials=' header")
        stream = cls(
            trial_id=np.asarray(rows_trial, dtype=np.int64),
            channel=np.asarray(rows_chan, dtype=np.uint8),
            detector_id=np.asarray(rows_det, dtype=np.uint8),
            t_ns=np.asarray(rows_t, dtype=np.int64),
            n_trials=n_trials,
            meta=meta,
        )
        if not stream.is_sorted():
            raise StreamFormatError("event stream is not sorted by (trial_id, t_ns)")
        return stream

    # --- binary format ------------------------------------------------------

    def write_binary(self, path) -> None:
        if len(self) and (self.t_ns.min() < 0 or self.t_ns.max() >= 2**32):
            raise StreamFormatError("t_ns out of uint32 range for binary format")
        rec = np.zeros(len(self), dtype=_RECORD_DTYPE)
        rec["trial_id"] = self.trial_id
        rec["t_ns"] = self.t_ns
        rec["channel"] = self.channel
        rec["detector_id"] = self.detector_id
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, 1, self.n_trials, len(self)))
            fh.write(rec.tobytes())

    @classmethod
    def read_binary(cls, path) -> "EventStream":
        with open(path, "rb") as fh:
            head = fh.read(_HEADER.size)
            if len(head) != _HEADER.size:
                raise StreamFormatError("truncated binary header")
            magic, version, n_trials, n_events = _HEADER.unpack(head)
            if magic != _MAGIC:
                raise StreamFormatError(f"bad magic {magic!r}")
            if version != 1:
                raise StreamFormatError(f"unsupported format version {version}")
            body = fh.read()
        rec = np.frombuffer(body, dtype=_RECORD_DTYPE)
        if len(rec) != n_events:
            raise StreamFormatError(
                f"record count mismatch: header {n_events}, body {len(rec)}"
            )
        stream = cls(
            trial_id=rec["trial_id"].astype(np.int64),
            channel=rec["channel"].copy(),
            detector_id=rec["detector_id"].copy(),
            t_ns=rec["t_ns"].astype(np.int64),
            n_trials=int(n_trials),
        )
        if not stream.is_sorted():
            raise StreamFormatError("event stream is not sorted by (trial_id, t_ns)")
        return stream

    def write(self, path) -> None:
        if str(path).endswith(".bin"):
            self.write_binary(path)
        else:
            self.write_text(path)

    @classmethod
    def read(cls, path) -> "EventStream":
        if str(path).endswith(".bin"):
            return cls.read_binary(path)
        return cls.read_text(path)
