"""Event/network data model for signed peer-rating logs.

A rating log is a time-ordered sequence of directed integer scores between
users.  Positive and negative scores are projected onto two separate layers
(rewarding / punitive) of a weighted directed multigraph; every rating event
is its own edge.
"""

from __future__ import annotations

import gzip
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping, Sequence

import numpy as np

MIN_SCORE = -10
MAX_SCORE = 10


class IngestError(ValueError):
    """Raised on fatally malformed input (strict mode, or empty input)."""


class Layer(Enum):
    REWARDING = "rewarding"
    PUNITIVE = "punitive"

    @property
    def short(self) -> str:
        """Suffix used in file names and CSV columns: 'plus' or 'minus'."""
        return "plus" if self is Layer.REWARDING else "minus"


@dataclass(frozen=True)
class RatingEvent:
    """One directed rating: `rater` scores `ratee` at `timestamp` (epoch seconds)."""

    rater: int
    ratee: int
    score: int
    timestamp: int

    def __post_init__(self) -> None:
        if self.score == 0 or not MIN_SCORE <= self.score <= MAX_SCORE:
            raise ValueError(f"score must be in [-10,-1] or [1,10], got {self.score}")
        if self.rater == self.ratee:
            raise ValueError(f"self-rating rejected (user {self.rater})")


class EventLog:
    """Immutable, time-ordered sequence of rating events.

    Events are sorted by timestamp; ties keep input order.  The log is the
    source of truth for every downstream measurement.
    """

    def __init__(self, events: Iterable[RatingEvent]):
        ordered = sorted(events, key=lambda e: e.timestamp)
        self._events: tuple[RatingEvent, ...] = tuple(ordered)
        self._users = frozenset(e.rater for e in ordered) | frozenset(
            e.ratee for e in ordered
        )
        self._arrays: dict[str, np.ndarray] | None = None
        self._dense: dict[int, int] | None = None

    @property
    def events(self) -> tuple[RatingEvent, ...]:
        return self._events

    @property
    def users(self) -> frozenset[int]:
        return self._users

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[RatingEvent]:
        return iter(self._events)

    def _columns(self) -> dict[str, np.ndarray]:
        if self._arrays is None:
            n = len(self._events)
            cols = {
                "rater": np.fromiter((e.rater for e in self._events), np.int64, n),
                "ratee": np.fromiter((e.ratee for e in self._events), np.int64, n),
                "score": np.fromiter((e.score for e in self._events), np.int64, n),
                "timestamp": np.fromiter(
                    (e.timestamp for e in self._events), np.int64, n
                ),
            }
            for a in cols.values():
                a.setflags(write=False)
            self._arrays = cols
        return self._arrays

    @property
    def raters(self) -> np.ndarray:
        return self._columns()["rater"]

    @property
    def ratees(self) -> np.ndarray:
        return self._columns()["ratee"]

    @property
    def scores(self) -> np.ndarray:
        return self._columns()["score"]

    @property
    def timestamps(self) -> np.ndarray:
        return self._columns()["timestamp"]

    @property
    def start_time(self) -> int | None:
        return self._events[0].timestamp if self._events else None

    @property
    def end_time(self) -> int | None:
        return self._events[-1].timestamp if self._events else None

    def dense_index(self) -> dict[int, int]:
        """Map user id -> position in sorted(users).  Internal detail; the
        ids themselves stay opaque everywhere in the public surface."""
        if self._dense is None:
            self._dense = {u: i for i, u in enumerate(sorted(self._users))}
        return self._dense

    def truncated(self, cutoff: int | None) -> "EventLog":
        """New log containing the events with timestamp <= cutoff."""
        if cutoff is None:
            return self
        hi = int(np.searchsorted(self.timestamps, cutoff, side="right"))
        return EventLog(self._events[:hi])


class LayerView:
    """One layer (rewarding or punitive) of a log up to a cutoff time.

    Edges are the individual rating events of that sign; parallel edges are
    kept and weights are absolute scores in [1, 10].
    """

    def __init__(
        self,
        layer: Layer,
        cutoff: int | None,
        raters: np.ndarray,
        ratees: np.ndarray,
        weights: np.ndarray,
        timestamps: np.ndarray,
    ):
        self.layer = layer
        self.cutoff = cutoff
        for a in (raters, ratees, weights, timestamps):
            a.setflags(write=False)
        self.raters = raters
        self.ratees = ratees
        self.weights = weights
        self.timestamps = timestamps

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.raters.tolist()) | frozenset(self.ratees.tolist())

    def restrict_weights(self, min_weight: int = 1, max_weight: int = MAX_SCORE) -> "LayerView":
        """Sub-layer keeping only edges with min_weight <= w <= max_weight."""
        keep = (self.weights >= min_weight) & (self.weights <= max_weight)
        return LayerView(
            self.layer,
            self.cutoff,
            self.raters[keep].copy(),
            self.ratees[keep].copy(),
            self.weights[keep].copy(),
            self.timestamps[keep].copy(),
        )

    def edge_list(self) -> list[tuple[int, int, int, int]]:
        """Edges as (rater, ratee, weight, timestamp) tuples."""
        return list(
            zip(
                self.raters.tolist(),
                self.ratees.tolist(),
                self.weights.tolist(),
                self.timestamps.tolist(),
            )
        )


@dataclass(frozen=True)
class NodeMetrics:
    """Per-user counters at some cutoff: event-count degrees and reputations.

    Degrees count rating events (multigraph semantics), reputations sum
    absolute incoming weights.  Everything is exact integer arithmetic.
    """

    k_in_plus: int
    k_in_minus: int
    k_out_plus: int
    k_out_minus: int
    rho_plus: int
    rho_minus: int

    @property
    def rho(self) -> int:
        """Global reputation: positive minus negative reputation."""
        return self.rho_plus - self.rho_minus


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    reason: str
    text: str


@dataclass(frozen=True)
class IngestReport:
    """Summary of one ingest run: volumes kept/rejected plus diagnostics."""

    events_kept: int
    events_rejected: int
    n_users: int
    rejections: tuple[RejectedLine, ...] = field(default=(), repr=False)


def _open_source(source: str | Path | IO[bytes]) -> IO[str]:
    if isinstance(source, (str, Path)):
        raw: IO[bytes] = open(source, "rb")
    else:
        raw = source
    buffered = io.BufferedReader(raw) if not isinstance(raw, io.BufferedReader) else raw
    if buffered.peek(2)[:2] == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.GzipFile(fileobj=buffered), encoding="utf-8")
    return io.TextIOWrapper(buffered, encoding="utf-8")


def _parse_timestamp(text: str) -> int:
    # mirrors of the public dump carry fractional epoch seconds; floor them
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"non-finite timestamp {text!r}")
        return math.floor(value)


def _parse_line(text: str) -> RatingEvent:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 fields, got {len(parts)}")
    rater = int(parts[0])
    ratee = int(parts[1])
    score = int(parts[2])
    timestamp = _parse_timestamp(parts[3])
    return RatingEvent(rater=rater, ratee=ratee, score=score, timestamp=timestamp)


def ingest(
    source: str | Path | IO[bytes], mode: str = "lenient"
) -> tuple[EventLog, IngestReport]:
    """Parse a `rater,ratee,score,epoch_seconds` CSV (plain or gzip).

    A header line is tolerated and skipped when its first field is not
    numeric.  In lenient mode invalid records are collected as per-line
    diagnostics and skipped; in strict mode the first invalid record raises
    IngestError.  Input with no content at all is an error in both modes;
    a header with zero data rows is a valid empty log.
    """
    if mode not in ("lenient", "strict"):
        raise ValueError(f"mode must be 'lenient' or 'strict', got {mode!r}")
    events: list[RatingEvent] = []
    rejections: list[RejectedLine] = []
    first_record = True
    saw_content = False
    stream = _open_source(source)
    for line_no, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        saw_content = True
        if first_record:
            first_record = False
            head = text.split(",")[0]
            try:
                float(head)
            except ValueError:
                continue  # header line
        try:
            events.append(_parse_line(text))
        except ValueError as exc:
            if mode == "strict":
                raise IngestError(f"line {line_no}: {exc}") from exc
            rejections.append(RejectedLine(line_no, str(exc), text))
    if not saw_content:
        raise IngestError("empty input: no records found")
    log = EventLog(events)
    report = IngestReport(
        events_kept=len(events),
        events_rejected=len(rejections),
        n_users=len(log.users),
        rejections=tuple(rejections),
    )
    return log, report


def split_layers(
    log: EventLog, cutoff: int | None = None
) -> tuple[LayerView, LayerView]:
    """Project the log onto its rewarding and punitive layers at a cutoff.

    Every event with timestamp <= cutoff lands on exactly one layer; weights
    are absolute scores.  cutoff=None means the whole log.
    """
    t = log.timestamps
    in_time = np.ones(len(t), dtype=bool) if cutoff is None else t <= cutoff
    views = []
    for layer, sign_mask in (
        (Layer.REWARDING, log.scores > 0),
        (Layer.PUNITIVE, log.scores < 0),
    ):
        keep = in_time & sign_mask
        views.append(
            LayerView(
                layer,
                cutoff,
                log.raters[keep].copy(),
                log.ratees[keep].copy(),
                np.abs(log.scores[keep]),
                log.timestamps[keep].copy(),
            )
        )
    return views[0], views[1]


def node_metrics(
    log: EventLog, cutoff: int | None = None
) -> dict[int, NodeMetrics]:
    """Degrees and reputations for every user seen at or before the cutoff."""
    sub = log.truncated(cutoff)
    index = log.dense_index()
    n = len(index)
    cols = {
        name: np.zeros(n, dtype=np.int64)
        for name in ("kin_p", "kin_m", "kout_p", "kout_m", "rho_p", "rho_m")
    }
    rater_idx = np.fromiter((index[u] for u in sub.raters.tolist()), np.int64, len(sub))
    ratee_idx = np.fromiter((index[u] for u in sub.ratees.tolist()), np.int64, len(sub))
    pos = sub.scores > 0
    np.add.at(cols["kin_p"], ratee_idx[pos], 1)
    np.add.at(cols["kin_m"], ratee_idx[~pos], 1)
    np.add.at(cols["kout_p"], rater_idx[pos], 1)
    np.add.at(cols["kout_m"], rater_idx[~pos], 1)
    np.add.at(cols["rho_p"], ratee_idx[pos], sub.scores[pos])
    np.add.at(cols["rho_m"], ratee_idx[~pos], -sub.scores[~pos])
    return {
        user: NodeMetrics(
            k_in_plus=int(cols["kin_p"][index[user]]),
            k_in_minus=int(cols["kin_m"][index[user]]),
            k_out_plus=int(cols["kout_p"][index[user]]),
            k_out_minus=int(cols["kout_m"][index[user]]),
            rho_plus=int(cols["rho_p"][index[user]]),
            rho_minus=int(cols["rho_m"][index[user]]),
        )
        for user in sub.users
    }


def latest_ratings(
    log: EventLog, cutoff: int | None = None
) -> dict[tuple[int, int], int]:
    """Latest score for each ordered (rater, ratee) pair at the cutoff."""
    sub = log.truncated(cutoff)
    last: dict[tuple[int, int], int] = {}
    for e in sub:
        last[(e.rater, e.ratee)] = e.score
    return last


def gettrust(
    log: EventLog, viewer: int, target: int, cutoff: int | None = None
) -> int:
    """Trust in `target` as seen by `viewer` through directly trusted users.

    Takes the viewer's latest direct rating of the target, plus, for every
    intermediary the viewer currently rates positively, that intermediary's
    latest rating of the target capped in magnitude by how much the viewer
    trusts the intermediary.
    """
    if viewer == target:
        raise ValueError("viewer and target must differ")
    if viewer not in log.users or target not in log.users:
        missing = viewer if viewer not in log.users else target
        raise ValueError(f"unknown user {missing}")
    last = latest_ratings(log, cutoff)
    total = last.get((viewer, target), 0)
    for (a, j), r_vj in last.items():
        if a != viewer or j == target or r_vj <= 0:
            continue
        r_jt = last.get((j, target))
        if not r_jt:
            continue
        capped = min(r_vj, abs(r_jt))
        total += capped if r_jt > 0 else -capped
    return total


# Preset score-magnitude weights for the synthetic generator: 'flat' draws
# magnitudes uniformly; 'skewed' mimics marketplace habits (positive scores
# piled on 1, negative scores piled on 10).
_SKEWED_POSITIVE = (0.55, 0.14, 0.08, 0.06, 0.05, 0.035, 0.03, 0.02, 0.02, 0.015)
_SKEWED_NEGATIVE = tuple(reversed(_SKEWED_POSITIVE))


@dataclass(frozen=True)
class SynthConfig:
    """Parameters for the synthetic log generator (deterministic per seed)."""

    n_users: int
    n_events: int
    seed: int
    positive_fraction: float = 0.9
    score_distribution: str = "flat"  # 'flat' | 'skewed'
    time_model: str = "uniform"  # 'uniform' | 'poisson'
    t_start: int = 1_300_000_000
    t_span: int = 4 * 365 * 86_400  # uniform model: window length in seconds
    rate: float = 0.01  # poisson model: events per second

    def __post_init__(self) -> None:
        if self.n_users < 2:
            raise ValueError("n_users must be >= 2")
        if self.n_events < 0:
            raise ValueError("n_events must be >= 0")
        if not 0.0 <= self.positive_fraction <= 1.0:
            raise ValueError("positive_fraction must be in [0, 1]")
        if self.score_distribution not in ("flat", "skewed"):
            raise ValueError(f"unknown score_distribution {self.score_distribution!r}")
        if self.time_model not in ("uniform", "poisson"):
            raise ValueError(f"unknown time_model {self.time_model!r}")
        if self.time_model == "uniform" and self.t_span <= 0:
            raise ValueError("t_span must be positive")
        if self.time_model == "poisson" and not self.rate > 0:
            raise ValueError("rate must be positive")


def synth_log(config: SynthConfig) -> EventLog:
    """Generate a random rating log; identical seeds give identical logs."""
    rng = np.random.default_rng(config.seed)
    n = config.n_events
    if n == 0:
        return EventLog([])
    raters = rng.integers(0, config.n_users, n)
    ratees = (raters + rng.integers(1, config.n_users, n)) % config.n_users
    positive = rng.random(n) < config.positive_fraction
    if config.score_distribution == "flat":
        magnitude = rng.integers(1, MAX_SCORE + 1, n)
    else:
        magnitude = np.empty(n, dtype=np.int64)
        support = np.arange(1, MAX_SCORE + 1)
        magnitude[positive] = rng.choice(
            support, size=int(positive.sum()), p=_SKEWED_POSITIVE
        )
        magnitude[~positive] = rng.choice(
            support, size=int((~positive).sum()), p=_SKEWED_NEGATIVE
        )
    scores = np.where(positive, magnitude, -magnitude)
    if config.time_model == "uniform":
        times = np.sort(rng.integers(config.t_start, config.t_start + config.t_span, n))
    else:
        gaps = rng.exponential(1.0 / config.rate, n)
        times = (config.t_start + np.floor(np.cumsum(gaps))).astype(np.int64)
    return EventLog(
        RatingEvent(int(r), int(e), int(s), int(t))
        for r, e, s, t in zip(raters, ratees, scores, times)
    )


def write_log_csv(log: EventLog, path: str | Path) -> None:
    """Write a log back out in the ingestible CSV format (headered)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rater,ratee,score,timestamp\n")
        for e in log:
            fh.write(f"{e.rater},{e.ratee},{e.score},{e.timestamp}\n")
