"""Synthetic contexts and the fanout sweep harness.

Bits are i.i.d. Bernoulli(density) drawn row-major from Python's seeded
Mersenne Twister, so a (dimensions, density, seed) tuple pins the context
exactly.  Cells whose enumeration overruns the ceiling are recorded as
censored rather than dropped.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from statistics import median
from typing import Iterable

from .context import FormalContext
from .errors import ArgumentError, ConceptCeilingError
from .generalize import Axis, Group, GroupingScheme, Mode, generalize_attributes
from .lattice import DEFAULT_CEILING, count_concepts

__all__ = [
    "SWEEP_CSV_HEADER",
    "SweepGrid",
    "SweepRecord",
    "generate_context",
    "median_ratios_by_fanout",
    "random_grouping",
    "records_from_csv",
    "records_to_csv",
    "sweep",
]

SWEEP_CSV_HEADER = (
    "seed,nG,nM,density,fanout,mode,size_before,size_after,ratio,censored"
)


def generate_context(
    n_objects: int, n_attributes: int, density: float, seed: int
) -> FormalContext:
    if n_objects < 1 or n_attributes < 1:
        raise ArgumentError("context dimensions must be at least 1")
    if not 0 < density < 1:
        raise ArgumentError(f"density must be in (0, 1), got {density}")
    rng = random.Random(seed)
    rows = tuple(
        sum(1 << m for m in range(n_attributes) if rng.random() < density)
        for _ in range(n_objects)
    )
    return FormalContext(
        tuple(f"g{i + 1}" for i in range(n_objects)),
        tuple(f"m{j + 1}" for j in range(n_attributes)),
        rows,
        f"synth-{n_objects}x{n_attributes}-d{density}-s{seed}",
    )


def random_grouping(
    n_attributes: int, fanout: int, seed: int, mode: Mode = Mode.EXISTS
) -> GroupingScheme:
    """Shuffle the attributes and chunk them fanout at a time."""
    if not 2 <= fanout <= n_attributes:
        raise ArgumentError(f"fanout must be in 2..{n_attributes}, got {fanout}")
    rng = random.Random(seed)
    perm = list(range(n_attributes))
    rng.shuffle(perm)
    groups = tuple(
        Group(f"s{k + 1}", frozenset(perm[i:i + fanout]))
        for k, i in enumerate(range(0, n_attributes, fanout))
    )
    return GroupingScheme(Axis.ATTRIBUTES, mode, groups)


@dataclass(frozen=True)
class SweepGrid:
    n_objects: int
    n_attributes: int
    density: float
    fanouts: tuple[int, ...]
    modes: tuple[Mode, ...] = (Mode.EXISTS,)
    n_seeds: int = 1
    seed_base: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "fanouts", tuple(self.fanouts))
        object.__setattr__(self, "modes", tuple(Mode(m) for m in self.modes))
        if not self.fanouts or not self.modes or self.n_seeds < 1:
            raise ArgumentError("sweep grid must name fanouts, modes, and seeds")


@dataclass(frozen=True)
class SweepRecord:
    seed: int
    n_objects: int
    n_attributes: int
    density: float
    fanout: int
    mode: Mode
    size_before: int | None
    size_after: int | None
    censored: bool

    @property
    def ratio(self) -> Fraction | None:
        if self.censored or self.size_before is None or self.size_after is None:
            return None
        return Fraction(self.size_before, self.size_after)


def _grouping_seed(context_seed: int, fanout: int, mode: Mode) -> int:
    # independent of the context stream but fully determined by the cell
    return context_seed * 1_000_003 + fanout * 101 + (1 if mode is Mode.FORALL else 0)


def sweep(grid: SweepGrid, ceiling: int = DEFAULT_CEILING) -> list[SweepRecord]:
    records = []
    for fanout in grid.fanouts:
        for mode in grid.modes:
            for k in range(grid.n_seeds):
                seed = grid.seed_base + k
                ctx = generate_context(
                    grid.n_objects, grid.n_attributes, grid.density, seed
                )
                scheme = random_grouping(
                    grid.n_attributes, fanout, _grouping_seed(seed, fanout, mode), mode
                )
                censored = False
                before: int | None = None
                after: int | None = None
                try:
                    before = count_concepts(ctx, ceiling)
                    after = count_concepts(generalize_attributes(ctx, scheme), ceiling)
                except ConceptCeilingError:
                    censored = True
                records.append(
                    SweepRecord(
                        seed,
                        grid.n_objects,
                        grid.n_attributes,
                        grid.density,
                        fanout,
                        mode,
                        before,
                        after,
                        censored,
                    )
                )
    return records


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER.split(","))
    for r in records:
        writer.writerow(
            [
                r.seed,
                r.n_objects,
                r.n_attributes,
                r.density,
                r.fanout,
                r.mode.value,
                "" if r.size_before is None else r.size_before,
                "" if r.size_after is None else r.size_after,
                "" if r.ratio is None else str(r.ratio),
                "true" if r.censored else "false",
            ]
        )
    return buf.getvalue()


def records_from_csv(text: str) -> list[SweepRecord]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append(
            SweepRecord(
                int(row["seed"]),
                int(row["nG"]),
                int(row["nM"]),
                float(row["density"]),
                int(row["fanout"]),
                Mode(row["mode"]),
                int(row["size_before"]) if row["size_before"] else None,
                int(row["size_after"]) if row["size_after"] else None,
                row["censored"] == "true",
            )
        )
    return records


def median_ratios_by_fanout(
    records: Iterable[SweepRecord],
) -> list[tuple[int, Fraction]]:
    """(fanout, median reduction ratio) over uncensored records."""
    by_fanout: dict[int, list[Fraction]] = {}
    for r in records:
        if r.ratio is not None:
            by_fanout.setdefault(r.fanout, []).append(r.ratio)
    return [
        (fanout, Fraction(median(ratios)))
        for fanout, ratios in sorted(by_fanout.items())
    ]
