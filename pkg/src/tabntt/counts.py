from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class OpCounts:
    """Tallies of the operations a transform performs.

    ``mulmod`` counts multiplications mod P.  Each one is itself carried out
    by table reads, additions and comparisons, which land in the other three
    counters, so ``total`` leaves ``mulmod`` out to avoid charging it twice.
    Digit extraction (shift/mask) and table addressing are not counted.
    """

    mulmod: int = 0
    addmod: int = 0
    table_reads: int = 0
    compares: int = 0

    def add(self, mulmod=0, addmod=0, table_reads=0, compares=0, times=1):
        self.mulmod += mulmod * times
        self.addmod += addmod * times
        self.table_reads += table_reads * times
        self.compares += compares * times

    def merge(self, other: OpCounts) -> OpCounts:
        return OpCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    __add__ = merge

    def __iadd__(self, other: OpCounts) -> OpCounts:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    @property
    def total(self) -> int:
        return self.addmod + self.table_reads + self.compares

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Cost:
    """Per-invocation cost of one kernel, used to tally vectorised calls."""

    mulmod: int = 0
    addmod: int = 0
    table_reads: int = 0
    compares: int = 0

    def charge(self, counters: OpCounts | None, times: int) -> None:
        if counters is not None:
            counters.add(self.mulmod, self.addmod, self.table_reads, self.compares, times)

    def __add__(self, other: Cost) -> Cost:
        return Cost(
            self.mulmod + other.mulmod,
            self.addmod + other.addmod,
            self.table_reads + other.table_reads,
            self.compares + other.compares,
        )

    def scale(self, k: int) -> Cost:
        return Cost(self.mulmod * k, self.addmod * k, self.table_reads * k, self.compares * k)
