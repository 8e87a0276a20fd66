"""Audit records: one instance, many named checks, serialisable to JSON lines and CSV."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Sequence, Union

Number = Union[int, float]


@dataclass
class Check:
    name: str
    lhs: Number
    rhs: Union[Number, List[Number]]
    relation: str
    passed: bool

    def rhs_text(self) -> str:
        if isinstance(self.rhs, (list, tuple)):
            return "[" + ", ".join(_fmt(x) for x in self.rhs) + "]"
        return _fmt(self.rhs)


def _fmt(x: Number) -> str:
    if isinstance(x, float) and not x.is_integer():
        return repr(round(x, 12))
    return str(int(x)) if isinstance(x, float) else str(x)


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def check_eq(name: str, lhs: Number, rhs: Number) -> Check:
    return Check(name, _plain(lhs), _plain(rhs), "==", bool(lhs == rhs))


def check_le(name: str, lhs: Number, rhs: Number, slack: float = 0.0) -> Check:
    return Check(name, _plain(lhs), _plain(rhs), "<=", bool(lhs <= rhs + slack))


def check_ge(name: str, lhs: Number, rhs: Number, slack: float = 0.0) -> Check:
    return Check(name, _plain(lhs), _plain(rhs), ">=", bool(lhs >= rhs - slack))


def check_in(name: str, value: Number, lo: Number, hi: Number, slack: float = 0.0) -> Check:
    return Check(name, _plain(value), [_plain(lo), _plain(hi)], "in",
                 bool(lo - slack <= value <= hi + slack))


@dataclass
class AuditRecord:
    instance: str
    checks: List[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class AuditReport:
    records: List[AuditRecord] = field(default_factory=list)

    def add(self, record: AuditRecord) -> None:
        self.records.append(record)

    def extend(self, other: "AuditReport") -> None:
        self.records.extend(other.records)

    @property
    def checks(self) -> List[Check]:
        return [c for r in self.records for c in r.checks]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> List[tuple]:
        return [(r.instance, c) for r in self.records for c in r.checks if not c.passed]

    def summary(self) -> dict:
        by_name: dict = {}
        for c in self.checks:
            tot, ok = by_name.get(c.name, (0, 0))
            by_name[c.name] = (tot + 1, ok + int(c.passed))
        return {name: {"total": t, "passed": p} for name, (t, p) in sorted(by_name.items())}

    def to_jsonl(self) -> str:
        lines = []
        for r in self.records:
            lines.append(json.dumps({
                "instance": r.instance,
                "passed": r.passed,
                "checks": [asdict(c) for c in r.checks],
                "data": r.data,
            }, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "check", "lhs", "relation", "rhs", "pass"])
        for r in self.records:
            for c in r.checks:
                w.writerow([r.instance, c.name, _fmt(c.lhs), c.relation, c.rhs_text(), int(c.passed)])
        return buf.getvalue()


def merge(reports: Iterable[AuditReport]) -> AuditReport:
    out = AuditReport()
    for r in reports:
        out.extend(r)
    return out


__all__: Sequence[str] = [
    "AuditRecord", "AuditReport", "Check", "check_eq", "check_ge", "check_in", "check_le", "merge",
]
