"""
Graded F_p-module bookkeeping for the degree-0 invariants.

A table lists basis labels with their cohomological degree.  The identity
``1`` is always carried explicitly; ``size(include_identity=False)`` gives
the count that leaves it out.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .errors import DomainError
from .poly import is_prime

SCHEMA = "equichow.table/1"
CSV_COLUMNS = ("degree", "count", "labels")

# A^1 constant of the point: codimension 1, degree 1.  Never part of an A^0 table.
TAU1 = ("tau1", 1, 1)


@dataclass(frozen=True)
class GradedTable:
    p: int
    entries: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")
        labels = [l for l, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        if any(d < 0 for _, d in self.entries):
            raise ValueError("degrees must be non-negative")
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=_entry_key)))

    @classmethod
    def of(cls, p: int, entries: Iterable[Tuple[str, int]]) -> "GradedTable":
        return cls(p, tuple(entries))

    @property
    def labels(self) -> List[str]:
        return [l for l, _ in self.entries]

    @property
    def degrees(self) -> List[int]:
        return [d for _, d in self.entries]

    def size(self, include_identity: bool = True) -> int:
        n = len(self.entries)
        return n if include_identity or "1" not in self.labels else n - 1

    def degree_of(self, label: str) -> int:
        return dict(self.entries)[label]

    def without(self, label: str) -> "GradedTable":
        return GradedTable(self.p, tuple(e for e in self.entries if e[0] != label))

    def restricted(self, below: int) -> "GradedTable":
        return GradedTable(self.p, tuple(e for e in self.entries if e[1] < below))

    def __add__(self, other: "GradedTable") -> "GradedTable":
        if self.p != other.p:
            raise ValueError("tables over different primes")
        return GradedTable(self.p, self.entries + other.entries)

    def __str__(self):
        return "{" + ", ".join(f"{l}@{d}" for l, d in self.entries) + "}"


def _entry_key(e):
    label, degree = e
    m = re.fullmatch(r"([A-Za-z]+)(\d*)", label)
    if m and m.group(2):
        return (degree, m.group(1), int(m.group(2)), label)
    return (degree, "" if label == "1" else label, 0, label)


def _shift_up(t: GradedTable) -> GradedTable:
    """Degree shift by one: ``1`` becomes x1 and x_i becomes x_(i+1)."""
    out = []
    for label, d in t.entries:
        if label == "1":
            out.append(("x1", d + 1))
        else:
            m = re.fullmatch(r"x(\d+)", label)
            if not m:
                raise ValueError(f"cannot shift label {label!r}")
            out.append((f"x{int(m.group(1)) + 1}", d + 1))
    return GradedTable(t.p, tuple(out))


def inv_point_pgl2(p: int) -> GradedTable:
    """Degree-0 invariants of the classifying stack of PGL2."""
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    return GradedTable(p, (("1", 0), ("w2", 2)) if p == 2 else (("1", 0),))


def _inv_delta(n: int) -> GradedTable:
    """Invariants of the discriminant: for n = 1 the invariants of P^1, else the
    previous complement times P^1, i.e. with w2 killed."""
    if n == 1:
        return GradedTable(2, (("1", 0),))
    return inv_P_minus_Delta(n - 1, 2).without("w2")


def inv_P_minus_Delta(n: int, p: int) -> GradedTable:
    """Invariants of the complement of the discriminant in P(1,2n).

    For p = 2: invariants of the point plus the discriminant's invariants
    shifted up by one.  For odd p the stated pattern is applied: trivial
    unless p divides n - 1, otherwise one extra generator in degree 1.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if p != 2:
        extra = (("y", 1),) if (n - 1) % p == 0 else ()
        return GradedTable(p, (("1", 0),) + extra)
    return inv_point_pgl2(2) + _shift_up(_inv_delta(n))


def inv_Hg(g: int, p: int) -> GradedTable:
    """Invariants of the stack of hyperelliptic curves of odd genus g >= 3.

    The G_m-torsor over the complement in P(1, 2g+2) adds its kernel,
    generated by x_(g+1), shifted by one: a new generator x_(g+2).  The
    PGL2 x G_m step adds nothing in codimension 0.
    """
    if g < 3 or g % 2 == 0:
        raise DomainError(f"g must be odd and at least 3, got {g}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if p != 2:
        extra = (("y", 1),) if (2 * g + 1) % p == 0 else ()
        return GradedTable(p, (("1", 0),) + extra)
    base = inv_P_minus_Delta(g + 1, 2)
    return base + GradedTable(2, ((f"x{g + 2}", g + 2),))


def poincare_series(t: GradedTable, max_degree: Optional[int] = None) -> List[int]:
    """counts[d] = number of basis labels in degree d, for d = 0..max_degree.

    >>> poincare_series(inv_Hg(3, 2))
    [1, 1, 2, 1, 1, 1]
    """
    if not t.entries and max_degree is None:
        return []
    top = max(t.degrees) if max_degree is None else max_degree
    counts = [0] * (top + 1)
    for d in t.degrees:
        if d <= top:
            counts[d] += 1
    return counts


def table_rows(t: GradedTable) -> List[Tuple[int, int, List[str]]]:
    rows = []
    for d, count in enumerate(poincare_series(t)):
        rows.append((d, count, [l for l, deg in t.entries if deg == d]))
    return rows


def table_to_json(t: GradedTable, **meta) -> str:
    doc = {
        "schema": SCHEMA,
        **meta,
        "p": t.p,
        "entries": [{"label": l, "degree": d} for l, d in t.entries],
        "poincare": poincare_series(t),
        "size": t.size(),
        "size_without_identity": t.size(include_identity=False),
    }
    return json.dumps(doc, sort_keys=True)


def table_from_json(text: str) -> GradedTable:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return GradedTable(doc["p"], tuple((e["label"], e["degree"]) for e in doc["entries"]))


def table_to_csv(t: GradedTable) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA} p={t.p}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for d, count, labels in table_rows(t):
        w.writerow((d, count, " ".join(labels)))
    return buf.getvalue()
