"""Knot presentations: planar-diagram codes, braid words and census files.

PD convention
-------------
A crossing ``X(a,b,c,d)`` lists its four edge labels counterclockwise starting
from the incoming under-strand ``a``.  Labels run ``1..2n`` along the knot
orientation, so the under-strand leaves along ``c = a + 1 (mod 2n)`` and the
over-strand is one of ``d -> b`` (positive crossing) or ``b -> d`` (negative
crossing).  This is the convention of the standard knot tables, so codes can
be copied from them directly.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import (
    DuplicateName,
    GeneratorOutOfRange,
    InvalidDiagram,
    MalformedSyntax,
    NonPositiveVolume,
    NotAKnot,
)

__all__ = [
    "KnotDiagram",
    "BraidWord",
    "CensusRecord",
    "parse_pd",
    "format_pd",
    "parse_braid",
    "parse_braid_file",
    "braid_to_diagram",
    "parse_census",
    "write_census",
    "CENSUS_HEADER",
]

CENSUS_HEADER = ("name", "crossings", "alternating", "volume", "pd")


@dataclass(frozen=True)
class KnotDiagram:
    """Validated PD presentation of a knot.

    The empty diagram (no crossings, ``arc_count == 0``) stands for the unknot.
    """

    crossings: tuple
    arc_count: int

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(x) for x in c) for c in self.crossings))
        _validate(self.crossings, self.arc_count)

    @classmethod
    def from_crossings(cls, crossings: Iterable[Iterable[int]]) -> "KnotDiagram":
        crossings = tuple(tuple(c) for c in crossings)
        return cls(crossings, 2 * len(crossings))

    @classmethod
    def unknot(cls) -> "KnotDiagram":
        return cls((), 0)

    def __len__(self):
        return len(self.crossings)

    @property
    def is_unknot_diagram(self) -> bool:
        return not self.crossings

    def next_label(self, label: int) -> int:
        return label % self.arc_count + 1

    def sign(self, k: int) -> int:
        """Sign (+1/-1) of crossing ``k``."""
        a, b, c, d = self.crossings[k]
        return 1 if b == self.next_label(d) else -1

    def signs(self) -> list[int]:
        return [self.sign(k) for k in range(len(self.crossings))]

    def over_in_out(self, k: int) -> tuple[int, int]:
        """(incoming, outgoing) labels of the over-strand at crossing ``k``."""
        a, b, c, d = self.crossings[k]
        return (d, b) if self.sign(k) > 0 else (b, d)

    def mirror(self) -> "KnotDiagram":
        """Diagram of the mirror image (every crossing switched)."""
        out = []
        for k, (a, b, c, d) in enumerate(self.crossings):
            # the old over-strand becomes the under-strand; keep counterclockwise order
            out.append((d, a, b, c) if self.sign(k) > 0 else (b, c, d, a))
        return KnotDiagram(tuple(out), self.arc_count)

    def __str__(self):
        return format_pd(self)


def _validate(crossings: tuple, arc_count: int) -> None:
    n = len(crossings)
    if n == 0:
        if arc_count != 0:
            raise InvalidDiagram("a diagram without crossings must have arc_count 0")
        return
    if any(len(c) != 4 for c in crossings):
        raise InvalidDiagram("every crossing needs exactly four labels")
    if arc_count != 2 * n:
        raise InvalidDiagram(f"arc_count {arc_count} != 2 * {n} crossings")
    counts = {}
    for c in crossings:
        for x in c:
            counts[x] = counts.get(x, 0) + 1
    if set(counts) != set(range(1, arc_count + 1)):
        raise InvalidDiagram(f"arc labels must be exactly 1..{arc_count}")
    bad = sorted(x for x, m in counts.items() if m != 2)
    if bad:
        raise InvalidDiagram(f"labels {bad} do not appear exactly twice")

    def nxt(x):
        return x % arc_count + 1

    incoming = []
    for k, (a, b, c, d) in enumerate(crossings):
        if c != nxt(a):
            raise InvalidDiagram(
                f"crossing {k}: under-strand {a}->{c} breaks label succession "
                "(multiple components or non-sequential labelling)"
            )
        fwd, bwd = b == nxt(d), d == nxt(b)
        if fwd and bwd:
            raise InvalidDiagram(f"crossing {k}: over-strand orientation is ambiguous")
        if not (fwd or bwd):
            raise InvalidDiagram(f"crossing {k}: over-strand {b},{d} breaks label succession")
        incoming.extend((a, d if fwd else b))
    if sorted(incoming) != list(range(1, arc_count + 1)):
        raise InvalidDiagram("strands do not close into a single component")


_PD_TOKEN = re.compile(r"X\s*[\(\[]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\)\]]")
_SEPARATORS = re.compile(r"[\s,]*")


def parse_pd(text: str) -> KnotDiagram:
    """Parse ``X(a,b,c,d) X(...) ...`` into a validated diagram.

    Crossings may be separated by whitespace and/or commas; an optional
    ``PD[...]`` or ``PD(...)`` wrapper is accepted.  Tuple order is preserved.

    >>> len(parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"))
    3
    """
    body = text.strip()
    m = re.fullmatch(r"PD\s*[\(\[](.*)[\)\]]", body, flags=re.S)
    if m:
        body = m.group(1)
    crossings = []
    pos = _SEPARATORS.match(body, 0).end()
    while pos < len(body):
        m = _PD_TOKEN.match(body, pos)
        if not m:
            raise MalformedSyntax(f"cannot parse PD token at {body[pos:pos + 20]!r}")
        crossings.append(tuple(int(g) for g in m.groups()))
        pos = _SEPARATORS.match(body, m.end()).end()
    if not crossings:
        raise MalformedSyntax("no crossings found")
    return KnotDiagram.from_crossings(crossings)


def format_pd(d: KnotDiagram) -> str:
    return " ".join("X(%d,%d,%d,%d)" % c for c in d.crossings)


@dataclass(frozen=True)
class BraidWord:
    """Braid word; letter ``i`` is the generator sigma_|i| with sign(i).

    ``strand_count == 1`` with an empty word is allowed and closes to the unknot.
    """

    strand_count: int
    letters: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strand_count < 1 or (self.strand_count == 1 and self.letters):
            raise GeneratorOutOfRange(f"invalid strand count {self.strand_count}")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strand_count:
                raise GeneratorOutOfRange(f"letter {x} out of range for {self.strand_count} strands")

    def permutation(self) -> list[int]:
        """Where each bottom position ends up after the word (0-based)."""
        pos = list(range(self.strand_count))  # pos[strand] = position
        where = list(range(self.strand_count))  # where[position] = strand
        for x in self.letters:
            i = abs(x) - 1
            where[i], where[i + 1] = where[i + 1], where[i]
        for p, s in enumerate(where):
            pos[s] = p
        return pos

    def closure_components(self) -> int:
        perm = self.permutation()
        seen, comps = set(), 0
        for s in range(self.strand_count):
            if s in seen:
                continue
            comps += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
        return comps


_BRAID = re.compile(r"^\s*(\d+)\s*:\s*((?:[+-]?\d+[\s,]*)*)$")


def parse_braid(text: str) -> BraidWord:
    """Parse ``"strands: w1 w2 ..."``, e.g. ``"3: 1 -2 1 -2"``."""
    m = _BRAID.match(text)
    if not m:
        raise MalformedSyntax(f"cannot parse braid {text!r}")
    letters = [int(x) for x in re.split(r"[\s,]+", m.group(2).strip()) if x]
    return BraidWord(int(m.group(1)), tuple(letters))


def parse_braid_file(stream: TextIO) -> dict[str, BraidWord]:
    """Read ``name: strands: letters`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, rest = line.partition(":")
        if not sep or not name.strip():
            raise MalformedSyntax(f"line {lineno}: expected 'name: strands: letters'")
        name = name.strip()
        if name in out:
            raise DuplicateName(name)
        out[name] = parse_braid(rest)
    return out


def braid_to_diagram(b: BraidWord) -> KnotDiagram:
    """PD code of the closure of ``b``.

    Edges are labelled by walking the closed knot from the bottom of strand
    position 1, so labels follow the orientation (strands run upward).  A
    positive letter puts the left strand over the right one.  The closure of a
    single-letter word is the unknot and comes back as the empty diagram,
    since a one-crossing PD code has no unambiguous orientation.
    """
    if b.closure_components() != 1:
        raise NotAKnot(f"closure of {b} has {b.closure_components()} components")
    if len(b.letters) <= 1:
        return KnotDiagram.unknot()
    cur = list(range(b.strand_count))
    next_id = b.strand_count
    raw = []  # (under_in, under_out, over_in, over_out, sign)
    for x in b.letters:
        i = abs(x) - 1
        e_left, e_right = cur[i], cur[i + 1]
        f_left, f_right = next_id, next_id + 1
        next_id += 2
        if x > 0:
            raw.append((e_right, f_left, e_left, f_right, 1))
        else:
            raw.append((e_left, f_right, e_right, f_left, -1))
        cur[i], cur[i + 1] = f_left, f_right
    alias = {cur[p]: p for p in range(b.strand_count)}

    def canon(e):
        return alias.get(e, e)

    succ = {}
    for ui, uo, oi, oo, _ in raw:
        succ[canon(ui)] = canon(uo)
        succ[canon(oi)] = canon(oo)
    label, e = {}, 0
    while e not in label:
        label[e] = len(label) + 1
        e = succ[e]
    crossings = []
    for ui, uo, oi, oo, s in raw:
        a, c = label[canon(ui)], label[canon(uo)]
        bi, bo = label[canon(oi)], label[canon(oo)]
        crossings.append((a, bo, c, bi) if s > 0 else (a, bi, c, bo))
    return KnotDiagram.from_crossings(crossings)


@dataclass(frozen=True)
class CensusRecord:
    name: str
    crossings: int
    alternating: bool
    volume: float
    pd: KnotDiagram | None = None
    rep_path: str | None = None

    def __post_init__(self):
        if not self.name:
            raise MalformedSyntax("empty knot name")
        if self.crossings < 3:
            raise MalformedSyntax(f"{self.name}: crossing number {self.crossings} < 3")
        if not self.volume > 0:
            raise NonPositiveVolume(f"{self.name}: volume {self.volume}")


def _data_lines(stream: TextIO):
    for line in stream:
        if line.lstrip().startswith("#") or not line.strip():
            continue
        yield line


def parse_census(stream: TextIO | str) -> list[CensusRecord]:
    """Read the census CSV (``name,crossings,alternating,volume,pd[,rep_path]``).

    ``alternating`` is ``1``/``0``; ``pd`` and ``rep_path`` may be empty.
    Lines whose first non-blank character is ``#`` are comments.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(_data_lines(stream))
    header = next(reader, None)
    if header is None:
        return []
    header = [h.strip() for h in header]
    if tuple(header[:5]) != CENSUS_HEADER or header[5:] not in ([], ["rep_path"]):
        raise MalformedSyntax(f"unexpected census header {header}")
    records, seen = [], set()
    for lineno, row in enumerate(reader, 2):
        if len(row) not in (5, 6):
            raise MalformedSyntax(f"census row {lineno}: expected 5 or 6 fields, got {len(row)}")
        name = row[0].strip()
        try:
            crossings = int(row[1])
            alt = row[2].strip()
            if alt not in ("0", "1"):
                raise ValueError(alt)
            volume = float(row[3])
        except ValueError as exc:
            raise MalformedSyntax(f"census row {lineno} ({name}): {exc}") from None
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)
        pd = parse_pd(row[4]) if row[4].strip() else None
        rep = row[5].strip() if len(row) == 6 and row[5].strip() else None
        records.append(CensusRecord(name, crossings, alt == "1", volume, pd, rep))
    return records


def write_census(records: Iterable[CensusRecord], stream: TextIO) -> None:
    """Inverse of :func:`parse_census`."""
    records = list(records)
    with_rep = any(r.rep_path for r in records)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(list(CENSUS_HEADER) + (["rep_path"] if with_rep else []))
    for r in records:
        row = [r.name, r.crossings, int(r.alternating), repr(r.volume), format_pd(r.pd) if r.pd else ""]
        if with_rep:
            row.append(r.rep_path or "")
        w.writerow(row)
