"""Rule-set value types and their elementary set operations.

A rule predicate denotes a set of fixed-length packet headers.  Two
representations are supported, and a given instance uses exactly one of them:

* ``Wildcard`` -- a string over ``{0, 1, *}`` of length ``header_bits``,
  denoting every header that agrees with the string on its non-``*``
  positions.
* ``MultiRange`` -- a cartesian product of ``d`` integer intervals, one per
  header field, the fields concatenating (most significant first) to the
  full header.

Both representations are closed under intersection, and intersection,
cardinality and inclusion are cheap.  Emptiness is signalled out of band:
``intersect`` returns ``None`` for an empty meet, and neither constructor can
build an empty set.  Cardinalities are plain Python ints, so header lengths
in the hundreds of bits need no special handling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

ZERO = "0"
ONE = "1"
STAR = "*"

# Letterwise key order ZERO < ONE < STAR, realized by remapping '*' above '1'.
_KEY_TABLE = str.maketrans({STAR: "2"})


class ParseError(ValueError):
    """Malformed rule-set text. ``position`` is a character offset when known."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Geometry:
    """Header-space shape shared by every rule set of one instance."""

    kind: str  # "wildcard" or "multirange"
    header_bits: int | None = None
    field_widths: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "wildcard":
            if not isinstance(self.header_bits, int) or self.header_bits < 1:
                raise ValueError("wildcard geometry needs header_bits >= 1")
            object.__setattr__(self, "field_widths", None)
        elif self.kind == "multirange":
            widths = tuple(self.field_widths or ())
            if not widths or any(not isinstance(w, int) or w < 1 for w in widths):
                raise ValueError("multirange geometry needs positive field widths")
            object.__setattr__(self, "field_widths", widths)
            object.__setattr__(self, "header_bits", sum(widths))
        else:
            raise ValueError(f"unknown geometry kind {self.kind!r}")

    @classmethod
    def wildcard(cls, header_bits: int) -> "Geometry":
        return cls("wildcard", header_bits=header_bits)

    @classmethod
    def multirange(cls, field_widths) -> "Geometry":
        return cls("multirange", field_widths=tuple(field_widths))

    @property
    def space_size(self) -> int:
        return 1 << self.header_bits


class Wildcard:
    """Ternary bit pattern over {0, 1, *}.

    Internally the pattern is a pair of integers: ``bits`` carries the fixed
    1-letters and ``stars`` marks the ``*`` positions (letter ``i`` of the
    string maps to bit ``length - 1 - i``).  ``bits`` is always zero on star
    positions, so equal sets have equal field values.
    """

    __slots__ = ("length", "bits", "stars", "_letters", "_hash")

    def __init__(self, letters: str):
        if not letters:
            raise ParseError("empty wildcard expression")
        bits = 0
        stars = 0
        for i, ch in enumerate(letters):
            bits <<= 1
            stars <<= 1
            if ch == ONE:
                bits |= 1
            elif ch == STAR:
                stars |= 1
            elif ch != ZERO:
                raise ParseError(f"bad wildcard symbol {ch!r}", position=i)
        self.length = len(letters)
        self.bits = bits
        self.stars = stars
        self._letters = letters
        self._hash = None

    @classmethod
    def _make(cls, length: int, bits: int, stars: int) -> "Wildcard":
        w = cls.__new__(cls)
        w.length = length
        w.bits = bits
        w.stars = stars
        w._letters = None
        w._hash = None
        return w

    @property
    def letters(self) -> str:
        if self._letters is None:
            out = []
            for shift in range(self.length - 1, -1, -1):
                if (self.stars >> shift) & 1:
                    out.append(STAR)
                elif (self.bits >> shift) & 1:
                    out.append(ONE)
                else:
                    out.append(ZERO)
            self._letters = "".join(out)
        return self._letters

    def __eq__(self, other) -> bool:
        return (
            type(other) is Wildcard
            and self.length == other.length
            and self.bits == other.bits
            and self.stars == other.stars
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.length, self.bits, self.stars))
        return self._hash

    def __repr__(self) -> str:
        return f"Wildcard({self.letters!r})"


class MultiRange:
    """Cartesian product of per-field integer intervals."""

    __slots__ = ("widths", "ranges", "_hash")

    def __init__(self, widths, ranges):
        widths = tuple(widths)
        ranges = tuple((int(a), int(b)) for a, b in ranges)
        if not widths or any(w < 1 for w in widths):
            raise ValueError("field widths must be positive")
        if len(widths) != len(ranges):
            raise ValueError(f"{len(ranges)} ranges for {len(widths)} fields")
        for i, ((a, b), w) in enumerate(zip(ranges, widths)):
            if not 0 <= a <= b < (1 << w):
                raise ParseError(
                    f"field {i}: range [{a},{b}] invalid for width {w}"
                )
        self.widths = widths
        self.ranges = ranges
        self._hash = None

    def __eq__(self, other) -> bool:
        return (
            type(other) is MultiRange
            and self.widths == other.widths
            and self.ranges == other.ranges
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.widths, self.ranges))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiRange({self.widths}, {list(map(list, self.ranges))})"


RuleSet = Union[Wildcard, MultiRange]


def _check_same_shape(a: RuleSet, b: RuleSet) -> None:
    if type(a) is not type(b):
        raise ValueError(f"mixed rule-set kinds: {type(a).__name__} vs {type(b).__name__}")
    if type(a) is Wildcard:
        if a.length != b.length:
            raise ValueError(f"wildcard length mismatch: {a.length} vs {b.length}")
    elif a.widths != b.widths:
        raise ValueError(f"field width mismatch: {a.widths} vs {b.widths}")


def check_shape(geometry: Geometry, s: RuleSet) -> None:
    """Raise ValueError when s does not fit the instance geometry."""
    if geometry.kind == "wildcard":
        if type(s) is not Wildcard or s.length != geometry.header_bits:
            raise ValueError(
                f"rule {s!r} does not fit wildcard geometry of {geometry.header_bits} bits"
            )
    elif type(s) is not MultiRange or s.widths != geometry.field_widths:
        raise ValueError(
            f"rule {s!r} does not fit field widths {geometry.field_widths}"
        )


def intersect(a: RuleSet, b: RuleSet) -> RuleSet | None:
    """Meet of two rule sets of the same shape, or None when it is empty."""
    _check_same_shape(a, b)
    if type(a) is Wildcard:
        # Positions fixed in both operands must agree.
        if (a.bits ^ b.bits) & ~a.stars & ~b.stars:
            return None
        return Wildcard._make(a.length, a.bits | b.bits, a.stars & b.stars)
    lo_hi = []
    for (a1, b1), (a2, b2) in zip(a.ranges, b.ranges):
        lo = a1 if a1 >= a2 else a2
        hi = b1 if b1 <= b2 else b2
        if lo > hi:
            return None
        lo_hi.append((lo, hi))
    return MultiRange(a.widths, lo_hi)


def cardinality(s: RuleSet) -> int:
    """Number of headers in the set, as an exact (big) integer."""
    if type(s) is Wildcard:
        return 1 << s.stars.bit_count()
    n = 1
    for a, b in s.ranges:
        n *= b - a + 1
    return n


def is_subset(s: RuleSet, t: RuleSet) -> bool:
    """Inclusion test, via the identity ``s <= t  iff  |s & t| == |s|``.

    Both branches below are that identity with the intersection cardinality
    evaluated in place: the meet of two wildcards keeps every star of ``s``
    exactly when the star masks agree on ``s``'s stars, and a multi-range
    meet preserves each factor's length exactly when ``t``'s interval covers
    ``s``'s.  ``test_setrep`` checks agreement with the literal
    intersect-then-count form.
    """
    _check_same_shape(s, t)
    if type(s) is Wildcard:
        if (s.bits ^ t.bits) & ~s.stars & ~t.stars:
            return False
        return (s.stars & t.stars) == s.stars
    return all(
        a2 <= a1 and b1 <= b2 for (a1, b1), (a2, b2) in zip(s.ranges, t.ranges)
    )


def canonical_key(s: RuleSet):
    """Total-order key; equal keys iff equal sets within one representation.

    Wildcards order letterwise with 0 < 1 < *; multi-ranges order
    lexicographically on (a_1, b_1, ..., a_d, b_d).
    """
    if type(s) is Wildcard:
        return s.letters.translate(_KEY_TABLE)
    key = []
    for a, b in s.ranges:
        key.append(a)
        key.append(b)
    return tuple(key)


def full_set(geometry: Geometry) -> RuleSet:
    """The whole header space H in the geometry's representation."""
    if geometry.kind == "wildcard":
        n = geometry.header_bits
        return Wildcard._make(n, 0, (1 << n) - 1)
    return MultiRange(
        geometry.field_widths, [(0, (1 << w) - 1) for w in geometry.field_widths]
    )


def parse_ruleset(text: str, geometry: Geometry) -> RuleSet:
    """Parse the text form of a rule set and validate it against the geometry."""
    if geometry.kind == "wildcard":
        w = Wildcard(text)
        if w.length != geometry.header_bits:
            raise ParseError(
                f"wildcard has {w.length} letters, geometry has {geometry.header_bits}"
            )
        return w
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad multi-range JSON: {exc.msg}", position=exc.pos) from exc
    return multirange_from_data(data, geometry)


def multirange_from_data(data, geometry: Geometry) -> MultiRange:
    """Build a MultiRange from already-decoded JSON (a list of [lo, hi] pairs)."""
    if geometry.kind != "multirange":
        raise ParseError("array match value in a wildcard instance")
    if not isinstance(data, list) or any(
        not isinstance(p, list) or len(p) != 2 or not all(isinstance(v, int) for v in p)
        for p in data
    ):
        raise ParseError("multi-range must be a JSON array of [lo, hi] integer pairs")
    if len(data) != len(geometry.field_widths):
        raise ParseError(
            f"{len(data)} ranges for {len(geometry.field_widths)} declared fields"
        )
    return MultiRange(geometry.field_widths, [tuple(p) for p in data])


def format_ruleset(s: RuleSet) -> str:
    """Canonical text form; ``parse_ruleset(format_ruleset(s)) == s``."""
    if type(s) is Wildcard:
        return s.letters
    return json.dumps([list(p) for p in s.ranges], separators=(",", ":"))


def format_header(geometry: Geometry, header: int) -> str:
    """Text form of one header: a bit string, or per-field values as JSON."""
    if geometry.kind == "wildcard":
        return format(header, f"0{geometry.header_bits}b")
    values = []
    for w in reversed(geometry.field_widths):
        values.append(header & ((1 << w) - 1))
        header >>= w
    values.reverse()
    return json.dumps(values, separators=(",", ":"))


def contains_header(s: RuleSet, header: int) -> bool:
    """Membership of a single header, given as an integer below 2**header_bits."""
    if type(s) is Wildcard:
        return (header ^ s.bits) & ~s.stars == 0
    for w, (a, b) in zip(reversed(s.widths), reversed(s.ranges)):
        v = header & ((1 << w) - 1)
        if not a <= v <= b:
            return False
        header >>= w
    return True


def iter_headers(s: RuleSet) -> Iterator[int]:
    """Yield the headers of the set as increasing integers."""
    if type(s) is Wildcard:
        shifts = [i for i in range(s.length - 1, -1, -1) if (s.stars >> i) & 1]
        for fill in range(1 << len(shifts)):
            h = s.bits
            for j, shift in enumerate(shifts):
                if (fill >> (len(shifts) - 1 - j)) & 1:
                    h |= 1 << shift
            yield h
        return
    offsets = []
    off = 0
    for w in reversed(s.widths):
        offsets.append(off)
        off += w
    offsets.reverse()
    values = [a for a, _ in s.ranges]
    while True:
        yield sum(v << off for v, off in zip(values, offsets))
        i = len(values) - 1
        while i >= 0 and values[i] == s.ranges[i][1]:
            values[i] = s.ranges[i][0]
            i -= 1
        if i < 0:
            return
        values[i] += 1
