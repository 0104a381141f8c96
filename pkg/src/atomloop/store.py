"""Combination records and the dynamic collection the atom engine maintains.

The store maps each distinct rule-set value to at most one ``Combination``.
Lookup and insertion are keyed by the value itself (two values are equal
exactly when they denote the same header set), while every ordered view --
iteration, query results, reports -- uses the canonical key, so runs are
reproducible.

The baseline intersection query is deliberately a full linear scan; it is
the reference any smarter index would have to match element for element.
"""

from __future__ import annotations

from .setrep import Geometry, RuleSet, canonical_key, cardinality, intersect


class Combination:
    """A nonempty intersection of rule sets, plus the engine's bookkeeping.

    ``size`` caches ``|set|`` for the cardinality sorts and ``atsize`` holds
    the size of the header class this combination represents (the part of
    ``set`` outside every non-containing rule).  ``cont`` lists the ids of
    the rules whose sets contain this one and ``sup`` references the stored
    combinations strictly containing it.  ``parent``, ``covered`` and
    ``is_new`` only carry state inside a single incremental-add call.
    """

    __slots__ = (
        "set",
        "size",
        "atsize",
        "sup",
        "cont",
        "parent",
        "covered",
        "is_new",
        "in_store",
        "_key",
    )

    def __init__(self, ruleset: RuleSet, size: int | None = None, atsize: int = 0, cont=()):
        self.set = ruleset
        self.size = cardinality(ruleset) if size is None else size
        self.atsize = atsize
        self.sup: dict[RuleSet, Combination] = {}
        self.cont: list[int] = list(cont)
        self.parent: Combination | None = None
        self.covered = False
        self.is_new = False
        self.in_store = False
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = canonical_key(self.set)
        return self._key

    def live_sup(self) -> list["Combination"]:
        """Sup members still in the store, compacting out deleted ones.

        The add pipeline's final sweep only visits combinations included in
        the added rule, so a deletion can leave references behind in other
        sup lists; they are dropped here on first touch.
        """
        members = list(self.sup.values())
        if all(d.in_store for d in members):
            return members
        self.sup = {d.set: d for d in members if d.in_store}
        return list(self.sup.values())

    def __repr__(self) -> str:
        return f"Combination({self.set!r}, size={self.size}, atsize={self.atsize})"


def _size_key(c: Combination):
    return (c.size, c.key)


class CombinationStore:
    """Uncovered combinations of the rules added so far, one per set value.

    The store also keeps the registry of distinct rule sets seen so far;
    rule ids index into it and are what ``Combination.cont`` holds.
    """

    def __init__(self, geometry: Geometry):
        self.geometry = geometry
        self._by_set: dict[RuleSet, Combination] = {}
        self._rule_id: dict[RuleSet, int] = {}
        self._rule_set: list[RuleSet] = []
        self.added: set[RuleSet] = set()
        self._sorted: list[Combination] | None = None

    def __len__(self) -> int:
        return len(self._by_set)

    def __iter__(self):
        return iter(self.combinations())

    def combinations(self) -> list[Combination]:
        """Stored combinations in canonical-key order."""
        if self._sorted is None:
            self._sorted = sorted(self._by_set.values(), key=lambda c: c.key)
        return self._sorted

    def contains(self, ruleset: RuleSet) -> bool:
        return ruleset in self._by_set

    def get(self, ruleset: RuleSet) -> Combination | None:
        return self._by_set.get(ruleset)

    def insert(self, comb: Combination) -> None:
        if comb.set in self._by_set:
            raise ValueError(f"combination already stored: {comb.set!r}")
        self._by_set[comb.set] = comb
        comb.in_store = True
        self._sorted = None

    def remove(self, ruleset: RuleSet) -> Combination:
        comb = self._by_set.pop(ruleset, None)
        if comb is None:
            raise ValueError(f"combination not stored: {ruleset!r}")
        comb.in_store = False
        self._sorted = None
        return comb

    def intersect_query(self, r: RuleSet) -> list[Combination]:
        """Stored combinations meeting ``r``, by non-decreasing cardinality.

        Linear scan over the store; ties are broken by canonical key so the
        result is identical across runs.
        """
        hits = [c for c in self._by_set.values() if intersect(c.set, r) is not None]
        hits.sort(key=_size_key)
        return hits

    # -- rule registry ----------------------------------------------------

    def register_rule(self, ruleset: RuleSet) -> int:
        """Id of the rule set, assigning the next free id on first sight."""
        rid = self._rule_id.get(ruleset)
        if rid is None:
            rid = len(self._rule_set)
            self._rule_id[ruleset] = rid
            self._rule_set.append(ruleset)
        return rid

    def rule_id(self, ruleset: RuleSet) -> int | None:
        return self._rule_id.get(ruleset)

    def rule_set(self, rid: int) -> RuleSet:
        return self._rule_set[rid]

    @property
    def rule_count(self) -> int:
        return len(self._rule_set)

    def rule_sets(self) -> list[RuleSet]:
        return list(self._rule_set)
