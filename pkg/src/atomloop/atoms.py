"""Incremental maintenance of the uncovered combinations of a rule collection.

Every header belongs to exactly one *class*: the set of headers matching
exactly the same rule sets.  Classes are awkward to represent directly
(complements of wildcards or ranges blow up), but each class is represented
canonically by the intersection of the rules containing it -- its
*combination* -- provided that intersection is not fully covered by the
remaining rules.  This module maintains the collection of those uncovered
combinations as rules are added one by one, keeping for each one:

* ``atsize``  -- the number of headers in the class it represents,
* ``cont``    -- the ids of the rules containing it,
* ``sup``     -- the stored combinations strictly containing it.

Emptiness of a class is always decided by counting (``atsize`` hitting
zero), never by computing complements.  Two interchangeable updates are
provided: ``basic_add`` recomputes inclusion bookkeeping from scratch, and
``add`` repairs it incrementally; both leave the store in the same state,
which the test suite checks field by field.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .setrep import (
    Geometry,
    RuleSet,
    canonical_key,
    cardinality,
    check_shape,
    full_set,
    intersect,
    is_subset,
)
from .store import Combination, CombinationStore, _size_key

log = logging.getLogger("atomloop.atoms")

# Computing the average overlap of combinations enumerates all 2**|cont|
# rule subsets of an atom; past this many containers it is reported as
# unavailable instead.
CONTAINER_ENUM_GATE = 20


class InternalInvariantError(RuntimeError):
    """An atom-size subtraction went negative: the partition bookkeeping is broken."""


def init_store(geometry: Geometry) -> CombinationStore:
    """Fresh store for an empty rule collection: the single combination H."""
    store = CombinationStore(geometry)
    h = full_set(geometry)
    size = geometry.space_size
    store.insert(Combination(h, size=size, atsize=size))
    return store


def _enroll(store: CombinationStore, r: RuleSet) -> tuple[int, bool]:
    """Register r, returning (rule id, whether its set was already added)."""
    check_shape(store.geometry, r)
    rid = store.register_rule(r)
    if r in store.added:
        return rid, True
    store.added.add(r)
    return rid, False


def _shrink(comb: Combination, delta: int) -> None:
    comb.atsize -= delta
    if comb.atsize < 0:
        raise InternalInvariantError(
            f"atom size of {comb.set!r} fell below zero; "
            "a combination was counted twice during subtraction"
        )


def basic_add(store: CombinationStore, r: RuleSet) -> int:
    """Add rule r, rebuilding atom sizes and inclusion data from scratch.

    New combinations are the nonempty meets of stored ones with r.  Atom
    sizes then follow from the partition identity: scanning combinations by
    non-decreasing cardinality and subtracting each one's atom size from
    every strict superset leaves exactly the represented class sizes, and
    combinations left at zero are covered and dropped.
    """
    rid, seen = _enroll(store, r)
    if seen:
        return rid
    # Meet every stored combination with r.  Scanning by non-decreasing
    # cardinality makes the first producer of each new set the minimal one,
    # whose containers seed the new cont list.
    for c in sorted(store.combinations(), key=_size_key):
        t = intersect(c.set, r)
        if t is None or store.contains(t):
            continue
        store.insert(Combination(t, cont=c.cont))
    combos = sorted(store.combinations(), key=_size_key)
    for c in combos:
        c.atsize = c.size
        c.sup = {}
    for i, c in enumerate(combos):
        for d in combos[i + 1 :]:
            if c.size < d.size and is_subset(c.set, d.set):
                c.sup[d.set] = d
    for c in combos:
        for d in c.sup.values():
            _shrink(d, c.atsize)
    removed = 0
    for c in combos:
        if c.atsize == 0:
            store.remove(c.set)
            removed += 1
    for c in store.combinations():
        c.live_sup()
        if is_subset(c.set, r):
            c.cont.append(rid)
    log.debug("basic_add id=%d: %d combinations, %d covered", rid, len(store), removed)
    return rid


def add(store: CombinationStore, r: RuleSet) -> int:
    """Add rule r, updating atom sizes and inclusion data incrementally.

    Observable effect is identical to ``basic_add``.  The work is restricted
    to combinations meeting r: each contributes its meet with r, keeping as
    ``parent`` the minimal producer (two incomparable minimal producers mean
    the meet is covered and can be discarded immediately).  Sizes, sup and
    cont of the new combinations are then derived from their parents in one
    ascending-cardinality sweep, and whatever reaches atom size zero --
    including a parent whose class moved entirely inside r -- is removed.
    """
    rid, seen = _enroll(store, r)
    if seen:
        return rid

    # Parent computation.
    incl: dict[RuleSet, Combination] = {}
    created: list[Combination] = []
    for c in store.intersect_query(r):
        t = intersect(c.set, r)
        cp = incl.get(t)
        if cp is None:
            cp = store.get(t)
            if cp is None:
                cp = Combination(t)
                cp.atsize = cp.size
                cp.is_new = True
                store.insert(cp)
                created.append(cp)
            cp.parent = c
            cp.covered = False
            incl[t] = cp
        elif not is_subset(cp.parent.set, c.set):
            cp.covered = True
    for t, cp in list(incl.items()):
        if cp.covered:
            del incl[t]
            store.remove(t)

    # Atom size computation, by non-decreasing cardinality so every
    # combination's class size is final when it is scanned.
    for c in sorted(incl.values(), key=_size_key):
        if c.atsize == 0:
            continue
        if c.is_new:
            p = c.parent
            _shrink(p, c.atsize)
            c.sup = {p.set: p}
            c.sup.update((d.set, d) for d in p.live_sup())
            c.cont = list(p.cont)
        for d in c.live_sup():
            t = intersect(d.set, r)
            e = incl.get(t)
            if e is not None and e is not c:
                c.sup[e.set] = e
        c.cont.append(rid)
        for d in c.sup.values():
            if d.is_new:
                _shrink(d, c.atsize)

    # Remove covered combinations.
    removed = 0
    for c in list(incl.values()):
        c.sup = {s: d for s, d in c.sup.items() if d.atsize != 0 and d.in_store}
        if c.atsize == 0:
            store.remove(c.set)
            del incl[c.set]
            removed += 1
        elif c.is_new and c.parent.atsize == 0 and c.parent.in_store:
            store.remove(c.parent.set)
            removed += 1
    for c in created:
        c.is_new = False
    for c in list(incl.values()) + created:
        c.parent = None
        c.covered = False
    log.debug(
        "add id=%d: %d combinations, %d created, %d covered",
        rid, len(store), len(created), removed,
    )
    return rid


def compute_uc(geometry: Geometry, rules, algo: str = "add") -> CombinationStore:
    """Fold the rules into a store of uncovered combinations.

    Input rule sets are deduplicated by value; ids are assigned by canonical
    rank over the distinct sets, so any insertion order of the same rules
    yields a literally identical store, cont lists included.
    """
    if algo not in ("add", "basic"):
        raise ValueError(f"unknown algorithm {algo!r}")
    store = init_store(geometry)
    distinct: list[RuleSet] = []
    seen: set[RuleSet] = set()
    for r in rules:
        check_shape(geometry, r)
        if r not in seen:
            seen.add(r)
            distinct.append(r)
    for r in sorted(distinct, key=canonical_key):
        store.register_rule(r)
    step = add if algo == "add" else basic_add
    for r in distinct:
        step(store, r)
    return store


@dataclass(frozen=True)
class OverlapMetrics:
    """Overlap measures of the rule collection.

    k is the largest number of distinct rules containing one header, k_bar
    the average over classes, and K_bar the average number of combinations
    containing a class (None when the enumeration gate tripped).  m counts
    classes, n distinct rule sets.
    """

    k: int
    k_bar: Fraction
    K_bar: Fraction | None
    m: int
    n: int


def overlap_metrics(store: CombinationStore) -> OverlapMetrics:
    combos = store.combinations()
    m = len(combos)
    k = max((len(c.cont) for c in combos), default=0)
    k_bar = Fraction(sum(len(c.cont) for c in combos), m)
    if k > CONTAINER_ENUM_GATE:
        return OverlapMetrics(k=k, k_bar=k_bar, K_bar=None, m=m, n=store.rule_count)
    h = full_set(store.geometry)
    total = 0
    for c in combos:
        sets = [store.rule_set(i) for i in c.cont]
        distinct = {h}
        for mask in range(1, 1 << len(sets)):
            cur = None
            for i, s in enumerate(sets):
                if (mask >> i) & 1:
                    cur = s if cur is None else intersect(cur, s)
            distinct.add(cur)
        total += len(distinct)
    return OverlapMetrics(
        k=k, k_bar=k_bar, K_bar=Fraction(total, m), m=m, n=store.rule_count
    )


def weak_completeness_check(store: CombinationStore) -> bool:
    """Check that every pairwise meet of stored combinations is exactly
    partitioned by the stored combinations inside it.

    Uses the counting form: for each nonempty meet t of a stored pair,
    ``|t|`` must equal the sum of atom sizes over stored combinations
    contained in t.  Verdicts are cached per distinct meet.
    """
    combos = store.combinations()
    verdict: dict[RuleSet, bool] = {}
    for i, c in enumerate(combos):
        for d in combos[i:]:
            t = intersect(c.set, d.set)
            if t is None:
                continue
            ok = verdict.get(t)
            if ok is None:
                covered = sum(e.atsize for e in combos if is_subset(e.set, t))
                ok = covered == cardinality(t)
                verdict[t] = ok
            if not ok:
                return False
    return True
