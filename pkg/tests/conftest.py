from __future__ import annotations

import pytest

import atomloop as al


def brute_headers(ruleset) -> set[int]:
    """Headers of a rule set by literal text-form matching.

    Deliberately avoids the engine's integer tricks: wildcards are compared
    character by character against binary strings, ranges field by field.
    """
    if isinstance(ruleset, al.Wildcard):
        length = ruleset.length
        letters = ruleset.letters
        return {
            h
            for h in range(1 << length)
            if all(
                e == "*" or e == x for e, x in zip(letters, format(h, f"0{length}b"))
            )
        }
    widths = ruleset.widths
    total = sum(widths)
    out = set()
    for h in range(1 << total):
        rest = h
        vals = []
        for w in reversed(widths):
            vals.append(rest & ((1 << w) - 1))
            rest >>= w
        vals.reverse()
        if all(a <= v <= b for v, (a, b) in zip(vals, ruleset.ranges)):
            out.add(h)
    return out


def snapshot(store):
    """Comparable view of a store: key, sizes, containers and sup per combination."""
    return [
        (
            c.key,
            c.size,
            c.atsize,
            tuple(sorted(c.cont)),
            tuple(sorted(d.key for d in c.live_sup())),
        )
        for c in store.combinations()
    ]


def assert_store_invariants(store):
    """Structural invariants that must hold after every completed add."""
    combos = store.combinations()
    space = store.geometry.space_size

    # Atom sizes are positive and partition the header space.
    assert all(c.atsize >= 1 for c in combos)
    assert sum(c.atsize for c in combos) == space

    # |d| = sum of atom sizes of stored combinations inside d.
    for d in combos:
        covered = sum(c.atsize for c in combos if al.is_subset(c.set, d.set))
        assert covered == d.size, f"partition identity broken for {d.set!r}"

    # sup is exactly the stored strict supersets.
    for c in combos:
        expect = {
            d.set
            for d in combos
            if d is not c and al.is_subset(c.set, d.set)
        }
        assert {d.set for d in c.live_sup()} == expect, f"sup wrong for {c.set!r}"

    # cont is exactly the containing added rules, and is injective.
    ids_of = {r: store.rule_id(r) for r in store.added}
    for c in combos:
        expect = {rid for r, rid in ids_of.items() if al.is_subset(c.set, r)}
        assert set(c.cont) == expect, f"cont wrong for {c.set!r}"
        assert len(set(c.cont)) == len(c.cont)
    assert len({tuple(sorted(c.cont)) for c in combos}) == len(combos)


@pytest.fixture
def fig2_rules():
    return al.gen_fig2()


@pytest.fixture
def fig2_store(fig2_rules):
    return al.compute_uc(al.FIG2_GEOMETRY, fig2_rules)
