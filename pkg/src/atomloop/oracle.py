"""Brute-force ground truth over the full header space.

Everything here walks all ``2**header_bits`` headers and tests them against
rule predicates directly, without going through the intersection-based
engine, so it can serve as an independent check of class computation and
loop detection on small instances.  The walk is refused above
``HEADER_BITS_CAP`` bits.
"""

from __future__ import annotations

from .setrep import Geometry, MultiRange, RuleSet, Wildcard

HEADER_BITS_CAP = 22


def _check_cap(geometry: Geometry) -> None:
    if geometry.header_bits > HEADER_BITS_CAP:
        raise ValueError(
            f"oracle refuses header spaces over {HEADER_BITS_CAP} bits "
            f"(instance has {geometry.header_bits})"
        )


def _matcher(rule: RuleSet):
    """Compile one predicate into a header->bool function, from its surface
    form (letters or ranges) rather than the engine's internals."""
    if isinstance(rule, Wildcard):
        fixed = 0
        care = 0
        for ch in rule.letters:
            fixed <<= 1
            care <<= 1
            if ch != "*":
                care |= 1
                if ch == "1":
                    fixed |= 1
        return lambda h: h & care == fixed
    assert isinstance(rule, MultiRange)
    fields = list(zip(rule.widths, rule.ranges))

    def match(h: int) -> bool:
        for w, (a, b) in reversed(fields):
            if not a <= h & ((1 << w) - 1) <= b:
                return False
            h >>= w
        return True

    return match


def oracle_classes(rules, geometry: Geometry) -> dict[tuple[int, ...], list[int]]:
    """Partition of all headers by the exact set of rules they match.

    Keys are sorted tuples of rule indices into ``rules``; values list the
    headers of the class in increasing order.
    """
    _check_cap(geometry)
    matchers = [_matcher(r) for r in rules]
    classes: dict[tuple[int, ...], list[int]] = {}
    for h in range(geometry.space_size):
        key = tuple(i for i, m in enumerate(matchers) if m(h))
        classes.setdefault(key, []).append(h)
    return classes


def _walk_has_cycle(succ: dict[str, str]) -> bool:
    done: set[str] = set()
    for start in succ:
        if start in done:
            continue
        path: set[str] = set()
        u = start
        while u in succ and u not in done:
            if u in path:
                return True
            path.add(u)
            u = succ[u]
        done.update(path)
    return False


def oracle_loops(net) -> set[int]:
    """Headers whose forwarding graph has a directed cycle.

    For every header, each node's table is scanned top to bottom for the
    first matching rule; a forward action contributes the node's single out
    edge, anything else (or no match) drops the packet.
    """
    _check_cap(net.geometry)
    tables = []
    for node_id in sorted(net.nodes):
        compiled = [
            (_matcher(rule.match), rule.action) for rule in net.nodes[node_id]
        ]
        tables.append((node_id, compiled))
    looping: set[int] = set()
    for h in range(net.geometry.space_size):
        succ: dict[str, str] = {}
        for node_id, compiled in tables:
            for match, action in compiled:
                if match(h):
                    if action.type == "forward":
                        succ[node_id] = action.to
                    break
        if succ and _walk_has_cycle(succ):
            looping.add(h)
    return looping
