"""Fixture and adversarial instance construction.

Four families:

* ``fig2``     -- the 8-header toy collection of four overlapping ranges,
  used as the canonical fixture throughout the tests.
* ``hsa``      -- a one-node table of nested wildcard drop rules followed by
  a forward-to-self catch-all; subtraction-based analyzers need
  exponential work here while the class count stays at header_bits + 1.
* ``veriflow`` -- thin axis-aligned slabs in a d-field space plus a
  catch-all; difference-based sub-class splitting explodes to p**d pieces
  while the true class count is d*p + 1.
* ``random``   -- seeded random rules/instances for oracle fuzzing.
"""

from __future__ import annotations

import random

from .network import Action, ForwardingRule, NetworkInstance
from .setrep import Geometry, MultiRange, RuleSet, Wildcard, full_set

FIG2_GEOMETRY = Geometry.multirange((3,))


def gen_fig2() -> list[MultiRange]:
    """The four single-field ranges r1..r4 over H = {0..7}."""
    return [
        MultiRange((3,), [(0, 4)]),
        MultiRange((3,), [(1, 5)]),
        MultiRange((3,), [(2, 6)]),
        MultiRange((3,), [(3, 3)]),
    ]


def fig2_instance() -> NetworkInstance:
    """One drop-only node carrying the fig2 rules (class structure only)."""
    rules = [ForwardingRule(r, Action.drop()) for r in gen_fig2()]
    net = NetworkInstance(FIG2_GEOMETRY, {"n0": rules})
    net.validate()
    return net


def gen_hsa_hard(header_bits: int, node_id: str = "n0") -> NetworkInstance:
    """One node, header_bits+1 nested drop rules, then forward-to-self.

    The drop rules are 1^L, then 1^(L-i) 0 *^(i-1) for i = 1..L; they
    partition the header space, so the catch-all never wins and the
    network is loop-free.
    """
    if header_bits < 1:
        raise ValueError("header_bits must be >= 1")
    geo = Geometry.wildcard(header_bits)
    table = [ForwardingRule(Wildcard("1" * header_bits), Action.drop())]
    for i in range(1, header_bits + 1):
        letters = "1" * (header_bits - i) + "0" + "*" * (i - 1)
        table.append(ForwardingRule(Wildcard(letters), Action.drop()))
    table.append(ForwardingRule(full_set(geo), Action.forward(node_id)))
    net = NetworkInstance(geo, {node_id: table})
    net.validate()
    return net


def gen_veriflow_hard(
    d: int,
    p: int,
    width: int | None = None,
    breakpoints=None,
    b: int | None = None,
    node_id: str = "n0",
) -> NetworkInstance:
    """One node, d*p pairwise-disjoint slab drop rules, then forward-to-self.

    Slab (i, j) fixes field i to breakpoint a_j and every later field to b,
    leaving earlier fields free.  Requires 0 < a_1 < ... < a_p < b < 2**width.
    """
    if d < 1 or p < 1:
        raise ValueError("need d >= 1 and p >= 1")
    if breakpoints is None:
        breakpoints = list(range(1, p + 1))
    breakpoints = [int(a) for a in breakpoints]
    if b is None:
        b = (breakpoints[-1] + 1) if breakpoints else 1
    if width is None:
        width = max(2, int(b).bit_length())
    if len(breakpoints) != p:
        raise ValueError(f"{len(breakpoints)} breakpoints for p={p}")
    ok = all(x < y for x, y in zip(breakpoints, breakpoints[1:]))
    if not ok or not breakpoints or not 0 < breakpoints[0] or not breakpoints[-1] < b < (1 << width):
        raise ValueError(
            f"breakpoints must satisfy 0 < a_1 < ... < a_p < b < 2^width "
            f"(got {breakpoints}, b={b}, width={width})"
        )
    geo = Geometry.multirange((width,) * d)
    top = (1 << width) - 1
    table = []
    for i in range(1, d + 1):
        for a in breakpoints:
            ranges = [(0, top)] * (i - 1) + [(a, a)] + [(b, b)] * (d - i)
            table.append(ForwardingRule(MultiRange(geo.field_widths, ranges), Action.drop()))
    table.append(ForwardingRule(full_set(geo), Action.forward(node_id)))
    net = NetworkInstance(geo, {node_id: table})
    net.validate()
    return net


def gen_random_rules(
    seed: int, n: int, geometry: Geometry, star_density: float = 0.5
) -> list[RuleSet]:
    """n seeded random rule sets; identical output for identical arguments.

    Wildcard letters are ``*`` with probability star_density; multi-range
    fields are uniform random subintervals.
    """
    rng = random.Random(seed)
    return [_random_rule(rng, geometry, star_density) for _ in range(n)]


def _random_rule(rng: random.Random, geometry: Geometry, star_density: float) -> RuleSet:
    if geometry.kind == "wildcard":
        letters = "".join(
            "*" if rng.random() < star_density else rng.choice("01")
            for _ in range(geometry.header_bits)
        )
        return Wildcard(letters)
    ranges = []
    for w in geometry.field_widths:
        lo = rng.randint(0, (1 << w) - 1)
        hi = rng.randint(0, (1 << w) - 1)
        ranges.append((min(lo, hi), max(lo, hi)))
    return MultiRange(geometry.field_widths, ranges)


def gen_random_instance(
    seed: int,
    n: int,
    geometry: Geometry,
    star_density: float = 0.5,
    num_nodes: int = 2,
    forward_prob: float = 0.4,
) -> NetworkInstance:
    """Seeded random network over a shared pool of random rules.

    Every node gets a shuffled subset of the pool with random actions, so
    loops appear in some seeds and not others.
    """
    rng = random.Random(seed)
    pool = [_random_rule(rng, geometry, star_density) for _ in range(n)]
    node_ids = [f"n{i}" for i in range(num_nodes)]
    nodes = {}
    for node_id in node_ids:
        picks = rng.sample(pool, rng.randint(1, n)) if n else []
        table = []
        for r in picks:
            roll = rng.random()
            if roll < forward_prob:
                action = Action.forward(rng.choice(node_ids))
            elif roll < forward_prob + (1 - forward_prob) / 2:
                action = Action.drop()
            else:
                action = Action.deliver()
            table.append(ForwardingRule(r, action))
        nodes[node_id] = table
    net = NetworkInstance(geometry, nodes)
    net.validate()
    return net
