"""Network model and per-class forwarding-loop detection.

A network is a set of named nodes, each with an ordered forwarding table;
the first rule matching a header decides the action.  All headers in one
class take identical decisions everywhere, so loop detection runs once per
class: build the class's one-out-edge-per-node graph by merging the
occurrence lists of its containing rules, then chase successor pointers.

Forward targets define the graph edges; no separate topology section
exists, so a table may forward to any declared node.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .atoms import compute_uc
from .setrep import (
    Geometry,
    RuleSet,
    canonical_key,
    check_shape,
    contains_header,
    format_ruleset,
    iter_headers,
)
from .store import Combination

WITNESS_CAP = 1 << 20

FORWARD = "forward"
DROP = "drop"
DELIVER = "deliver"


@dataclass(frozen=True)
class Action:
    type: str
    to: str | None = None

    def __post_init__(self):
        if self.type == FORWARD:
            if not self.to:
                raise ValueError("forward action needs a target node")
        elif self.type in (DROP, DELIVER):
            if self.to is not None:
                raise ValueError(f"{self.type} action takes no target")
        else:
            raise ValueError(f"unknown action type {self.type!r}")

    @classmethod
    def forward(cls, to: str) -> "Action":
        return cls(FORWARD, to)

    @classmethod
    def drop(cls) -> "Action":
        return cls(DROP)

    @classmethod
    def deliver(cls) -> "Action":
        return cls(DELIVER)


@dataclass(frozen=True)
class ForwardingRule:
    match: RuleSet
    action: Action


@dataclass
class NetworkInstance:
    geometry: Geometry
    nodes: dict[str, list[ForwardingRule]] = field(default_factory=dict)

    def validate(self) -> None:
        """Raise ValueError if a forward target is undeclared or a predicate
        does not fit the instance geometry."""
        for node_id, table in self.nodes.items():
            for i, rule in enumerate(table):
                check_shape(self.geometry, rule.match)
                act = rule.action
                if act.type == FORWARD and act.to not in self.nodes:
                    raise ValueError(
                        f"node {node_id!r} rule {i} forwards to undeclared node {act.to!r}"
                    )


# Occurrences of one rule set across the network: (node id, table index,
# action), sorted by node then index.
RuleIndex = dict[int, list[tuple[str, int, Action]]]


def build_rule_index(net: NetworkInstance) -> tuple[list[RuleSet], RuleIndex]:
    """Deduplicate predicates network-wide and list each one's occurrences.

    Rule ids are ranks in canonical-key order over the distinct sets, the
    same ids ``compute_uc`` assigns, so container lists and this index can
    be joined directly.
    """
    distinct: dict[RuleSet, None] = {}
    for table in net.nodes.values():
        for rule in table:
            distinct[rule.match] = None
    ordered = sorted(distinct, key=canonical_key)
    ids = {r: i for i, r in enumerate(ordered)}
    index: RuleIndex = {i: [] for i in range(len(ordered))}
    for node_id in sorted(net.nodes):
        for i, rule in enumerate(net.nodes[node_id]):
            index[ids[rule.match]].append((node_id, i, rule.action))
    return ordered, index


def forwarding_graph(
    atom_containers, index: RuleIndex, net: NetworkInstance
) -> dict[str, str]:
    """Successor map of the class whose containing rules are given by id.

    At each node, the lowest-index table entry among the containing rules
    wins; only a forward action contributes an edge, so every node has at
    most one successor and dropped/delivered/unmatched nodes have none.
    """
    best: dict[str, tuple[int, Action]] = {}
    for rid in atom_containers:
        for node_id, idx, action in index[rid]:
            cur = best.get(node_id)
            if cur is None or idx < cur[0]:
                best[node_id] = (idx, action)
    return {
        u: action.to for u, (_, action) in best.items() if action.type == FORWARD
    }


def has_cycle(succ: dict[str, str]) -> list[str] | None:
    """Some directed cycle of a functional graph, or None.

    Chases successor pointers with visit stamps, scanning start nodes in
    node-id order, so the returned cycle is the same on every run.
    """
    state: dict[str, int] = {}  # 1 = on current walk, 2 = exhausted
    for start in sorted(succ):
        if state.get(start):
            continue
        path: list[str] = []
        u = start
        while u in succ and not state.get(u):
            state[u] = 1
            path.append(u)
            u = succ[u]
        if state.get(u) == 1:
            cycle = path[path.index(u) :]
            return cycle
        for v in path:
            state[v] = 2
    return None


def witness_header(comb: Combination, non_containers, cap: int = WITNESS_CAP) -> int | None:
    """First header of the combination belonging to no non-container.

    Enumeration runs in increasing header order and gives up after ``cap``
    candidates; a nonzero atom size already proves such a header exists, so
    the witness is purely illustrative.
    """
    for n, h in enumerate(iter_headers(comb.set)):
        if n >= cap:
            return None
        if all(not contains_header(s, h) for s in non_containers):
            return h
    return None


@dataclass(frozen=True)
class LoopRecord:
    """One looping header class."""

    combination: str
    containers: tuple[int, ...]
    atom_size: int
    cycle: tuple[str, ...]
    witness: int | None = None


@dataclass
class LoopReport:
    records: list[LoopRecord]
    atom_count: int
    distinct_rules: int
    store: object  # CombinationStore, kept for metrics reporting

    @property
    def has_loop(self) -> bool:
        return bool(self.records)


def scan_loops(
    store,
    rule_sets: list[RuleSet],
    index: RuleIndex,
    net: NetworkInstance,
    first: bool = False,
    want_witness: bool = False,
    jobs: int = 1,
) -> list[LoopRecord]:
    """Cycle-check every stored combination's class graph.

    Combinations are visited in canonical-key order and records returned in
    that order regardless of ``jobs``.
    """

    def probe(comb: Combination) -> LoopRecord | None:
        cycle = has_cycle(forwarding_graph(comb.cont, index, net))
        if cycle is None:
            return None
        witness = None
        if want_witness:
            others = [s for i, s in enumerate(rule_sets) if i not in set(comb.cont)]
            witness = witness_header(comb, others)
        return LoopRecord(
            combination=format_ruleset(comb.set),
            containers=tuple(sorted(comb.cont)),
            atom_size=comb.atsize,
            cycle=tuple(cycle),
            witness=witness,
        )

    combos = store.combinations()
    if jobs > 1 and not first:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            hits = pool.map(probe, combos)
            return [rec for rec in hits if rec is not None]
    records = []
    for comb in combos:
        rec = probe(comb)
        if rec is not None:
            records.append(rec)
            if first:
                break
    return records


def detect_loops(
    net: NetworkInstance,
    algo: str = "add",
    first: bool = False,
    want_witness: bool = False,
    jobs: int = 1,
) -> LoopReport:
    """Full pipeline: classes of the network's rule collection, then one
    cycle check per class."""
    rule_sets, index = build_rule_index(net)
    store = compute_uc(net.geometry, rule_sets, algo=algo)
    records = scan_loops(
        store, rule_sets, index, net, first=first, want_witness=want_witness, jobs=jobs
    )
    return LoopReport(
        records=records,
        atom_count=len(store),
        distinct_rules=store.rule_count,
        store=store,
    )
