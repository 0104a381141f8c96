"""Instance-file and report serialization.

Instance files are JSON documents:

    {
      "kind": "wildcard" | "multirange",
      "header_bits": <int>,            # wildcard instances
      "field_widths": [<int>, ...],    # multirange instances
      "nodes": [
        {"id": "<node>", "rules": [
          {"match": "<wildcard>" | [[lo, hi], ...],
           "action": {"type": "drop" | "deliver" | "forward", "to": "<node>"}}

        ]}
      ]
    }

Validation errors carry the JSON path of the offending value.  The loop
report schema shipped as ``report_schema.json`` describes the ``loops``
command output.
"""

from __future__ import annotations

import json
from importlib import resources

from .network import Action, ForwardingRule, NetworkInstance
from .setrep import Geometry, ParseError, Wildcard, multirange_from_data


class InstanceError(ValueError):
    """Invalid instance document; the message names the JSON path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(value, types, path: str, what: str):
    if not isinstance(value, types):
        raise InstanceError(path, f"expected {what}, got {type(value).__name__}")
    return value


def instance_from_data(data) -> NetworkInstance:
    """Build and validate a NetworkInstance from decoded JSON."""
    _expect(data, dict, "$", "an object")
    kind = _expect(data.get("kind"), str, "$.kind", "a string")
    try:
        if kind == "wildcard":
            bits = _expect(data.get("header_bits"), int, "$.header_bits", "an integer")
            geometry = Geometry.wildcard(bits)
        elif kind == "multirange":
            widths = _expect(data.get("field_widths"), list, "$.field_widths", "an array")
            geometry = Geometry.multirange(widths)
        else:
            raise InstanceError("$.kind", f"unknown kind {kind!r}")
    except (ValueError, TypeError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError("$", str(exc)) from exc

    nodes: dict[str, list[ForwardingRule]] = {}
    node_list = _expect(data.get("nodes"), list, "$.nodes", "an array")
    for i, node in enumerate(node_list):
        path = f"$.nodes[{i}]"
        _expect(node, dict, path, "an object")
        node_id = _expect(node.get("id"), str, f"{path}.id", "a string")
        if node_id in nodes:
            raise InstanceError(f"{path}.id", f"duplicate node id {node_id!r}")
        rules = []
        for j, rule in enumerate(_expect(node.get("rules"), list, f"{path}.rules", "an array")):
            rpath = f"{path}.rules[{j}]"
            _expect(rule, dict, rpath, "an object")
            rules.append(
                ForwardingRule(
                    match=_parse_match(rule.get("match"), geometry, f"{rpath}.match"),
                    action=_parse_action(rule.get("action"), f"{rpath}.action"),
                )
            )
        nodes[node_id] = rules
    for node_id, table in nodes.items():
        for j, rule in enumerate(table):
            act = rule.action
            if act.type == "forward" and act.to not in nodes:
                raise InstanceError(
                    f"$.nodes[{list(nodes).index(node_id)}].rules[{j}].action.to",
                    f"undeclared forward target {act.to!r}",
                )
    return NetworkInstance(geometry, nodes)


def _parse_match(value, geometry: Geometry, path: str):
    try:
        if geometry.kind == "wildcard":
            text = _expect(value, str, path, "a wildcard string")
            w = Wildcard(text)
            if w.length != geometry.header_bits:
                raise ParseError(
                    f"wildcard has {w.length} letters, instance declares {geometry.header_bits}"
                )
            return w
        _expect(value, list, path, "an array of [lo, hi] pairs")
        return multirange_from_data(value, geometry)
    except ParseError as exc:
        raise InstanceError(path, str(exc)) from exc


def _parse_action(value, path: str) -> Action:
    _expect(value, dict, path, "an object")
    atype = _expect(value.get("type"), str, f"{path}.type", "a string")
    to = value.get("to")
    try:
        if atype == "forward":
            return Action.forward(_expect(to, str, f"{path}.to", "a node id"))
        if to is not None:
            raise InstanceError(f"{path}.to", f"{atype} action takes no target")
        return Action(atype)
    except ValueError as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(path, str(exc)) from exc


def load_instance(fp) -> NetworkInstance:
    """Read an instance document from a file object."""
    try:
        data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise InstanceError("$", f"not valid JSON: {exc}") from exc
    return instance_from_data(data)


def instance_to_data(net: NetworkInstance) -> dict:
    if net.geometry.kind == "wildcard":
        head = {"kind": "wildcard", "header_bits": net.geometry.header_bits}
    else:
        head = {"kind": "multirange", "field_widths": list(net.geometry.field_widths)}
    head["nodes"] = [
        {
            "id": node_id,
            "rules": [
                {
                    "match": rule.match.letters
                    if net.geometry.kind == "wildcard"
                    else [list(p) for p in rule.match.ranges],
                    "action": {"type": rule.action.type, "to": rule.action.to}
                    if rule.action.type == "forward"
                    else {"type": rule.action.type},
                }
                for rule in table
            ],
        }
        for node_id, table in net.nodes.items()
    ]
    return head


def dump_instance(net: NetworkInstance, fp) -> None:
    json.dump(instance_to_data(net), fp, indent=2)
    fp.write("\n")


def report_schema() -> dict:
    """The JSON schema the ``loops`` report conforms to."""
    text = resources.files("atomloop").joinpath("report_schema.json").read_text()
    return json.loads(text)
