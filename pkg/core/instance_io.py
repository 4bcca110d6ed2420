"""
Instance and solution files
JSON formats parsed through pydantic schemas; writer output is byte-deterministic
"""
from __future__ import annotations
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union
import json
import logging

from pydantic import BaseModel, ConfigDict, StrictInt, ValidationError

from core.errors import InstanceParseError, InstanceValidationError
from core.model import (
    CoordinationEvent, Graph, ProblemInstance, RiskyEdge, Solution,
    edge_key, to_fraction, validate_instance,
)

logger = logging.getLogger(__name__)

CostValue = Union[StrictInt, float, str]


class InstanceFile(BaseModel):
    """Instance file schema"""
    model_config = ConfigDict(extra="forbid")

    nodes: StrictInt
    edges: List[Tuple[StrictInt, StrictInt, CostValue]]
    risky: List[Tuple[StrictInt, StrictInt, CostValue, List[StrictInt]]] = []
    supporter_cost: CostValue
    starts: List[StrictInt]
    goals: List[StrictInt]
    horizon: Optional[StrictInt] = None


class EventRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    step: StrictInt
    receiver: StrictInt
    supporter: StrictInt
    edge: Tuple[StrictInt, StrictInt]
    support_node: StrictInt


class SolutionFile(BaseModel):
    """Solution file schema"""
    model_config = ConfigDict(extra="forbid")

    paths: List[List[StrictInt]]
    events: List[EventRecord] = []
    per_robot_cost: List[CostValue] = []
    total_cost: CostValue


def encode_cost(value: Fraction) -> Union[int, float, str]:
    """Integer if integral, float if exact, else 'p/q'"""
    value = to_fraction(value)
    if value.denominator == 1:
        return value.numerator
    as_float = float(value)
    if Fraction(repr(as_float)) == value:
        return as_float
    return f"{value.numerator}/{value.denominator}"


def _cost(value: Any, location: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InstanceParseError(f"invalid cost {value!r}", location)


def _location(loc: Tuple) -> str:
    parts = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts) or "<root>"


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError(e.msg, f"line {e.lineno} column {e.colno}")


def _parse(model: type, data: Any) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = _location(first["loc"])
        if first["type"] == "extra_forbidden":
            raise InstanceParseError(f"unknown field '{first['loc'][-1]}'", location)
        raise InstanceParseError(first["msg"], location)


def instance_from_dict(data: Any, validate: bool = True) -> ProblemInstance:
    """
    Build an instance from decoded JSON

    Raises:
        InstanceParseError: schema violation with its field path
        InstanceValidationError: model invariants broken
    """
    parsed = _parse(InstanceFile, data)

    edges = {}
    for i, (u, v, cost) in enumerate(parsed.edges):
        key = edge_key(u, v)
        if key in edges:
            raise InstanceParseError(f"duplicate edge {key}", f"edges[{i}]")
        edges[key] = _cost(cost, f"edges[{i}][2]")

    risky = {}
    for i, (u, v, reduced, support) in enumerate(parsed.risky):
        key = edge_key(u, v)
        if key in risky:
            raise InstanceParseError(f"duplicate risky edge {key}", f"risky[{i}]")
        risky[key] = RiskyEdge(_cost(reduced, f"risky[{i}][2]"), frozenset(support))

    inst = ProblemInstance(
        graph=Graph(node_count=parsed.nodes, edges=edges, risky=risky),
        starts=tuple(parsed.starts),
        goals=tuple(parsed.goals),
        supporter_cost=_cost(parsed.supporter_cost, "supporter_cost"),
        horizon=parsed.horizon,
    )

    if validate:
        violations = validate_instance(inst)
        if violations:
            raise InstanceValidationError(violations)
    return inst


def instance_to_dict(inst: ProblemInstance) -> dict:
    """Instance-file dictionary with fixed key order and sorted edges"""
    graph = inst.graph
    data = {
        "nodes": graph.node_count,
        "edges": [[u, v, encode_cost(c)] for (u, v), c in sorted(graph.edges.items())],
        "risky": [
            [u, v, encode_cost(info.reduced_cost), sorted(info.support_nodes)]
            for (u, v), info in sorted(graph.risky.items())
        ],
        "supporter_cost": encode_cost(inst.supporter_cost),
        "starts": list(inst.starts),
        "goals": list(inst.goals),
    }
    if inst.horizon is not None:
        data["horizon"] = inst.horizon
    return data


def read_instance(text: str, validate: bool = True) -> ProblemInstance:
    """Parse instance-file text"""
    return instance_from_dict(_load_json(text), validate=validate)


def write_instance(inst: ProblemInstance) -> str:
    """Serialize an instance to instance-file text"""
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def solution_from_dict(data: Any) -> Solution:
    parsed = _parse(SolutionFile, data)
    return Solution(
        paths=tuple(tuple(p) for p in parsed.paths),
        events=tuple(
            CoordinationEvent(e.step, e.receiver, e.supporter, tuple(e.edge), e.support_node)
            for e in parsed.events
        ),
        per_robot_cost=tuple(
            _cost(c, f"per_robot_cost[{i}]") for i, c in enumerate(parsed.per_robot_cost)),
        total_cost=_cost(parsed.total_cost, "total_cost"),
    )


def solution_to_dict(sol: Solution) -> dict:
    data = sol.to_dict()
    data["per_robot_cost"] = [encode_cost(c) for c in sol.per_robot_cost]
    data["total_cost"] = encode_cost(sol.total_cost)
    return data


def read_solution(text: str) -> Solution:
    """Parse solution-file text"""
    return solution_from_dict(_load_json(text))


def write_solution(sol: Solution) -> str:
    """Serialize a solution to solution-file text"""
    return json.dumps(solution_to_dict(sol), indent=2) + "\n"


def load_instance(path: Union[str, Path], validate: bool = True) -> ProblemInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read instance {path}: {e}")
        raise
    return read_instance(text, validate=validate)


def save_instance(path: Union[str, Path], inst: ProblemInstance) -> None:
    try:
        Path(path).write_text(write_instance(inst), encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot write instance {path}: {e}")
        raise
    logger.info(f"💾 Instance saved to {path}")


def load_solution(path: Union[str, Path]) -> Solution:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read solution {path}: {e}")
        raise
    return read_solution(text)


def save_solution(path: Union[str, Path], sol: Solution) -> None:
    try:
        Path(path).write_text(write_solution(sol), encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot write solution {path}: {e}")
        raise
    logger.info(f"💾 Solution saved to {path}")
