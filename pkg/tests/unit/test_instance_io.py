import json
from fractions import Fraction

import pytest

from core.errors import InstanceParseError, InstanceValidationError
from core.instance_io import (
    encode_cost, instance_to_dict, load_instance, read_instance, read_solution, save_instance,
    write_instance, write_solution,
)
from core.model import Graph, ProblemInstance


def test_round_trip(t1):
    assert read_instance(write_instance(t1)) == t1


def test_writer_is_deterministic(t1):
    assert write_instance(t1) == write_instance(read_instance(write_instance(t1)))


def test_unknown_field_is_named(t1):
    data = instance_to_dict(t1)
    data["colour"] = "blue"
    with pytest.raises(InstanceParseError) as excinfo:
        read_instance(json.dumps(data))
    assert "colour" in str(excinfo.value)


def test_goal_out_of_range_fails_validation(t1):
    data = instance_to_dict(t1)
    data["goals"] = [4, 3]
    with pytest.raises(InstanceValidationError) as excinfo:
        read_instance(json.dumps(data))
    assert any(v.startswith("goals[0]") for v in excinfo.value.violations)


def test_syntax_error_has_line_location():
    with pytest.raises(InstanceParseError) as excinfo:
        read_instance('{\n  "nodes": 4,\n  "edges": [\n')
    assert excinfo.value.location.startswith("line ")


def test_bad_field_type_has_field_path(t1):
    data = instance_to_dict(t1)
    data["edges"][1] = [1, 2, [10]]
    with pytest.raises(InstanceParseError) as excinfo:
        read_instance(json.dumps(data))
    assert excinfo.value.location.startswith("edges[1]")


def test_duplicate_edge(t1):
    data = instance_to_dict(t1)
    data["edges"].append([2, 1, 4])
    with pytest.raises(InstanceParseError):
        read_instance(json.dumps(data))


def test_rational_costs_survive(t1):
    graph = Graph.build(2, edges=[(0, 1, Fraction(1, 3))])
    inst = ProblemInstance(graph=graph, starts=(0,), goals=(1,), supporter_cost=Fraction(1, 2), horizon=5)
    text = write_instance(inst)
    assert '"1/3"' in text
    assert read_instance(text) == inst


def test_encode_cost():
    assert encode_cost(Fraction(3)) == 3
    assert encode_cost(Fraction(1, 4)) == 0.25
    assert encode_cost(Fraction(2, 3)) == "2/3"


def test_solution_round_trip(t1_optimal):
    assert read_solution(write_solution(t1_optimal)) == t1_optimal


def test_solution_unknown_field():
    with pytest.raises(InstanceParseError):
        read_solution('{"paths": [[0]], "total_cost": 0, "extra": 1}')


def test_file_helpers(tmp_path, t1):
    path = tmp_path / "t1.json"
    save_instance(path, t1)
    assert load_instance(path) == t1
