"""Unit tests for process graph operations."""

from decimal import Decimal

import pytest
from pydantic import ValidationError

from src.core.exceptions import TaskNotFoundException
from src.domain.models.process import ControlFlow, Entity, ProcessModel, Task
from src.domain.services.process_graph import (
    lookup_task, property_totals, property_universe, remove_task_with_splice, to_digraph, validate
)
from tests.fixtures.generators import make_task


def _model(flows, tasks=("a", "b", "c", "d")):
    return ProcessModel(
        name="G",
        entities=(Entity(name="E", tasks=tuple(make_task(t) for t in tasks)),),
        flows=tuple(ControlFlow(source=s, target=t) for s, t in flows),
    )


def _pairs(model):
    return [(flow.source, flow.target) for flow in model.flows]


class TestTaskModel:
    """Tests for Task field validation."""

    def test_negative_property_rejected(self):
        """Test that negative property values are rejected."""
        with pytest.raises(ValidationError):
            Task(name="a", properties={"time": Decimal(-1)})

    def test_uppercase_property_name_rejected(self):
        """Test that property names must be lowercase identifiers."""
        with pytest.raises(ValidationError):
            Task(name="a", properties={"Time": Decimal(1)})

    def test_name_is_trimmed(self):
        """Test that surrounding whitespace is removed from names."""
        assert Task(name="  a  ", properties={}).name == "a"

    def test_missing_property_reads_as_zero(self):
        """Test value_of on an absent property."""
        assert make_task("a", time=3).value_of("cost") == Decimal(0)

    @pytest.mark.parametrize("mutate", [
        lambda p: p.__setitem__("time", Decimal(1)),
        lambda p: p.__delitem__("time"),
        lambda p: p.update(cost=Decimal(1)),
        lambda p: p.pop("time"),
        lambda p: p.clear(),
        lambda p: p.setdefault("cost", Decimal(1)),
    ])
    def test_properties_read_only(self, mutate):
        """Test a task's properties cannot change after construction."""
        task = make_task("a", time=3)
        with pytest.raises(TypeError):
            mutate(task.properties)
        assert task.properties == {"time": Decimal(3)}

    def test_default_properties_read_only(self):
        """Test the empty default is read-only too."""
        with pytest.raises(TypeError):
            Task(name="a").properties["time"] = Decimal(1)

    def test_properties_survive_copy_and_dump(self):
        """Test deep copies and dumps of read-only properties."""
        task = make_task("a", time=3)
        assert task.model_copy(deep=True) == task
        assert task.model_dump(mode="json") == {"name": "a", "properties": {"time": 3}}
        assert hash(task) == hash(make_task("a", time=3))


class TestValidate:
    """Tests for model invariant checks."""

    def test_valid_chain(self, chain_model):
        """Test well-formed 3-task chain."""
        assert validate(chain_model) == []

    def test_duplicate_task_name(self):
        """Test two tasks named A give one violation naming A."""
        model = ProcessModel(
            name="G",
            entities=(
                Entity(name="E1", tasks=(make_task("A"),)),
                Entity(name="E2", tasks=(make_task("A"),)),
            ),
        )
        violations = validate(model)
        assert len(violations) == 1
        assert "'A'" in violations[0]

    def test_dangling_endpoint(self):
        """Test flow to an undefined task gives one violation naming the flow."""
        model = ProcessModel(
            name="G",
            entities=(Entity(name="E", tasks=(make_task("A"),)),),
            flows=(ControlFlow(source="A", target="Z"),),
        )
        violations = validate(model)
        assert len(violations) == 1
        assert "'A' -> 'Z'" in violations[0]

    def test_self_loop_and_duplicate_flow(self):
        """Test self-loops and duplicate flows are reported."""
        model = _model([("a", "a"), ("a", "b"), ("a", "b")])
        violations = validate(model)
        assert any("self-loop" in v for v in violations)
        assert any("duplicate flow" in v for v in violations)

    def test_duplicate_entity_name(self):
        """Test duplicate entity names are reported."""
        model = ProcessModel(name="G", entities=(Entity(name="E"), Entity(name="E")))
        assert validate(model) == ["duplicate entity name 'E' (2 occurrences)"]


class TestLookupTask:
    """Tests for task lookup."""

    def test_existing_task(self, four_task_model):
        """Test lookup returns owning entity and record."""
        entity, task = lookup_task(four_task_model, "C")
        assert entity.name == "Test"
        assert task.value_of("importance") == Decimal(6)

    def test_absent_task(self, four_task_model):
        """Test lookup of an unknown name."""
        assert lookup_task(four_task_model, "Z") is None

    def test_empty_model(self):
        """Test lookup in an empty model."""
        assert lookup_task(ProcessModel(name="G"), "A") is None


class TestRemoveTaskWithSplice:
    """Tests for task removal with flow splicing."""

    def test_transitive_splice(self):
        """Test a->b->c minus b gives a->c."""
        result = remove_task_with_splice(_model([("a", "b"), ("b", "c")]), "b")
        assert _pairs(result) == [("a", "c")]
        assert "b" not in result.task_names()

    def test_fan_out_splice(self):
        """Test fan-out through the removed task."""
        result = remove_task_with_splice(_model([("a", "b"), ("b", "c"), ("b", "d")]), "b")
        assert _pairs(result) == [("a", "c"), ("a", "d")]

    def test_sink_removal_adds_nothing(self):
        """Test removing a task without successors."""
        result = remove_task_with_splice(_model([("a", "b"), ("a", "c")]), "b")
        assert _pairs(result) == [("a", "c")]

    def test_existing_flow_not_duplicated(self):
        """Test splice skips pairs that already exist."""
        result = remove_task_with_splice(_model([("a", "b"), ("b", "c"), ("a", "c")]), "b")
        assert _pairs(result) == [("a", "c")]
        assert validate(result) == []

    def test_cycle_splice_drops_self_loop(self):
        """Test a->b->a minus b leaves no self-loop."""
        result = remove_task_with_splice(_model([("a", "b"), ("b", "a")]), "b")
        assert _pairs(result) == []

    def test_unknown_task(self, chain_model):
        """Test removing an unknown task names it."""
        with pytest.raises(TaskNotFoundException) as exc_info:
            remove_task_with_splice(chain_model, "zzz")
        assert exc_info.value.details == {'task': 'zzz'}

    def test_input_not_mutated(self, chain_model):
        """Test the original model is unchanged."""
        remove_task_with_splice(chain_model, "b")
        assert chain_model.task_names() == ["a", "b", "c"]
        assert len(chain_model.flows) == 2


class TestGraphHelpers:
    """Tests for digraph conversion and property helpers."""

    def test_to_digraph(self, chain_model):
        """Test nodes and edges follow model order."""
        graph = to_digraph(chain_model)
        assert list(graph.nodes) == ["a", "b", "c"]
        assert list(graph.edges) == [("a", "b"), ("b", "c")]
        assert graph.nodes["a"]["entity"] == "E"

    def test_property_universe_first_seen_order(self):
        """Test property names are collected in first-seen order."""
        model = ProcessModel(name="G", entities=(Entity(name="E", tasks=(
            make_task("a", time=1),
            make_task("b", cost=2, time=3),
            make_task("c", importance=4),
        )),))
        assert property_universe(model) == ["time", "cost", "importance"]

    def test_property_totals(self, four_task_model):
        """Test sums over all tasks."""
        totals = property_totals(four_task_model)
        assert totals == {"importance": Decimal(27), "time": Decimal(13)}
