"""Pytest configuration and shared fixtures."""

from decimal import Decimal
import logging

import pytest

from src.domain.models.constraints import ConstraintRule, Objective
from src.domain.models.ilp import ConstraintRow, IlpProblem, ObjectiveRow
from src.domain.models.process import ControlFlow, Entity, ProcessModel
from src.infrastructure.act_dsl import serialize_model
from tests.fixtures.case_study import REQUIREMENTS, build_case_study_model
from tests.fixtures.generators import make_task


@pytest.fixture(autouse=True)
def restore_root_logging():
    """Undo the handler the CLI installs on the root logger."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def chain_model():
    """Three tasks a -> b -> c in one entity."""
    return ProcessModel(
        name="G",
        entities=(Entity(name="E", tasks=(make_task("a"), make_task("b"), make_task("c"))),),
        flows=(ControlFlow(source="a", target="b"), ControlFlow(source="b", target="c")),
    )


@pytest.fixture
def four_task_model():
    """Tasks A..D with importance 10, 7, 6, 4 and time 5, 4, 3, 1."""
    return ProcessModel(
        name="Four",
        entities=(
            Entity(name="Design", tasks=(
                make_task("A", importance=10, time=5),
                make_task("B", importance=7, time=4),
            )),
            Entity(name="Test", tasks=(
                make_task("C", importance=6, time=3),
                make_task("D", importance=4, time=1),
            )),
        ),
        flows=(
            ControlFlow(source="A", target="B"),
            ControlFlow(source="B", target="C"),
            ControlFlow(source="C", target="D"),
        ),
    )


@pytest.fixture
def four_task_objective():
    return Objective(property="importance", direction="max")


@pytest.fixture
def four_task_time_limit():
    return (ConstraintRule(property="time", relation="less", value=Decimal(9)),)


@pytest.fixture
def four_task_problem():
    """max 10A + 7B + 6C + 4D subject to 5A + 4B + 3C + D <= 9."""
    return IlpProblem(
        variables=("A", "B", "C", "D"),
        objective=ObjectiveRow(direction="max", coefficients=tuple(Decimal(v) for v in (10, 7, 6, 4))),
        rows=(ConstraintRow(
            coefficients=tuple(Decimal(v) for v in (5, 4, 3, 1)),
            relation="<=",
            bound=Decimal(9),
        ),),
    )


@pytest.fixture
def case_study_model():
    """Seeded 5-entity, 49-task model."""
    return build_case_study_model()


@pytest.fixture
def case_study_text(case_study_model):
    return serialize_model(case_study_model)


@pytest.fixture
def case_study_requirements():
    return REQUIREMENTS
