"""Fixtures for command-line tests."""

import json

import pytest

from src.infrastructure.act_dsl import serialize_model


@pytest.fixture
def four_task_files(tmp_path, four_task_model):
    model = tmp_path / "model.act"
    model.write_text(serialize_model(four_task_model), encoding="utf-8")
    requirements = tmp_path / "requirements.txt"
    requirements.write_text("Importance max\nTime less than 9\n", encoding="utf-8")
    return model, requirements


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({
        "direction": "max",
        "variables": ["A", "B", "C", "D"],
        "objective_coefficients": [10, 7, 6, 4],
        "rows": [{"coefficients": [5, 4, 3, 1], "relation": "<=", "bound": 9}],
    }), encoding="utf-8")
    return path
