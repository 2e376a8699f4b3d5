import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from jsonschema import Draft202012Validator

import cli
from app import app
from extensions import limiter
from models.db import CACHE_ENV

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "docs" / "output_record.schema.json"


@pytest.fixture(scope="module")
def validator():
    schema = json.loads(SCHEMA_PATH.read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


@pytest.fixture
def client(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    app.config["TESTING"] = True
    limiter.reset()
    with app.test_client() as client:
        yield client


@pytest.mark.parametrize(
    "args",
    [
        ["erdos", "-D", "-1984", "--digits", "20"],
        ["erdos", "-D", "-23", "--digits", "12", "--method", "fundamental"],
        ["bernays", "-D", "-20", "--digits", "15"],
        ["james", "-D", "-3", "--digits", "15"],
        ["pall", "-D", "-12", "--digits", "10"],
        ["table", "shanks-schmid", "--digits", "8"],
        ["search", "--below", "3/5", "--digits", "12"],
        ["search", "--below", "0.5"],
        ["vd", "-D", "-1984"],
        ["vd", "-D", "-108", "--series-bound", "100000"],
        ["genus", "--n", "124", "-D", "-1984"],
        ["population", "--form", "1,0,1", "--x", "1000"],
        ["forms", "-D", "-1984"],
        ["forms", "-D", "-3"],
    ],
)
def test_cli_json_matches_schema(monkeypatch, validator, args) -> None:
    monkeypatch.delenv(CACHE_ENV, raising=False)
    result = CliRunner().invoke(cli.cli, [*args, "--format", "json"])
    assert result.exit_code == 0, result.output
    validator.validate(json.loads(result.stdout))


@pytest.mark.parametrize(
    "url",
    [
        "/constants/erdos?D=-4&digits=25",
        "/constants/bernays?D=-20&digits=12",
        "/constants/james?D=-7&digits=12",
        "/constants/pall?D=-75&digits=10",
        "/constants/table?digits=8",
        "/genus/v?D=-1984",
        "/genus/v?D=-1984&series_bound=100000",
        "/genus/count?D=-1984&n=124",
        "/forms/reduced?D=-1984",
        "/forms/population?form=1,0,1&x=100",
        "/search?below=3/5&digits=12",
        "/search?below=0.5&digits=5",
    ],
)
def test_route_json_matches_schema(client, validator, url) -> None:
    response = client.get(url)
    assert response.status_code == 200
    body = response.get_json()
    validator.validate(body if isinstance(body, list) else [body])


def test_schema_rejects_malformed_records(validator) -> None:
    record = {"command": "erdos", "inputs": {"D": -3}, "result": "0.55", "error_bound": "0.01", "elapsed_ms": 0}
    assert validator.is_valid([record])
    assert not validator.is_valid([{**record, "result": "0.55e-1"}])
    assert not validator.is_valid([{**record, "error_bound": "-0.01"}])
    assert not validator.is_valid([{**record, "inputs": {"D": [-3]}}])
    assert not validator.is_valid([{key: value for key, value in record.items() if key != "elapsed_ms"}])
