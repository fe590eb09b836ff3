from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "docs" / "schemas"


@pytest.fixture(scope="session")
def validate():
    """validate(instance, "report") checks against docs/schemas/report.v1.json."""
    import jsonschema
    from referencing import Registry, Resource

    schemas = {p.name: json.loads(p.read_text()) for p in SCHEMA_DIR.glob("*.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items())
    registry = registry.with_resources((s["$id"], Resource.from_contents(s)) for s in schemas.values())

    def check(instance, name: str) -> None:
        schema = schemas[f"{name}.v1.json"]
        jsonschema.Draft202012Validator(schema, registry=registry).validate(instance)

    return check
