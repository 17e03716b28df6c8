import json

import pytest

from delaunay_measure.errors import (
    CoincidingPoints,
    DegenerateInput,
    MeasureDriftError,
    MeasureError,
    TooLarge,
)
from delaunay_measure.report import IdentityCheck


def test_errors_are_value_errors():
    assert issubclass(MeasureError, ValueError)
    with pytest.raises(ValueError):
        raise DegenerateInput("collinear")


def test_to_dict_is_json_ready():
    exc = CoincidingPoints("too close", vertices=(3, 4), distance=1e-12, where=1 + 2j, obj=object())
    payload = exc.to_dict()
    assert payload["error"] == "coinciding_points"
    assert payload["message"] == "too close"
    assert payload["details"]["vertices"] == [3, 4]
    assert payload["details"]["where"] == [1.0, 2.0]
    assert isinstance(payload["details"]["obj"], str)
    json.dumps(payload)


def test_codes_are_distinct():
    codes = {cls.code for cls in (MeasureError, DegenerateInput, TooLarge, CoincidingPoints, MeasureDriftError)}
    assert len(codes) == 5


def test_identity_check_pass_rules():
    assert IdentityCheck("float", 1e-13, 1e-12).passed
    assert not IdentityCheck("float", 1e-11, 1e-12).passed
    assert IdentityCheck("exact", 0.0, 0.0, exact=True).passed
    assert not IdentityCheck("exact", 1e-300, 1.0, exact=True).passed
    assert not IdentityCheck("nan", float("nan"), 1.0).passed


def test_identity_check_to_dict():
    payload = IdentityCheck("det E0 = 1", 0.0, 0.0, exact=True, detail="N=2").to_dict()
    assert payload == {
        "name": "det E0 = 1",
        "residual": 0.0,
        "tolerance": 0.0,
        "exact": True,
        "passed": True,
        "detail": "N=2",
    }
