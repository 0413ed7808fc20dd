import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tvclip import DomainError, Signal
from tvclip.metrics import EXACT_MATCH
from tvclip.signal_io import emit_signal, emit_table, parse_signal


@given(
    arrays(np.float64, st.integers(1, 50), elements=st.floats(allow_nan=False, allow_infinity=False)),
    st.one_of(st.none(), st.integers(1, 200_000)),
)
def test_signal_round_trip(x, rate):
    s = Signal(x, rate)
    assert parse_signal(emit_signal(s)) == s


def test_sample_rate_header():
    text = emit_signal(Signal([0.5, -1.0], 8000))
    assert text.splitlines()[0] == "# sample_rate=8000"


@pytest.mark.parametrize("text", ["", "# only a comment\n", "1.0\nabc\n", "# sample_rate=x\n1\n"])
def test_parse_errors(text):
    with pytest.raises(DomainError):
        parse_signal(text)


def test_table_formats():
    rows = [{"a": 1.5, "b": EXACT_MATCH}, {"a": np.float64(2.0), "b": 3}]
    assert emit_table(rows, ["a", "b"], "csv") == "a,b\n1.5,exact\n2.0,3\n"
    assert json.loads(emit_table(rows, ["a", "b"], "json")) == [{"a": 1.5, "b": "exact"}, {"a": 2.0, "b": 3}]
