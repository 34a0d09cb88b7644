import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from locsys.linalg import Field, Matrix

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("LOCSYS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

F2, F3, F5, Q = Field(2), Field(3), Field(5), Field(0)
ALL_FIELDS = (F2, F3, F5, Q)

fields = st.sampled_from(ALL_FIELDS)
seeds = st.integers(min_value=0, max_value=10**6)


def scalars(f: Field):
    if f.is_rational:
        return st.fractions(min_value=-4, max_value=4, max_denominator=4)
    return st.integers(min_value=0, max_value=f.p - 1)


@st.composite
def matrices(draw, field=None, max_rows=4, max_cols=4):
    f = field or draw(fields)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = [[draw(scalars(f)) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(f, rows, c) if r else Matrix.zeros(f, 0, c)


@pytest.fixture
def rng():
    return random.Random(12345)
