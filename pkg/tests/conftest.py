import random

import hypothesis
import pytest
from hypothesis import strategies as st

from praa.dataset import MISSING, AttributeSchema, Dataset

hypothesis.settings.register_profile("fast", max_examples=20)
hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")

KIND_CYCLE = ("categorical", "integer", "real")


def random_dataset(seed, m=None, n_features=None, missing=0.15):
    """Small mixed-type dataset with both classes and real values on a 0.5 grid."""
    rng = random.Random(seed)
    m = m or rng.randint(3, 12)
    n_features = n_features or rng.randint(1, 5)
    schema = [AttributeSchema(f"c{j}", rng.choice(KIND_CYCLE)) for j in range(n_features)]
    schema.append(AttributeSchema("y", "decision"))
    labels = ["p", "q"] + [rng.choice("pq") for _ in range(m - 2)]
    rng.shuffle(labels)
    rows = []
    for i in range(m):
        row = []
        for a in schema[:-1]:
            if rng.random() < missing:
                row.append(MISSING)
            elif a.kind == "categorical":
                row.append(rng.choice("xyz"))
            elif a.kind == "integer":
                row.append(rng.randint(0, 3))
            else:
                row.append(rng.randint(-6, 12) / 2)
        rows.append(row + [labels[i]])
    return Dataset(schema, rows)


@st.composite
def datasets(draw, max_m=12, max_features=5, missing=True):
    n_features = draw(st.integers(1, max_features))
    kinds = draw(st.lists(st.sampled_from(KIND_CYCLE), min_size=n_features, max_size=n_features))
    m = draw(st.integers(2, max_m))
    labels = draw(st.lists(st.sampled_from("pq"), min_size=m, max_size=m).filter(lambda ls: len(set(ls)) == 2))
    cell = {
        "categorical": st.sampled_from("abcd"),
        "integer": st.integers(-3, 3),
        "real": st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False),
    }
    rows = []
    for i in range(m):
        row = []
        for kind in kinds:
            if missing and draw(st.integers(0, 9)) == 0:
                row.append(MISSING)
            else:
                row.append(draw(cell[kind]))
        rows.append(row + [labels[i]])
    schema = [AttributeSchema(f"c{j}", k) for j, k in enumerate(kinds)] + [AttributeSchema("y", "decision")]
    return Dataset(schema, rows)


@pytest.fixture
def separable_small():
    """20 records, f0 equals the class, one noisy real column."""
    rng = random.Random(3)
    schema = [AttributeSchema("f0", "categorical"), AttributeSchema("f1", "real"), AttributeSchema("y", "decision")]
    rows = []
    for i in range(20):
        y = "yes" if i % 2 == 0 else "no"
        rows.append(["s" if y == "yes" else "t", rng.uniform(0, 10), y])
    return Dataset(schema, rows)


# filled by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
