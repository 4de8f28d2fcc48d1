import pytest
from hypothesis import given
from hypothesis import strategies as st

from insider_percolation.config import RunConfig
from insider_percolation.errors import ValidationError


def test_round_trip_sweep():
    cfg = RunConfig("sweep", {"trials": 100, "n_max": 1000, "l_min": 0.01, "seed": 2**64 - 1, "incremental": False})
    assert RunConfig.from_text(cfg.to_text()) == cfg


@given(
    st.integers(0, 10**6),
    st.floats(1e-300, 1.0, exclude_max=True),
    st.lists(st.floats(0, 10, allow_nan=False), min_size=3, max_size=3),
)
def test_round_trip_floats_lossless(n, lmin, cutoffs):
    cfg = RunConfig("classify", {"n": n, "l_min": lmin, "cutoffs": tuple(cutoffs)})
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_round_trip_lattice():
    cfg = RunConfig("lattice-threshold", {"geometry": ("square-2d", "bethe"), "size": None, "z": 4, "trials": 200,
                                          "seed": 1, "method": "direct"})
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_comments_and_dashes():
    text = "# my run\ncommand = sweep\n\n# trials = 5\nn-max = 20\nl_min=0.5\n"
    cfg = RunConfig.from_text(text)
    assert cfg.params == {"n_max": 20, "l_min": 0.5}


def test_header_ignores_metadata():
    text = "# insider-perc spacing-cdf\n# command = spacing-cdf\n# n = 4\n# ks_exponential = 0.1\nL,cdf\n0,0\n"
    assert RunConfig.from_header(text).params == {"n": 4}


@pytest.mark.parametrize(
    "text",
    ["trials = 3\n", "command = fly\n", "command = sweep\ntrials = many\n", "command = sweep\nbogus = 1\n",
     "command = sweep\njust words\n", "command = sweep\nincremental = maybe\n"],
)
def test_rejects(text):
    with pytest.raises(ValidationError):
        RunConfig.from_text(text)
