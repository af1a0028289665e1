import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from threshkit import GrayImage, Histogram

settings.register_profile(
    "threshkit", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("threshkit")


@st.composite
def gray_images(draw, min_side=1, max_side=12, lo=0, hi=255):
    w = draw(st.integers(min_side, max_side))
    h = draw(st.integers(min_side, max_side))
    px = draw(st.lists(st.integers(lo, hi), min_size=w * h, max_size=w * h))
    return GrayImage(w, h, px)


@st.composite
def histograms(draw, max_total_per_bin=50):
    counts = np.zeros(256, dtype=np.int64)
    bins = draw(
        st.dictionaries(
            st.integers(0, 255), st.integers(1, max_total_per_bin), min_size=1, max_size=8
        )
    )
    for level, n in bins.items():
        counts[level] = n
    return Histogram(counts, int(counts.sum()))


@pytest.fixture
def bimodal_hist():
    counts = np.zeros(256, dtype=np.int64)
    counts[50] = 50
    counts[200] = 50
    return Histogram(counts, 100)


@pytest.fixture
def trimodal_hist():
    counts = np.zeros(256, dtype=np.int64)
    counts[0] = 4
    counts[100] = 2
    counts[255] = 4
    return Histogram(counts, 10)
