import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leosim.metrics import (
    MetricsSummary, delivered_segments, pairs_to_csv, rtt_histogram, rtt_vector, summarize,
)
from leosim.traffic import PingOutcome, PingStatus


def ok(rtt, t=0.0, seq=0):
    return PingOutcome(0, seq, t, PingStatus.DELIVERED, rtt_ms=rtt, path=(0, 1))


def lost(t=0.0, seq=0, status=PingStatus.DROPPED_UNREACHABLE):
    return PingOutcome(0, seq, t, status)


def test_loss_percentage():
    outs = [ok(10.0, seq=i) for i in range(1936)] + [lost(seq=i) for i in range(464)]
    s = summarize(outs)
    assert s.pings_transmitted == 2400
    assert s.pings_received == 1936
    assert round(s.ping_loss_pct, 2) == 19.33


def test_modal_bin_fixture():
    outs = [ok(8.9 + 0.0005 * (i % 100)) for i in range(140)]
    outs += [ok(9.05) for _ in range(60)] + [ok(8.75) for _ in range(30)]
    s = summarize(outs)
    assert s.modal_bin[0] == pytest.approx(8.9)
    assert s.modal_bin[1] == 140


def test_modal_tie_goes_to_lower_bin():
    _, modal = rtt_histogram([ok(9.05), ok(9.06), ok(8.95), ok(8.91)])
    assert modal == (8.9, 2)


def test_bin_edges_are_half_open():
    bins, _ = rtt_histogram([ok(8.9), ok(8.999999), ok(9.0)])
    assert bins == [(8.9, 2), (9.0, 1)]


def test_bad_bin_width():
    with pytest.raises(ValueError):
        rtt_histogram([ok(1.0)], 0)


def test_nothing_received():
    s = summarize([lost(), lost(seq=1, status=PingStatus.DROPPED_COLLISION)])
    assert (s.pings_transmitted, s.pings_received, s.ping_loss_pct) == (2, 0, 100.0)
    assert s.rtt_min_ms == s.rtt_max_ms == s.rtt_mean_ms == 0.0
    assert s.modal_bin == (0.0, 0)
    assert s.drop_counts == {"dropped_unreachable": 1, "dropped_collision": 1}


def test_nothing_transmitted():
    s = summarize([])
    assert s.pings_transmitted == 0 and s.ping_loss_pct == 0.0
    assert not s.loss_defined


def test_min_max_mean_range():
    s = summarize([ok(10.0), ok(12.0), ok(14.5), lost()])
    assert (s.rtt_min_ms, s.rtt_max_ms) == (10.0, 14.5)
    assert s.rtt_mean_ms == pytest.approx(12.1666666667)
    assert s.rtt_range_ms == pytest.approx(4.5)
    assert s.ping_loss_pct == 25.0


@given(st.lists(st.one_of(st.floats(min_value=1, max_value=200), st.none()), min_size=1, max_size=60),
       st.randoms(use_true_random=False))
def test_summary_is_order_independent(values, rnd):
    outs = [ok(v, seq=i) if v is not None else lost(seq=i) for i, v in enumerate(values)]
    shuffled = outs[:]
    rnd.shuffle(shuffled)
    assert summarize(outs) == summarize(shuffled)


def test_dict_round_trip():
    s = summarize([ok(10.0), ok(10.05), lost()])
    assert MetricsSummary.from_dict(s.to_dict()) == s


def test_rtt_vector_and_segments():
    outs = [ok(10.0, 0.0, 0), ok(11.0, 0.5, 1), lost(1.0, 2), ok(12.0, 1.5, 3)]
    random.Random(1).shuffle(outs)
    assert rtt_vector(outs) == [(0.0, 10.0), (0.5, 11.0), (1.5, 12.0)]
    assert delivered_segments(outs) == [[(0.0, 10.0), (0.5, 11.0)], [(1.5, 12.0)]]


def test_pairs_to_csv():
    text = pairs_to_csv([(8.9, 3), (9.0, 1)], ["bin_start_ms", "count"])
    assert text == "bin_start_ms,count\n8.9,3\n9.0,1\n"
