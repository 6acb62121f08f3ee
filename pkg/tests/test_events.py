import numpy as np
import pytest

from afcdlcz.config import CHANNEL_ANTISTOKES, CHANNEL_STOKES
from afcdlcz.events import EventStream, StreamFormatError


def make_stream(n_events=200, n_trials=1000, seed=3):
    rng = np.random.default_rng(seed)
    trial = np.sort(rng.integers(0, n_trials, n_events))
    t = rng.integers(1400, 18000, n_events)
    stream = EventStream(
        trial_id=trial.astype(np.int64),
        channel=rng.integers(0, 2, n_events).astype(np.uint8),
        detector_id=rng.integers(0, 2, n_events).astype(np.uint8),
        t_ns=t.astype(np.int64),
        n_trials=n_trials,
        meta={"seed": "3", "config_hash": "abc"},
    )
    return stream.sort()


def assert_streams_equal(a, b):
    assert a.n_trials == b.n_trials
    assert np.array_equal(a.trial_id, b.trial_id)
    assert np.array_equal(a.channel, b.channel)
    assert np.array_equal(a.detector_id, b.detector_id)
    assert np.array_equal(a.t_ns, b.t_ns)


def test_text_round_trip(tmp_path):
    stream = make_stream()
    path = tmp_path / "events.csv"
    stream.write_text(path)
    back = EventStream.read_text(path)
    assert_streams_equal(stream, back)
    assert back.meta["config_hash"] == "abc"


def test_binary_round_trip(tmp_path):
    stream = make_stream()
    path = tmp_path / "events.bin"
    stream.write_binary(path)
    back = EventStream.read_binary(path)
    assert_streams_equal(stream, back)


def test_extension_dispatch(tmp_path):
    stream = make_stream(50)
    stream.write(tmp_path / "a.bin")
    stream.write(tmp_path / "a.csv")
    assert_streams_equal(EventStream.read(tmp_path / "a.bin"), EventStream.read(tmp_path / "a.csv"))


def test_unsorted_text_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "# n_trials=10\ntrial_id,channel,detector_id,t_ns\n"
        "5,S,0,2000\n3,AS,0,9000\n"
    )
    with pytest.raises(StreamFormatError, match="sorted"):
        EventStream.read_text(path)


def test_bad_channel_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "# n_trials=10\ntrial_id,channel,detector_id,t_ns\n1,X,0,2000\n"
    )
    with pytest.raises(StreamFormatError, match="channel"):
        EventStream.read_text(path)


def test_missing_trial_count_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("trial_id,channel,detector_id,t_ns\n1,S,0,2000\n")
    with pytest.raises(StreamFormatError, match="n_trials"):
        EventStream.read_text(path)


def test_binary_range_check(tmp_path):
    stream = make_stream(10)
    stream.t_ns[0] = 2**33
    stream = EventStream(
        trial_id=stream.trial_id,
        channel=stream.channel,
        detector_id=stream.detector_id,
        t_ns=stream.t_ns,
        n_trials=stream.n_trials,
    )
    with pytest.raises(StreamFormatError, match="uint32"):
        stream.write_binary(tmp_path / "x.bin")


def test_select_channel():
    stream = make_stream()
    stokes = stream.select_channel(CHANNEL_STOKES)
    antis = stream.select_channel(CHANNEL_ANTISTOKES)
    assert len(stokes) + len(antis) == len(stream)
    assert np.all(stokes.channel == CHANNEL_STOKES)
    assert np.all(antis.channel == CHANNEL_ANTISTOKES)


def test_sorted_check():
    stream = make_stream()
    assert stream.is_sorted()
    shuffled = EventStream(
        trial_id=stream.trial_id[::-1].copy(),
        channel=stream.channel[::-1].copy(),
        detector_id=stream.detector_id[::-1].copy(),
        t_ns=stream.t_ns[::-1].copy(),
        n_trials=stream.n_trials,
    )
    assert not shuffled.is_sorted()
    assert shuffled.sort().is_sorted()
