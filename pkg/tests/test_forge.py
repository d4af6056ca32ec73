import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spoofkit.audio import AudioBuffer
from spoofkit.exceptions import BadPosition, CrossfadeTooLong, GapInLabels, RateMismatch
from spoofkit.features import StftConfig
from spoofkit.forge import (
    SegmentLabel, SpliceMode, SplicePlan, check_labels, crossfade_ramps, label_to_frames,
    read_labels, splice, write_labels,
)

G, F = "genuine", "fake"


def _buf(n, offset=0.0):
    return AudioBuffer(offset + np.arange(n) / (10 * max(n, 1)))


def test_insert_at_zero_is_concatenation():
    host, ins = _buf(100), _buf(30, 0.5)
    out, labels = splice(host, ins, SplicePlan("insert", 0))
    np.testing.assert_array_equal(out.samples, np.concatenate([ins.samples, host.samples]))
    assert labels == [SegmentLabel(0, 30, F), SegmentLabel(30, 130, G)]


def test_insert_mid_host_offsets():
    host, ins = _buf(100), _buf(30, 0.5)
    out, labels = splice(host, ins, SplicePlan(SpliceMode.Insert, 40))
    assert labels == [SegmentLabel(0, 40, G), SegmentLabel(40, 70, F), SegmentLabel(70, 130, G)]
    np.testing.assert_array_equal(out.samples[40:70], ins.samples)


def test_insert_at_end():
    out, labels = splice(_buf(100), _buf(30, 0.5), SplicePlan("insert", 100))
    assert labels == [SegmentLabel(0, 100, G), SegmentLabel(100, 130, F)]


def test_insert_crossfade_length_and_ramps():
    host, ins = _buf(48000), _buf(16000, 0.5)
    out, labels = splice(host, ins, SplicePlan("insert", 20000, crossfade_ms=10.0))
    L = 160
    assert len(out) == 63680
    assert labels == [SegmentLabel(0, 20000 - L, G), SegmentLabel(20000 - L, 20000 - L + 16000, F),
                      SegmentLabel(20000 - L + 16000, 63680, G)]
    w_out, w_in = crossfade_ramps(L)
    assert np.max(np.abs(w_out ** 2 + w_in ** 2 - 1)) <= 1e-9
    np.testing.assert_allclose(out.samples[20000 - L:20000],
                               host.samples[20000 - L:20000] * w_out + ins.samples[:L] * w_in, rtol=1e-15)
    j = 20000 - L + 16000 - L
    np.testing.assert_allclose(out.samples[j:j + L],
                               ins.samples[-L:] * w_out + host.samples[20000:20000 + L] * w_in, rtol=1e-15)


def test_substitute():
    host, ins = _buf(100), _buf(20, 0.5)
    out, labels = splice(host, ins, SplicePlan("substitute", 30, length=20))
    assert len(out) == 100
    np.testing.assert_array_equal(out.samples[30:50], ins.samples)
    np.testing.assert_array_equal(out.samples[50:], host.samples[50:])
    assert labels == [SegmentLabel(0, 30, G), SegmentLabel(30, 50, F), SegmentLabel(50, 100, G)]
    out2, labels2 = splice(host, ins, SplicePlan("substitute", 30, length=20, crossfade_ms=0.25))
    assert len(out2) == 100 - 2 * 4
    assert check_labels(labels2) == len(out2)


def test_splice_errors():
    host, ins = _buf(100), _buf(20)
    with pytest.raises(BadPosition):
        splice(host, ins, SplicePlan("insert", 101))
    with pytest.raises(BadPosition):
        splice(host, ins, SplicePlan("substitute", 90, length=20))
    with pytest.raises(BadPosition):
        splice(host, ins, SplicePlan("substitute", 10, length=19))
    with pytest.raises(CrossfadeTooLong):
        splice(host, ins, SplicePlan("insert", 50, crossfade_ms=1.0))  # 16 samples > 20/2
    with pytest.raises(CrossfadeTooLong):
        splice(host, _buf(200), SplicePlan("insert", 0, crossfade_ms=0.5))
    with pytest.raises(RateMismatch):
        splice(host, AudioBuffer(np.ones(10), 8000), SplicePlan("insert", 0))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3000), st.integers(1, 1000), st.data())
def test_label_partition_and_reconstruction(n_host, n_ins, data):
    host, ins = _buf(n_host), _buf(n_ins, 0.5)
    p = data.draw(st.integers(0, n_host))
    out, labels = splice(host, ins, SplicePlan("insert", p))
    assert check_labels(labels) == len(out) == n_host + n_ins
    assert all(a.label != b.label for a, b in zip(labels, labels[1:]))
    genuine = np.concatenate([out.samples[s.start:s.end] for s in labels if s.label == G] or [np.zeros(0)])
    np.testing.assert_array_equal(genuine, host.samples)


def test_splice_deterministic():
    host, ins = _buf(1000), _buf(300, 0.5)
    plan = SplicePlan("insert", 500, crossfade_ms=5.0)
    a, la = splice(host, ins, plan)
    b, lb = splice(host, ins, plan)
    assert a.samples.tobytes() == b.samples.tobytes() and la == lb


def test_frames_all_genuine():
    frames = label_to_frames([SegmentLabel(0, 48000, G)])
    assert frames.shape == (119,) and not frames.any()


@pytest.mark.parametrize("s,frames_hit", [(7 * 400 + 50, [6, 7]), (100, [0]), (47999, [118])])
def test_frames_single_fake_sample(s, frames_hit):
    labels = [SegmentLabel(0, s, G), SegmentLabel(s, s + 1, F), SegmentLabel(s + 1, 48000, G)]
    labels = [seg for seg in labels if seg.end > seg.start]
    frames = label_to_frames(labels)
    expected = [t for t in range(119) if t * 400 <= s < t * 400 + 800]
    assert np.flatnonzero(frames).tolist() == expected == frames_hit


def test_frames_hop_aligned_boundaries():
    # frame_len = 2*hop; fake region [a*hop, b*hop)
    a, b = 10, 30
    labels = [SegmentLabel(0, a * 400, G), SegmentLabel(a * 400, b * 400, F), SegmentLabel(b * 400, 48000, G)]
    frames = label_to_frames(labels, StftConfig())
    spans = [(t * 400, t * 400 + 800) for t in range(119)]
    oracle = [lo < b * 400 and hi > a * 400 for lo, hi in spans]
    assert frames.tolist() == oracle
    assert np.flatnonzero(frames).tolist() == list(range(a - 1, b))


def test_frames_gap():
    with pytest.raises(GapInLabels):
        label_to_frames([SegmentLabel(0, 10, G), SegmentLabel(11, 2000, F)])
    with pytest.raises(GapInLabels):
        label_to_frames([SegmentLabel(5, 2000, G)])


def test_label_file_round_trip(tmp_path):
    labels = [SegmentLabel(0, 40, G), SegmentLabel(40, 70, F), SegmentLabel(70, 130, G)]
    p = tmp_path / "x.lab"
    write_labels(labels, p)
    assert p.read_text() == "0\t40\tgenuine\n40\t70\tfake\n70\t130\tgenuine\n"
    assert read_labels(p) == labels
