import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SR, tone
from oracles import direct_dft
from spoofkit.audio import AudioBuffer
from spoofkit.exceptions import BadMagic, DegenerateFilter, ShapeMismatch, TooShort
from spoofkit.features import (
    EPS, ComplexSpectrogram, CqtConfig, FeatureKind, FeatureMatrix, MrpConfig, StftConfig, cqt,
    dct_matrix, dump_features, hz_to_mel, load_features, log_cqt, log_fbank, log_magnitude,
    mel_matrix, mfcc, mrp, phase, stft,
)
from spoofkit.features.mel import cepstra, log_mel_energies
from spoofkit.features.mrp import relative_phase, wrap_phase

CFG = StftConfig()


# --- STFT ---------------------------------------------------------------

def test_stft_shape_defaults(noise3s):
    spec = stft(noise3s)
    assert (spec.frames, spec.bins) == (119, 513)


@pytest.mark.parametrize("n", [800, 801, 1199, 1200, 16000, 47999])
def test_frame_count_law(n):
    x = AudioBuffer(np.ones(n))
    assert stft(x).frames == 1 + (n - 800) // 400


def test_stft_too_short():
    with pytest.raises(TooShort):
        stft(AudioBuffer(np.ones(799)))


def test_stft_zero_audio_is_exactly_zero():
    spec = stft(AudioBuffer(np.zeros(48000)))
    assert np.all(spec.values == 0)


@pytest.mark.parametrize("k", [5, 64, 200, 400])
def test_bin_centre_cosine(k):
    a = tone(k * SR / 1024, seconds=0.5)
    spec = stft(a)
    assert np.all(np.argmax(np.abs(spec.values), axis=1) == k)
    frame = a.samples[:800] * CFG.window_array(SR)
    np.testing.assert_allclose(spec.values[0], direct_dft(frame, 1024), atol=1e-9)


def test_stft_config_validation():
    with pytest.raises(ValueError):
        StftConfig(fft_size=1000)
    with pytest.raises(ValueError):
        StftConfig(window="blackman")
    with pytest.raises(ValueError):
        stft(AudioBuffer(np.ones(4000)), StftConfig(fft_size=512))


# --- log-magnitude and phase ----------------------------------------------

def _spec(values):
    return ComplexSpectrogram(np.asarray(values, dtype=complex), SR, CFG)


def test_log_magnitude_floor_and_unit():
    zero = log_magnitude(stft(AudioBuffer(np.zeros(4000))))
    np.testing.assert_allclose(zero.values, np.log(1e-10), rtol=1e-7)
    assert abs(float(np.log(1e-10)) - (-23.0259)) < 1e-4
    unit = log_magnitude(_spec([[1 - EPS, 0.5j]]))
    assert abs(unit.values[0, 0]) < 1e-9


def test_log_magnitude_scaling_shift(noise3s):
    a = log_magnitude(stft(noise3s)).values.astype(np.float64)
    b = log_magnitude(stft(noise3s.with_samples(2 * noise3s.samples))).values.astype(np.float64)
    away = a > np.log(1e-6)
    assert away.mean() > 0.99
    assert np.max(np.abs((b - a)[away] - np.log(2))) <= 1e-6


def test_phase_conventions():
    ph = phase(_spec([[2.0, -1.0, complex(-1.0, -0.0), 1e-12j, 1j]])).values[0]
    assert ph[0] == 0
    assert ph[1] == pytest.approx(np.pi) and ph[1] > 0
    assert ph[2] == pytest.approx(np.pi) and ph[2] > 0
    assert ph[3] == 0
    assert ph[4] == pytest.approx(np.pi / 2)


def test_phase_range(noise3s):
    ph = phase(stft(noise3s)).values
    assert ph.shape == (119, 513)
    assert np.all(ph > -np.pi) and np.all(ph <= np.float32(np.pi))


def test_phase_positive_scaling_invariance(noise3s):
    a = phase(stft(noise3s)).values
    b = phase(stft(noise3s.with_samples(3 * noise3s.samples))).values
    np.testing.assert_array_equal(a, b)


# --- mel / fbank / mfcc ------------------------------------------------------

def test_mel_formula():
    assert hz_to_mel(700.0) == pytest.approx(2595 * np.log10(2))
    assert hz_to_mel(700.0) == pytest.approx(781.17, abs=0.01)


def test_mel_matrix_shape_and_shape_invariants():
    mel = mel_matrix(80, 0, None, 1024, SR)
    w = mel.weights
    assert w.shape == (80, 513)
    assert np.all(w >= 0)
    assert np.all(w.max(axis=1) == 1.0)
    assert np.all(np.diff(mel.center_freqs) > 0)
    for row in w:
        nz = row[np.flatnonzero(row)[0]: np.flatnonzero(row)[-1] + 1]
        peak = int(np.argmax(nz))
        assert np.all(np.diff(nz[: peak + 1]) >= 0) and np.all(np.diff(nz[peak:]) <= 0)


def test_mel_columns_covered_between_centres():
    mel = mel_matrix(80, 0, None, 1024, SR)
    c = mel.center_bins
    col = mel.weights.sum(axis=0)
    assert np.all(col[c[0]: c[-1] + 1] > 0)


def test_mel_degenerate():
    with pytest.raises(DegenerateFilter):
        mel_matrix(200, 0, None, 256, SR)
    with pytest.raises(ValueError):
        mel_matrix(10, 500, 400, 1024, SR)


def test_log_fbank_shape_and_floor(noise3s):
    assert log_fbank(noise3s).values.shape == (119, 80)
    z = log_fbank(AudioBuffer(np.zeros(48000))).values
    np.testing.assert_allclose(z, np.log(1e-10), rtol=1e-7)


def test_log_fbank_power_law(noise3s):
    a = log_fbank(noise3s).values.astype(np.float64)
    b = log_fbank(noise3s.with_samples(2 * noise3s.samples)).values.astype(np.float64)
    assert np.max(np.abs(b - a - np.log(4))) <= 1e-6


def test_mfcc_of_constant_log_mel():
    m = mfcc(AudioBuffer(np.zeros(48000))).values
    assert m.shape == (119, 23)
    np.testing.assert_allclose(m[:, 0], np.sqrt(80) * np.log(1e-10), rtol=1e-6)
    assert np.max(np.abs(m[:, 1:])) <= 1e-9


def test_mfcc_shape_and_matches_dct_of_fbank(noise3s):
    m = mfcc(noise3s)
    assert (m.frames, m.dims) == (119, 23)
    lm = log_mel_energies(noise3s, CFG, mel_matrix())
    np.testing.assert_allclose(m.values, (lm @ dct_matrix(80).T)[:, :23], rtol=1e-6, atol=1e-5)


def test_mfcc_parseval(noise3s):
    lm = log_mel_energies(noise3s, CFG, mel_matrix())
    c = cepstra(lm, 80)
    np.testing.assert_allclose((c ** 2).sum(axis=1), (lm ** 2).sum(axis=1), rtol=0, atol=1e-6)


@pytest.mark.parametrize("n", [1, 2, 23, 80, 120])
def test_dct_orthonormal(n):
    g = dct_matrix(n)
    assert np.max(np.abs(g @ g.T - np.eye(n))) <= 1e-10


def test_mfcc_rejects_too_many_coeffs(noise3s):
    with pytest.raises(ValueError):
        mfcc(noise3s, n_coeffs=81)


# --- CQT -----------------------------------------------------------------------

def test_cqt_frequencies():
    f = CqtConfig().center_freqs()
    assert f[12] == pytest.approx(65.4)
    assert CqtConfig().q == pytest.approx(1 / (2 ** (1 / 12) - 1))


def test_cqt_440_is_bin_45():
    assert round(12 * np.log2(440 / 32.7)) == 45
    v = log_cqt(tone(440.0)).values
    assert v.shape[1] == 84
    assert np.all(np.argmax(v, axis=1) == 45)


@settings(max_examples=15, deadline=None)
@given(st.integers(6, 78))
def test_cqt_tone_localisation(k):
    f = CqtConfig().center_freqs()[k]
    v = log_cqt(tone(f, seconds=1.0)).values
    assert np.all(np.abs(np.argmax(v, axis=1) - k) <= 1)


def test_cqt_frames_and_errors():
    longest = int(CqtConfig().kernel_lengths(SR).max())
    assert longest == int(np.ceil(CqtConfig().q * SR / 32.7))
    assert cqt(AudioBuffer(np.zeros(longest))).shape == (1, 84)
    assert cqt(AudioBuffer(np.zeros(48000))).shape == (1 + (48000 - longest) // 400, 84)
    with pytest.raises(TooShort):
        cqt(AudioBuffer(np.zeros(longest - 1)))
    with pytest.raises(ValueError):
        cqt(AudioBuffer(np.zeros(48000), 4000))


def test_cqt_configurable_96_bins():
    cfg = CqtConfig(fmin=32.7, n_bins=96)
    assert log_cqt(tone(440.0), cfg).dims == 96


def test_cqt_matches_direct_correlation(noise3s):
    cfg = CqtConfig()
    out = cqt(noise3s, cfg)
    lengths = cfg.kernel_lengths(SR)
    longest = int(lengths.max())
    t, k = 7, 30
    n = int(lengths[k])
    f = cfg.center_freqs()[k]
    centre = t * 400 + longest // 2
    seg = noise3s.samples[centre - n // 2: centre - n // 2 + n]
    win = np.hanning(n)
    ref = sum(seg[i] * win[i] * np.exp(-2j * np.pi * f * (i - (n - 1) / 2) / SR) for i in range(n)) / win.sum()
    assert out[t, k] == pytest.approx(ref, abs=1e-12)


# --- MRP -------------------------------------------------------------------------

def test_mrp_dims_and_range(noise3s):
    m = mrp(noise3s)
    assert (m.frames, m.dims) == (119, 120)
    assert np.all(np.abs(m.values) <= 1)


def test_mrp_positive_scaling_invariance(noise3s):
    a = mrp(noise3s).values
    b = mrp(noise3s.with_samples(5 * noise3s.samples)).values
    np.testing.assert_array_equal(a, b)


def test_relative_phase_zero_at_base():
    theta = np.random.default_rng(0).uniform(-np.pi, np.pi, (4, 513))
    psi = relative_phase(theta, 64)
    np.testing.assert_allclose(psi[:, 64], 0, atol=1e-12)
    assert np.all(psi > -np.pi) and np.all(psi <= np.pi)


def test_wrap_phase():
    x = np.array([np.pi, -np.pi, 3 * np.pi, 0.5, -7.0])
    w = wrap_phase(x)
    assert w[0] == pytest.approx(np.pi) and w[1] == pytest.approx(np.pi)
    np.testing.assert_allclose(np.exp(1j * w), np.exp(1j * x), atol=1e-12)


def test_mrp_base_freq_validation():
    with pytest.raises(ValueError):
        MrpConfig(base_freq=9000).base_bin(SR)


# --- determinism and dumps ---------------------------------------------------------

@pytest.mark.parametrize("fn", [
    lambda a: log_magnitude(stft(a)), lambda a: phase(stft(a)), log_fbank, mfcc, log_cqt, mrp,
])
def test_extractors_deterministic(noise3s, fn):
    assert fn(noise3s).values.tobytes() == fn(noise3s).values.tobytes()


def test_dump_round_trip_bitwise(tmp_path, noise3s):
    f = log_fbank(noise3s)
    p = tmp_path / "f.adsf"
    dump_features(f, p)
    assert p.stat().st_size == 16 + 119 * 80 * 4
    g = load_features(p)
    assert g.kind is FeatureKind.LogFbank
    assert g.values.tobytes() == f.values.tobytes()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.sampled_from(list(FeatureKind)), st.integers(0, 2**32 - 1))
def test_dump_round_trip_any_matrix(tmp_path_factory, frames, dims, kind, seed):
    v = np.random.default_rng(seed).standard_normal((frames, dims)) * 1e3
    f = FeatureMatrix(kind, v)
    p = tmp_path_factory.mktemp("d") / "x.adsf"
    dump_features(f, p)
    g = load_features(p)
    assert g.kind is kind and g.values.tobytes() == f.values.tobytes()


def test_dump_header_layout(tmp_path):
    p = tmp_path / "h.adsf"
    dump_features(FeatureMatrix(FeatureKind.Mrp, np.zeros((3, 2))), p)
    head = p.read_bytes()[:16]
    assert head[:4] == b"ADSF" and head[4] == 1 and head[5] == 5 and head[6:8] == b"\0\0"
    assert int.from_bytes(head[8:12], "little") == 3 and int.from_bytes(head[12:16], "little") == 2


def test_dump_errors(tmp_path):
    p = tmp_path / "t.adsf"
    dump_features(FeatureMatrix(FeatureKind.LogMag, np.ones((4, 4))), p)
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(ShapeMismatch):
        load_features(p)
    q = tmp_path / "m.adsf"
    q.write_bytes(b"XXXX" + bytes(12))
    with pytest.raises(BadMagic):
        load_features(q)
    with pytest.raises(ShapeMismatch):
        load_features_bytes = tmp_path / "s.adsf"
        load_features_bytes.write_bytes(b"ADSF")
        load_features(load_features_bytes)
