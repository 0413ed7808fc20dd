"""16-bit PCM WAV reading/writing and audio-scale denoising helpers."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedFormatError, WavParseError
from .signal_model import Signal, as_signal

__all__ = [
    "AudioClip",
    "read_wav",
    "write_wav",
    "synth_vuvuzela",
    "denoise_windowed",
    "HEADER_BYTES",
]

HEADER_BYTES = 44
_READ_SCALE = 32768.0
_WRITE_SCALE = 32767.0


@dataclass(frozen=True, eq=False)
class AudioClip:
    signal: Signal
    sample_rate: int
    source_bit_depth: int = 16

    def __post_init__(self):
        sig = as_signal(self.signal)
        if int(self.sample_rate) != self.sample_rate or self.sample_rate <= 0:
            raise DomainError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        if self.source_bit_depth != 16:
            raise DomainError(f"only 16-bit audio is supported, got {self.source_bit_depth}")
        if np.abs(sig.samples).max() > 1.0:
            raise DomainError("audio samples must lie in [-1, 1]")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        object.__setattr__(self, "signal", Signal(sig.samples, float(self.sample_rate)))

    @property
    def samples(self) -> np.ndarray:
        return self.signal.samples


def read_wav(data: bytes) -> AudioClip:
    """Parse a RIFF/WAVE byte string holding 16-bit PCM, mono or stereo.

    Stereo input is mixed down to the per-sample channel mean. Chunks other
    than ``fmt `` and ``data`` are skipped.
    """
    data = bytes(data)
    if len(data) < 12:
        raise WavParseError("truncated RIFF header", len(data))
    if data[0:4] != b"RIFF":
        raise WavParseError("missing RIFF tag", 0)
    if data[8:12] != b"WAVE":
        raise WavParseError("missing WAVE tag", 8)

    fmt = None
    pcm = None
    pos = 12
    while pos < len(data):
        if pos + 8 > len(data):
            raise WavParseError("truncated chunk header", pos)
        tag = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = pos + 8
        if body + size > len(data):
            raise WavParseError(f"chunk {tag!r} overruns end of data", pos + 4)
        if tag == b"fmt ":
            if size < 16:
                raise WavParseError("fmt chunk shorter than 16 bytes", pos + 4)
            fmt = (struct.unpack_from("<HHIIHH", data, body), body)
        elif tag == b"data":
            if fmt is None:
                raise WavParseError("data chunk before fmt chunk", pos)
            pcm = (body, size)
            break
        pos = body + size + (size & 1)

    if fmt is None:
        raise WavParseError("no fmt chunk", pos)
    if pcm is None:
        raise WavParseError("no data chunk", pos)

    (format_code, channels, rate, _byte_rate, block_align, bits), fmt_pos = fmt
    if format_code != 1:
        raise UnsupportedFormatError("format code", format_code, "1 (PCM)")
    if bits != 16:
        raise UnsupportedFormatError("bit depth", bits, "16")
    if channels not in (1, 2):
        raise UnsupportedFormatError("channel count", channels, "1 or 2")
    if rate == 0:
        raise WavParseError("sample rate is zero", fmt_pos + 4)
    if block_align != 2 * channels:
        raise WavParseError(f"block align {block_align} inconsistent with {channels} channel(s)", fmt_pos + 12)

    body, size = pcm
    frames = size // block_align
    if frames == 0:
        raise WavParseError("data chunk holds no complete frames", body - 4)
    ints = np.frombuffer(data, dtype="<i2", count=frames * channels, offset=body).astype(np.float64)
    samples = ints.reshape(frames, channels).mean(axis=1) / _READ_SCALE
    return AudioClip(Signal(samples), rate)


def write_wav(clip: AudioClip) -> bytes:
    """Serialise ``clip`` as a canonical 44-byte-header mono 16-bit PCM WAV."""
    q = np.clip(np.rint(clip.samples * _WRITE_SCALE), -32768, 32767).astype("<i2")
    payload = q.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, 1, 1, clip.sample_rate, 2 * clip.sample_rate, 2, 16,
        b"data", len(payload),
    )
    return header + payload


def synth_vuvuzela(duration: float = 10.0, rate: int = 8000, seed: int = 0):
    """Synthetic stand-in for a stadium recording.

    The clean part is a mixture of speech-band tones under a slow syllabic
    envelope. The interference is a vuvuzela-like buzz with a 233 Hz
    fundamental and decaying harmonics, plus a little broadband hiss.

    Returns
    -------
    clean, noisy : AudioClip
    """
    if not duration > 0:
        raise DomainError(f"duration must be positive, got {duration!r}")
    n = int(round(duration * rate))
    t = np.arange(n) / rate
    rng = np.random.Generator(np.random.PCG64(seed))

    voice = np.zeros(n)
    for f0, amp in ((180.0, 0.30), (360.0, 0.15), (540.0, 0.08)):
        voice += amp * np.sin(2 * np.pi * f0 * t + rng.uniform(0, 2 * np.pi))
    envelope = 0.5 * (1 + np.sign(np.sin(2 * np.pi * 1.5 * t)))
    voice *= envelope

    buzz = np.zeros(n)
    for h in range(1, 9):
        f = 233.0 * h
        if f >= rate / 2:
            break
        buzz += 0.12 / h * np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
    hiss = 0.03 * rng.standard_normal(n)

    peak = max(np.abs(voice + buzz + hiss).max(), np.abs(voice).max()) / 0.9
    clean = AudioClip(Signal(voice / peak), rate)
    noisy = AudioClip(Signal((voice + buzz + hiss) / peak), rate)
    return clean, noisy


def denoise_windowed(y, window: int, denoise):
    """Apply ``denoise`` to Hann-weighted frames with 50% overlap and sum them.

    ``denoise`` maps a 1D array to a same-length array. ``window`` must be
    an even number of samples, at least 4; shorter inputs are processed in
    one piece. The periodic Hann window at half-window hop sums to one, so
    an identity ``denoise`` reproduces the input.
    """
    sig = as_signal(y)
    x = sig.samples
    if int(window) != window or window < 4 or window % 2:
        raise DomainError(f"window must be an even integer >= 4, got {window!r}")
    if x.size <= window:
        return sig.with_samples(np.asarray(denoise(x), dtype=np.float64))
    hop = window // 2
    w = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(window) / window)
    n_frames = -(-(x.size + hop) // hop)
    padded = np.zeros((n_frames + 1) * hop)
    padded[hop:hop + x.size] = x
    out = np.zeros_like(padded)
    for f in range(n_frames):
        s = f * hop
        seg = padded[s:s + window]
        out[s:s + window] += w * np.asarray(denoise(seg), dtype=np.float64)
    return sig.with_samples(out[hop:hop + x.size])
