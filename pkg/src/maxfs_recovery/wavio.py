"""16-bit PCM mono WAV reading and writing.

Samples map to floats in [-1, 1) by dividing by 32768; writing rounds
back, so a read-write-read cycle reproduces the file exactly.
"""

import wave

import numpy as np

SCALE = 32768.0


class WavFormatError(ValueError):
    """Raised for WAV files that are not 16-bit PCM mono."""


def read_wav(path):
    """Return (samples in [-1, 1), sample_rate)."""
    try:
        with wave.open(str(path), "rb") as handle:
            channels = handle.getnchannels()
            width = handle.getsampwidth()
            comptype = handle.getcomptype()
            rate = handle.getframerate()
            frames = handle.readframes(handle.getnframes())
    except wave.Error as err:
        raise WavFormatError(f"cannot parse {path}: {err}") from err
    if comptype != "NONE":
        raise WavFormatError(f"{path}: compressed WAV ({comptype}) not supported")
    if width != 2:
        raise WavFormatError(f"{path}: expected 16-bit samples, got {8 * width}-bit")
    if channels != 1:
        raise WavFormatError(f"{path}: expected mono, got {channels} channels")
    data = np.frombuffer(frames, dtype="<i2").astype(np.float64) / SCALE
    return data, rate


def write_wav(path, samples, sample_rate):
    """Write float samples as 16-bit PCM mono, clipping to valid range."""
    samples = np.asarray(samples, dtype=np.float64)
    ints = np.clip(np.rint(samples * SCALE), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(int(sample_rate))
        handle.writeframes(ints.tobytes())
