"""FFT plumbing shared by the transforms."""

import os

import numpy as np
import scipy.fft


def workers() -> int:
    """Thread cap for FFTs, taken from ``WIGMARG_THREADS`` (default 1)."""
    raw = os.environ.get("WIGMARG_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"WIGMARG_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def fft(a, axis=-1):
    return scipy.fft.fft(a, axis=axis, workers=workers())


def ifft(a, axis=-1):
    return scipy.fft.ifft(a, axis=axis, workers=workers())


def upsample(a: np.ndarray, axis: int) -> np.ndarray:
    """Band-limited interpolation onto the half-step lattice along ``axis``.

    Output has twice the length; even samples reproduce the input.  The
    Nyquist bin is split evenly between +/- frequencies so real input stays
    real.
    """
    a = np.moveaxis(np.asarray(a), axis, -1)
    N = a.shape[-1]
    h = N // 2
    spectrum = fft(a, axis=-1)
    padded = np.zeros(a.shape[:-1] + (2 * N,), dtype=complex)
    padded[..., :h] = spectrum[..., :h]
    padded[..., h] = 0.5 * spectrum[..., h]
    padded[..., 2 * N - h] = 0.5 * spectrum[..., h]
    padded[..., 2 * N - h + 1 :] = spectrum[..., h + 1 :]
    out = 2.0 * ifft(padded, axis=-1)
    return np.moveaxis(out, -1, axis)
