"""Tick-driven reactive DSP pipelines with a built-in model checker."""

from tickflow._core import (
    channel_decode,
    channel_encode,
    cipher_burst,
    compare_schedulers,
    deinterleave,
    gmsk_demodulate,
    gmsk_modulate,
    interleave,
    keystream,
    run_downlink,
    speech_decode,
    speech_encode,
    verify_downlink,
)

__all__ = [
    "channel_decode",
    "channel_encode",
    "cipher_burst",
    "compare_schedulers",
    "deinterleave",
    "gmsk_demodulate",
    "gmsk_modulate",
    "interleave",
    "keystream",
    "run_downlink",
    "speech_decode",
    "speech_encode",
    "verify_downlink",
]
