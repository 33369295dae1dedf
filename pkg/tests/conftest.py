import struct
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def wav_bytes(data: bytes, audio_format=1, channels=1, rate=16000, bits=16,
              extra_chunks=()):
    """Assemble raw RIFF/WAVE bytes for loader tests."""
    body = [b"fmt ", struct.pack("<I", 16),
            struct.pack("<HHIIHH", audio_format, channels, rate,
                        rate * channels * bits // 8, channels * bits // 8, bits)]
    for cid, payload in extra_chunks:
        body += [cid, struct.pack("<I", len(payload)), payload]
        if len(payload) % 2:
            body.append(b"\x00")
    body += [b"data", struct.pack("<I", len(data)), data]
    if len(data) % 2:
        body.append(b"\x00")
    payload = b"".join(body)
    return b"RIFF" + struct.pack("<I", 4 + len(payload)) + b"WAVE" + payload


@pytest.fixture
def write_wav(tmp_path):
    def _write(name, **kwargs):
        path = tmp_path / name
        path.write_bytes(wav_bytes(**kwargs))
        return path
    return _write
