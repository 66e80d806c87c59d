import hashlib
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randlab.bitstream import (
    BitCursor, ByteBuffer, EndOfStream, StreamFileError, StreamSizeError, pack_bits,
    sliding_bit_words, write_stream_file,
)
from randlab.generators import GeneratorSpec


@pytest.mark.parametrize("bits, expected", [
    ([1, 0, 1, 0, 1, 0, 1, 0], b"\xaa"),
    ([0] * 8, b"\x00"),
    ([0] * 15 + [1], b"\x00\x01"),
])
def test_pack_bits_examples(bits, expected):
    assert pack_bits(bits).data == expected


@pytest.mark.parametrize("n", [0, 7, 9])
def test_pack_bits_rejects_partial_bytes(n):
    with pytest.raises(StreamSizeError):
        pack_bits([0] * n)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=400).map(lambda b: b[: len(b) // 8 * 8])
       .filter(bool))
@settings(max_examples=1000)
def test_pack_then_read_back_is_identity(bits):
    buf = pack_bits(bits)
    assert buf.cursor().read_bits(len(bits)).tolist() == bits


@given(st.lists(st.integers(0, 1), min_size=64, max_size=64), st.integers(0, 32))
def test_next_word32_equals_packing_32_bits(bits, offset):
    cur = pack_bits(bits).cursor()
    cur.read_bits(offset)
    expected = int("".join(map(str, bits[offset:offset + 32])), 2)
    assert cur.next_word32() == expected
    assert cur.bit_position == offset + 32


@pytest.mark.parametrize("data, word", [
    (b"\x00\x00\x00\x01", 1),
    (b"\xff\xff\xff\xff", 2 ** 32 - 1),
    (b"\x12\x34\x56\x78", 0x12345678),
])
def test_next_word32_big_endian(data, word):
    buf = ByteBuffer(data)
    assert buf.cursor().next_word32() == word
    assert int(buf.words[0]) == word


def test_next_word32_end_of_stream():
    cur = ByteBuffer(b"\x01\x02\x03\x04\x05").cursor()
    cur.next_word32()
    with pytest.raises(EndOfStream):
        cur.next_word32()


def test_overlapping_words_examples():
    cur = pack_bits([0, 1, 0, 1, 0, 0, 0, 0]).cursor()
    assert cur.overlapping_words(2, 3).tolist() == [0b01, 0b10, 0b01]
    zeros = ByteBuffer(bytes(16)).cursor()
    assert not zeros.overlapping_words(20, 50).any()


def test_overlapping_words_continue_and_exhaust():
    cur = pack_bits([1, 0, 0, 1, 1, 0, 1, 1]).cursor()
    first = cur.overlapping_words(3, 2)
    second = cur.overlapping_words(3, 2)
    assert first.tolist() + second.tolist() == [0b100, 0b001, 0b011, 0b110]
    with pytest.raises(EndOfStream):
        cur.overlapping_words(3, 10)


def test_overlapping_words_match_bit_slices(fixture_buffer):
    n = 2 ** 21  # words in a 2^21 + 19 bit stream
    cur = fixture_buffer.cursor()
    words = cur.overlapping_words(20, n)
    bits = np.unpackbits(fixture_buffer.u8)
    for j in (0, 1, 12345, n - 1):
        assert words[j] == int("".join(map(str, bits[j:j + 20])), 2)


def test_sliding_words_width_32():
    bits = np.unpackbits(np.frombuffer(b"\xde\xad\xbe\xef\x01", dtype=np.uint8))
    w = sliding_bit_words(bits, 32)
    assert w[0] == 0xDEADBEEF and w[8] == 0xADBEEF01


def test_buffer_views_are_read_only():
    buf = ByteBuffer(b"\x00\x00\x00\x01\x80\x00\x00\x00")
    with pytest.raises(ValueError):
        buf.words[0] = 5
    with pytest.raises(ValueError):
        buf.u8[0] = 5
    assert buf.uniforms().tolist() == [2.0 ** -32, 0.5]


def test_buffer_identity_and_pickle():
    a, b = ByteBuffer(b"abcd"), ByteBuffer(bytearray(b"abcd"))
    assert a == b and hash(a) == hash(b)
    assert pickle.loads(pickle.dumps(a)) == a
    assert a.sha256 == hashlib.sha256(b"abcd").hexdigest()


def test_empty_buffer_rejected():
    with pytest.raises(StreamSizeError):
        ByteBuffer(b"")


def test_cursor_bounds():
    with pytest.raises(EndOfStream):
        ByteBuffer(b"\x00").cursor().read_bits(9)
    with pytest.raises(EndOfStream):
        BitCursor(ByteBuffer(b"\x00"), 9)


def test_write_stream_file_sizes_and_determinism(tmp_path):
    spec = GeneratorSpec("mt", seed=3)
    a = write_stream_file(tmp_path / "a.bin", spec, 4099)
    b = write_stream_file(tmp_path / "b.bin", spec, 4099)
    assert (tmp_path / "a.bin").stat().st_size == 4099
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()
    assert a.sha256 == b.sha256
    assert not list(tmp_path.glob("*.part"))


def test_write_stream_file_dseq_byte(tmp_path):
    write_stream_file(tmp_path / "d.bin", GeneratorSpec("dseq", max_range=10), 1)
    assert (tmp_path / "d.bin").read_bytes() == b"\x55"


def test_write_stream_file_default_size(tmp_path):
    write_stream_file(tmp_path / "k.bin", GeneratorSpec("kiss"))
    assert (tmp_path / "k.bin").stat().st_size == 12_000_000


def test_write_stream_file_reports_path(tmp_path):
    bad = tmp_path / "missing" / "x.bin"
    with pytest.raises(StreamFileError, match="missing"):
        write_stream_file(bad, GeneratorSpec("mt"), 8)


def test_read_missing_file(tmp_path):
    with pytest.raises(StreamFileError):
        ByteBuffer.from_file(tmp_path / "nope.bin")


def test_committed_fixture_is_mt_seed7(fixture_buffer):
    assert fixture_buffer.data == GeneratorSpec("mt", seed=7).stream_bytes(1 << 20)
