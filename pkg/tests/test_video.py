"""Tests for video module."""

from fractions import Fraction

import numpy as np
import pytest

from bikedet.background import ForegroundMask
from bikedet.errors import (
    BikedetError,
    InconsistentDimensions,
    NoFrames,
    ParseError,
    TruncatedStream,
    UnsupportedDepth,
    UnsupportedFormat,
)
from bikedet.video import (
    Frame,
    StreamMeta,
    encode_y4m,
    load_pgm_sequence,
    open_stream,
    parse_frame_rate,
    parse_pgm,
    parse_y4m,
    read_pgm,
    write_mask_pgm,
    write_pgm,
    write_pgm_sequence,
    write_y4m,
)


def _frame(width, height, index=0, value=None):
    if value is None:
        pixels = np.arange(width * height, dtype=np.uint8).reshape(height, width)
    else:
        pixels = np.full((height, width), value, dtype=np.uint8)
    return Frame(width, height, index, pixels)


def test_parse_pgm_cif_frame():
    """Test parsing a 352x288 binary PGM."""
    data = b"P5\n352 288\n255\n" + bytes(101376)
    frame = parse_pgm(data)
    assert (frame.width, frame.height) == (352, 288)
    assert frame.pixels.shape == (288, 352)


def test_parse_pgm_with_comment():
    """Test that header comments are skipped."""
    frame = parse_pgm(b"P5\n# made by hand\n2 1\n255\n\x01\x02")
    assert frame.pixels.tolist() == [[1, 2]]


def test_parse_pgm_rejects_16_bit():
    """Test that maxval above 255 is unsupported."""
    with pytest.raises(UnsupportedDepth):
        parse_pgm(b"P5\n4 4\n65535\n" + bytes(32))


def test_parse_pgm_bad_signature_offset():
    """Test that a wrong signature is reported at offset 0."""
    with pytest.raises(ParseError) as excinfo:
        parse_pgm(b"P2\n1 1\n255\n0")
    assert excinfo.value.offset == 0


def test_parse_pgm_short_payload():
    """Test that a short raster is a parse error."""
    with pytest.raises(ParseError):
        parse_pgm(b"P5\n4 4\n255\n" + bytes(10))


def test_frame_is_read_only():
    """Test that frame pixels cannot be modified."""
    frame = _frame(3, 2)
    with pytest.raises(ValueError):
        frame.pixels[0, 0] = 9


def test_write_pgm_single_pixel(tmp_path):
    """Test that a 1x1 frame of value 7 ends with byte 0x07."""
    path = tmp_path / "one.pgm"
    write_pgm(_frame(1, 1, value=7), path)
    data = path.read_bytes()
    assert data.startswith(b"P5")
    assert data[-1:] == b"\x07"


def test_pgm_round_trip(tmp_path):
    """Test that a written frame reads back equal."""
    frame = _frame(7, 5, index=3)
    write_pgm(frame, tmp_path / "f.pgm")
    assert read_pgm(tmp_path / "f.pgm", index=3) == frame


def test_write_mask_pgm_all_background(tmp_path):
    """Test that an all-false mask is written as zero bytes."""
    path = tmp_path / "mask.pgm"
    write_mask_pgm(np.zeros((4, 6), dtype=bool), path)
    frame = read_pgm(path)
    assert not frame.pixels.any()


def test_write_mask_pgm_foreground_is_255(tmp_path):
    """Test that foreground pixels are written as 255."""
    bits = np.zeros((2, 2), dtype=bool)
    bits[1, 0] = True
    write_mask_pgm(bits, tmp_path / "mask.pgm")
    assert read_pgm(tmp_path / "mask.pgm").pixels.tolist() == [[0, 0], [255, 0]]


def test_write_mask_pgm_foreground_mask(tmp_path):
    """Test writing a ForegroundMask as produced by the background model."""
    bits = np.zeros((3, 5), dtype=bool)
    bits[0, 4] = bits[2, 1] = True
    write_mask_pgm(ForegroundMask(bits), tmp_path / "mask.pgm")
    frame = read_pgm(tmp_path / "mask.pgm")
    assert (frame.width, frame.height) == (5, 3)
    assert np.array_equal(frame.pixels == 255, bits)
    assert set(np.unique(frame.pixels).tolist()) == {0, 255}


def test_load_pgm_sequence_orders_frames(tmp_path):
    """Test that frames are loaded in filename order with 0-based indices."""
    for i in (2, 0, 1):
        write_pgm(_frame(4, 3, value=i * 10), tmp_path / f"{i:03d}.pgm")
    meta, frames = load_pgm_sequence(tmp_path)
    frames = list(frames)
    assert meta == StreamMeta(4, 3, Fraction(25, 1))
    assert [f.index for f in frames] == [0, 1, 2]
    assert [int(f.pixels[0, 0]) for f in frames] == [0, 10, 20]


def test_load_pgm_sequence_inconsistent_dimensions(tmp_path):
    """Test that a frame of a different size is rejected."""
    write_pgm(_frame(10, 10), tmp_path / "000.pgm")
    write_pgm(_frame(12, 10), tmp_path / "001.pgm")
    _, frames = load_pgm_sequence(tmp_path)
    with pytest.raises(InconsistentDimensions):
        list(frames)


def test_load_pgm_sequence_empty_directory(tmp_path):
    """Test that a directory without frames raises NoFrames."""
    (tmp_path / "notes.txt").write_text("nothing here")
    with pytest.raises(NoFrames):
        load_pgm_sequence(tmp_path)


def test_sequence_sidecar_frame_rate(tmp_path):
    """Test that the sidecar frame rate survives a write and a load."""
    meta = StreamMeta(4, 3, Fraction(30000, 1001))
    count = write_pgm_sequence([_frame(4, 3, i) for i in range(3)], tmp_path, meta)
    loaded, frames = load_pgm_sequence(tmp_path)
    assert count == 3
    assert loaded.frame_rate == Fraction(30000, 1001)
    assert len(list(frames)) == 3


def test_sequence_frame_rate_override(tmp_path):
    """Test that an explicit frame rate beats the sidecar."""
    write_pgm_sequence([_frame(2, 2)], tmp_path)
    meta, _ = load_pgm_sequence(tmp_path, frame_rate=Fraction(10, 1))
    assert meta.frame_rate == 10


def test_parse_frame_rate_forms():
    """Test the accepted frame rate spellings."""
    assert parse_frame_rate("25:1") == 25
    assert parse_frame_rate("30000/1001") == Fraction(30000, 1001)
    assert parse_frame_rate("12.5") == Fraction(25, 2)
    with pytest.raises(ValueError):
        parse_frame_rate("0/1")


def test_parse_y4m_header_420():
    """Test stream metadata from a 4:2:0 header."""
    meta, frames = parse_y4m(b"YUV4MPEG2 W352 H288 F25:1 C420\n")
    assert meta == StreamMeta(352, 288, Fraction(25, 1))
    assert list(frames) == []


def test_parse_y4m_two_mono_frames():
    """Test a 2-frame mono 4x2 stream."""
    data = b"YUV4MPEG2 W4 H2 F25:1 Cmono\n"
    data += b"FRAME\n" + bytes(range(8)) + b"FRAME\n" + bytes(range(8, 16))
    _, frames = parse_y4m(data)
    frames = list(frames)
    assert len(frames) == 2
    assert [len(f.to_bytes()) for f in frames] == [8, 8]
    assert frames[1].pixels[0].tolist() == [8, 9, 10, 11]


def test_parse_y4m_skips_chroma():
    """Test that 4:2:0 chroma planes are skipped."""
    data = b"YUV4MPEG2 W2 H2 F25:1 C420jpeg\n"
    data += b"FRAME\n" + bytes([1, 2, 3, 4]) + bytes([128, 128])
    data += b"FRAME\n" + bytes([5, 6, 7, 8]) + bytes([128, 128])
    _, frames = parse_y4m(data)
    assert [f.pixels.ravel().tolist() for f in frames] == [[1, 2, 3, 4], [5, 6, 7, 8]]


def test_parse_y4m_truncated_plane():
    """Test that a stream ending mid-plane is truncated."""
    data = b"YUV4MPEG2 W4 H2 F25:1 Cmono\nFRAME\n" + bytes(5)
    _, frames = parse_y4m(data)
    with pytest.raises(TruncatedStream):
        list(frames)


def test_parse_y4m_missing_frame_tag():
    """Test that data without a FRAME delimiter is truncated."""
    data = b"YUV4MPEG2 W2 H1 F25:1 Cmono\nFRAME\n\x00\x00JUNK\n"
    _, frames = parse_y4m(data)
    with pytest.raises(TruncatedStream):
        list(frames)


def test_parse_y4m_missing_signature():
    """Test that a missing signature is a parse error."""
    with pytest.raises(ParseError):
        parse_y4m(b"MPEG W2 H2\n")


def test_parse_y4m_unsupported_chroma():
    """Test that 4:4:4 chroma is rejected."""
    with pytest.raises(UnsupportedFormat):
        parse_y4m(b"YUV4MPEG2 W2 H2 F25:1 C444\n")


def test_y4m_round_trip(tmp_path):
    """Test that a written mono Y4M reads back equal frames."""
    meta = StreamMeta(5, 3, Fraction(25, 1))
    frames = [_frame(5, 3, i) for i in range(4)]
    write_y4m(meta, frames, tmp_path / "clip.y4m")
    loaded_meta, loaded = open_stream(tmp_path / "clip.y4m")
    assert loaded_meta == meta
    assert list(loaded) == frames
    assert encode_y4m(meta, frames).count(b"FRAME\n") == 4


def test_open_stream_directory(tmp_path):
    """Test that a directory opens as a PGM sequence."""
    write_pgm_sequence([_frame(3, 3, i) for i in range(2)], tmp_path)
    meta, frames = open_stream(tmp_path)
    assert (meta.width, meta.height) == (3, 3)
    assert len(list(frames)) == 2


def test_open_stream_missing_path(tmp_path):
    """Test that a missing path raises NoFrames."""
    with pytest.raises(NoFrames):
        open_stream(tmp_path / "nope.y4m")


@pytest.mark.parametrize("seed", range(5))
def test_pgm_round_trip_random_buffers(tmp_path, seed):
    """Test that random frames of random size survive a PGM write and read."""
    rng = np.random.default_rng(seed)
    width, height = (int(v) for v in rng.integers(1, 40, size=2))
    pixels = rng.integers(0, 256, size=(height, width), dtype=np.uint8)
    frame = Frame(width, height, seed, pixels)
    write_pgm(frame, tmp_path / "f.pgm")
    assert read_pgm(tmp_path / "f.pgm", index=seed) == frame


@pytest.mark.parametrize("seed", range(5))
def test_y4m_round_trip_random_buffers(seed):
    """Test that random frame sequences survive a Y4M encode and parse."""
    rng = np.random.default_rng(100 + seed)
    width, height = (int(v) for v in rng.integers(1, 40, size=2))
    meta = StreamMeta(width, height, Fraction(int(rng.integers(1, 60)), 1))
    frames = [
        Frame(width, height, i, rng.integers(0, 256, size=(height, width), dtype=np.uint8))
        for i in range(int(rng.integers(1, 6)))
    ]
    parsed_meta, parsed = parse_y4m(encode_y4m(meta, frames))
    assert parsed_meta == meta
    assert list(parsed) == frames


def _mutate(data, rng):
    buffer = bytearray(data)
    for _ in range(int(rng.integers(1, 4))):
        pos = int(rng.integers(0, len(buffer)))
        op = int(rng.integers(0, 3))
        if op == 0:
            buffer[pos] = int(rng.integers(0, 256))
        elif op == 1:
            del buffer[pos]
        else:
            buffer.insert(pos, int(rng.choice(list(b"0123456789 #\nPWHFC:-"))))
    return bytes(buffer)


def test_parse_pgm_mangled_headers():
    """Test that mangled PGM headers yield a frame or a typed error, never a crash."""
    rng = np.random.default_rng(7)
    valid = b"P5\n# comment\n4 3\n255\n" + bytes(range(12))
    for _ in range(500):
        data = _mutate(valid, rng)
        try:
            frame = parse_pgm(data)
        except BikedetError:
            continue
        assert frame.pixels.shape == (frame.height, frame.width)


def test_parse_y4m_mangled_headers():
    """Test that mangled Y4M headers yield frames or a typed error, never a crash."""
    rng = np.random.default_rng(11)
    valid = b"YUV4MPEG2 W4 H2 F25:1 Ip A1:1 C420jpeg\nFRAME\n" + bytes(8) + bytes(4)
    for _ in range(500):
        data = _mutate(valid, rng)
        try:
            meta, frames = parse_y4m(data)
            frames = list(frames)
        except BikedetError:
            continue
        assert all(f.pixels.shape == (meta.height, meta.width) for f in frames)
