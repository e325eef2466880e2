import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicsim.errors import DimensionError, FormatError
from bicsim.fileformat import (
    BatchFile,
    generate,
    indexes_from_bytes,
    indexes_to_bytes,
    read_indexes,
    write_indexes,
)
from bicsim.indexer import BitmapIndex, Record
from bicsim.multicore import Batch


def test_layout_by_hand():
    bf = BatchFile(2, 1, 3, (Batch(0, [Record([7, 8, 9], [1, 0, 1])], [7, 9]),))
    expected = (b"BIC1" + struct.pack("<HIIII", 1, 2, 1, 3, 1)
                + bytes([7, 9]) + bytes([7, 8, 9]) + bytes([0b101]))
    assert bf.to_bytes() == expected
    assert BatchFile.from_bytes(expected) == bf


def test_nominal_geometry_generation():
    bf = generate(1, 8, 16, 32, 1)
    assert (bf.m, bf.n, bf.w, len(bf.batches)) == (8, 16, 32, 1)
    assert len(bf.to_bytes()) == 22 + 8 + 16 * (32 + 4)


def test_generation_is_deterministic():
    a = generate(1, 8, 16, 32, 3, alphabet=20, valid_fraction=0.7).to_bytes()
    b = generate(1, 8, 16, 32, 3, alphabet=20, valid_fraction=0.7).to_bytes()
    assert a == b
    assert generate(2, 8, 16, 32, 3, alphabet=20, valid_fraction=0.7).to_bytes() != a


@pytest.mark.parametrize("geom", [(0, 16, 32, 1), (8, 0, 32, 1), (8, 16, 0, 1), (8, 16, 32, 0)])
def test_generation_rejects_bad_geometry(geom):
    with pytest.raises(DimensionError):
        generate(1, *geom)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 9), st.integers(1, 9), st.integers(1, 20),
       st.integers(1, 4), st.floats(0, 1))
def test_round_trip_is_byte_identical(seed, m, n, w, batches, frac):
    data = generate(seed, m, n, w, batches, valid_fraction=frac).to_bytes()
    parsed = BatchFile.from_bytes(data)
    assert parsed.to_bytes() == data
    assert BatchFile.from_bytes(parsed.to_bytes()) == parsed


def test_file_round_trip(tmp_path):
    bf = generate(4, 3, 5, 9, 2)
    path = tmp_path / "w.bic"
    bf.write(path)
    assert BatchFile.read(path) == bf


@pytest.mark.parametrize("mutate", [
    lambda d: d[:10],
    lambda d: b"XIC1" + d[4:],
    lambda d: d[:4] + struct.pack("<H", 2) + d[6:],
    lambda d: d + b"\0",
    lambda d: d[:-1],
])
def test_malformed_batch_files(mutate):
    data = generate(1, 2, 2, 3, 1).to_bytes()
    with pytest.raises(FormatError):
        BatchFile.from_bytes(mutate(data))


def test_nonzero_mask_padding_rejected():
    data = bytearray(BatchFile(1, 1, 3, (Batch(0, [Record([1, 2, 3])], [1]),)).to_bytes())
    data[-1] |= 0x80
    with pytest.raises(FormatError):
        BatchFile.from_bytes(bytes(data))


def test_header_geometry_must_match_batches():
    with pytest.raises(DimensionError):
        BatchFile(2, 1, 1, (Batch(0, [Record([1])], [1]),))


def test_index_file_round_trip(tmp_path):
    indexes = [BitmapIndex.from_lists([[1, 0, 1] * 4]), BitmapIndex.from_lists([[0], [1]])]
    data = indexes_to_bytes(indexes)
    assert indexes_from_bytes(data) == indexes
    assert indexes_to_bytes(indexes_from_bytes(data)) == data
    path = tmp_path / "x.bix"
    write_indexes(path, indexes)
    assert read_indexes(path) == indexes


def test_malformed_index_files():
    data = indexes_to_bytes([BitmapIndex.from_lists([[1, 0, 1]])])
    for bad in (data[:5], b"BIC1" + data[4:], data + b"\0", data[:-1]):
        with pytest.raises(FormatError):
            indexes_from_bytes(bad)
    padded = bytearray(data)
    padded[-1] |= 0x80
    with pytest.raises(FormatError):
        indexes_from_bytes(bytes(padded))
