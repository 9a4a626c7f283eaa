"""Share container format and storage-site backends.

Container layout, all integers big-endian::

    "KXSH" | version u8 | scheme u8 | n u8 | index u8 | blockBits u16 | flags u8
    | plaintextLen u64 | [ivShare, blockBits/8 bytes] | fragLen u64 | fragment
    | crc32 u32 (over everything before it)

flags: bit0 share block present, bit1 interleaved, bit2 extra blocks added for
even length.
"""

from __future__ import annotations

import struct
import threading
import zlib
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence

from kexshard.core.blocks import nbytes_for
from kexshard.errors import (
    BadMagic,
    ChecksumMismatch,
    ContainerError,
    ContractViolation,
    IncompleteShareSet,
    TruncatedContainer,
    UnsupportedVersion,
)
from kexshard.schemes import SchemeId, Share

MAGIC = b"KXSH"
VERSION = 1
FLAG_IV_SHARE = 0x01
FLAG_INTERLEAVED = 0x02
FLAG_EVEN_PADDED = 0x04
KNOWN_FLAGS = FLAG_IV_SHARE | FLAG_INTERLEAVED | FLAG_EVEN_PADDED

_HEAD = struct.Struct(">4sBBBBHBQ")
_U64 = struct.Struct(">Q")
_U32 = struct.Struct(">I")


def encode_share(share: Share) -> bytes:
    if not 1 <= share.n <= 255 or not 1 <= share.index <= share.n:
        raise ContractViolation(f"share index {share.index} of {share.n} does not fit the container")
    if not 1 <= share.block_bits <= 0xFFFF:
        raise ContractViolation("block width does not fit the container")
    flags = (FLAG_IV_SHARE if share.iv_share is not None else 0) \
        | (FLAG_INTERLEAVED if share.interleaved else 0) \
        | (FLAG_EVEN_PADDED if share.even_padded else 0)
    parts = [_HEAD.pack(MAGIC, VERSION, int(share.scheme), share.n, share.index, share.block_bits, flags,
                        share.plaintext_len)]
    if share.iv_share is not None:
        parts.append(share.iv_share.to_bytes(nbytes_for(share.block_bits), "big"))
    parts.append(_U64.pack(len(share.fragment)))
    parts.append(share.fragment)
    body = b"".join(parts)
    return body + _U32.pack(zlib.crc32(body))


def decode_share(data: bytes) -> Share:
    data = bytes(data)
    if len(data) < 4:
        raise TruncatedContainer("container shorter than its magic")
    if data[:4] != MAGIC:
        raise BadMagic(f"bad magic {data[:4]!r}")
    if len(data) < 5:
        raise TruncatedContainer("container ends before its version")
    if data[4] != VERSION:
        raise UnsupportedVersion(f"container version {data[4]} is not supported")
    if len(data) < _HEAD.size + _U32.size:
        raise TruncatedContainer("container shorter than its header")
    crc = _U32.unpack_from(data, len(data) - 4)[0]
    body = data[:-4]
    if zlib.crc32(body) != crc:
        raise ChecksumMismatch("container checksum does not match")
    _, _, scheme, n, index, bits, flags, plen = _HEAD.unpack_from(body, 0)
    pos = _HEAD.size
    try:
        scheme_id = SchemeId(scheme)
    except ValueError:
        raise ContainerError(f"unknown scheme code {scheme}") from None
    if flags & ~KNOWN_FLAGS:
        raise ContainerError(f"unknown flag bits {flags:#04x}")
    if not 1 <= index <= n or bits == 0:
        raise ContainerError("inconsistent header fields")
    iv_share = None
    nb = nbytes_for(bits)
    if flags & FLAG_IV_SHARE:
        if len(body) < pos + nb:
            raise TruncatedContainer("container ends inside the share block")
        iv_share = int.from_bytes(body[pos:pos + nb], "big")
        if iv_share >> bits:
            raise ContainerError("share block has bits above the block width")
        pos += nb
    if len(body) < pos + _U64.size:
        raise TruncatedContainer("container ends before the fragment length")
    flen = _U64.unpack_from(body, pos)[0]
    pos += _U64.size
    if len(body) != pos + flen:
        raise TruncatedContainer(f"fragment length {flen} disagrees with the {len(body) - pos} bytes present")
    if flen % nb:
        raise ContainerError("fragment is not a whole number of blocks")
    return Share(scheme_id, index, n, iv_share, body[pos:], plen, bits,
                 interleaved=bool(flags & FLAG_INTERLEAVED), even_padded=bool(flags & FLAG_EVEN_PADDED))


# -- sites ---------------------------------------------------------------------

class StorageSite(ABC):
    @abstractmethod
    def put(self, name: str, data: bytes) -> None: ...

    @abstractmethod
    def get(self, name: str) -> bytes:
        """Raise KeyError when ``name`` is absent."""

    @abstractmethod
    def list(self) -> list[str]: ...

    def delete(self, name: str) -> None:
        raise NotImplementedError


class MemorySite(StorageSite):
    def __init__(self):
        self._objects: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def put(self, name, data):
        with self._lock:
            self._objects[name] = bytes(data)

    def get(self, name):
        with self._lock:
            return self._objects[name]

    def list(self):
        with self._lock:
            return sorted(self._objects)

    def delete(self, name):
        with self._lock:
            self._objects.pop(name, None)

    def clear(self):
        with self._lock:
            self._objects.clear()


class DirectorySite(StorageSite):
    """One file per object inside ``root``; writes go through a temp file and rename."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _path(self, name: str) -> Path:
        if not name or "/" in name or "\\" in name or name in (".", ".."):
            raise ContractViolation(f"invalid object name {name!r}")
        return self.root / name

    def put(self, name, data):
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(name)
        tmp = path.with_name(f".{path.name}.{threading.get_ident()}.tmp")
        tmp.write_bytes(data)
        tmp.replace(path)

    def get(self, name):
        try:
            return self._path(name).read_bytes()
        except FileNotFoundError:
            raise KeyError(name) from None

    def list(self):
        if not self.root.is_dir():
            return []
        return sorted(p.name for p in self.root.iterdir() if p.is_file() and not p.name.startswith("."))

    def delete(self, name):
        self._path(name).unlink(missing_ok=True)


class HttpSite(StorageSite):
    """Placeholder for a remote object store; only the interface exists."""

    def __init__(self, base_url: str):
        self.base_url = base_url

    def put(self, name, data):
        raise NotImplementedError("remote sites are not implemented")

    def get(self, name):
        raise NotImplementedError("remote sites are not implemented")

    def list(self):
        raise NotImplementedError("remote sites are not implemented")


def share_object_name(object_name: str, index: int) -> str:
    return f"{object_name}.{index}.kxsh"


def disperse(shares: Sequence[Share], sites: Sequence[StorageSite], object_name: str) -> list[str]:
    if len(shares) != len(sites):
        raise ContractViolation(f"{len(shares)} shares for {len(sites)} sites")
    names = []
    for share, site in zip(sorted(shares, key=lambda s: s.index), sites):
        name = share_object_name(object_name, share.index)
        site.put(name, encode_share(share))
        names.append(name)
    return names


def collect(sites: Sequence[StorageSite], object_name: str) -> list[Share]:
    """Gather share ``i`` from site ``i`` (1-based), ordered by header index."""
    shares, missing = [], []
    for i, site in enumerate(sites, start=1):
        try:
            data = site.get(share_object_name(object_name, i))
        except KeyError:
            missing.append(i)
            continue
        shares.append(decode_share(data))
    if missing:
        raise IncompleteShareSet(missing)
    return sorted(shares, key=lambda s: s.index)


def load_share_files(paths: Sequence[str | Path]) -> list[Share]:
    return sorted((decode_share(Path(p).read_bytes()) for p in paths), key=lambda s: s.index)
