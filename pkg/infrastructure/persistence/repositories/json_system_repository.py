"""
JsonSystemRepository - Infrastructure Layer

Implements the ISystemSource Protocol from the use-case layer. Reads
SystemFile documents from disk (or standard input for "-"), remembers the
SHA-256 digest of the exact bytes read, and writes systems back out.
"""
import hashlib
import sys
from pathlib import Path
from typing import Optional, Union

from application.dto.verify_system_request import SystemSnapshot
from domain.entities import FiniteControlSystem
from infrastructure.logging import StructuredLogger, get_logger

from ..system_file_codec import SystemFileError, decode_system, encode_system

STDIN = "-"


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


class JsonSystemRepository:
    """
    File-backed store for FiniteControlSystem aggregates.

    Usage:
        repo = JsonSystemRepository()
        snapshot = repo.load("tests/fixtures/box_picking.sys.json")
        repo.save(snapshot.system, "copy.sys.json")
    """

    def __init__(self, logger: Optional[StructuredLogger] = None) -> None:
        self._logger = logger or get_logger(__name__)

    def load(self, source: str) -> SystemSnapshot:
        data = self._read(source)
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SystemFileError(f"file is not UTF-8: {exc.reason}") from None
        decoded = decode_system(text)
        snapshot = SystemSnapshot(
            system=decoded.system,
            source=source,
            digest=digest_bytes(data),
            derive_prefix=decoded.derive_prefix,
        )
        self._logger.debug(
            "System loaded",
            source=source,
            outcomes=decoded.system.n,
            controls=len(decoded.system.controls),
            digest=snapshot.digest,
        )
        return snapshot

    def save(self, system: FiniteControlSystem, target: Union[str, Path]) -> str:
        """Write the system; returns the digest of the bytes written."""
        data = encode_system(system).encode("utf-8")
        Path(target).write_bytes(data)
        self._logger.debug("System written", target=str(target), bytes=len(data))
        return digest_bytes(data)

    @staticmethod
    def _read(source: str) -> bytes:
        if source == STDIN:
            return sys.stdin.buffer.read()
        path = Path(source)
        if not path.is_file():
            raise SystemFileError(f"no such system file: {source}")
        return path.read_bytes()
