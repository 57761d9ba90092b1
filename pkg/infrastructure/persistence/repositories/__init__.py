# __init__.py
from .json_system_repository import JsonSystemRepository, digest_bytes

__all__ = ["JsonSystemRepository", "digest_bytes"]
