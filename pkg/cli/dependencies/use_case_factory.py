"""
Use Case Factory - CLI Layer

Creates fully-wired use case instances and loggers from the active
Settings. Commands import from here, never from infrastructure wiring
directly, keeping the coupling one-way: cli → use_case_factory → application.
"""
from application.use_cases.verify_system_use_case import VerifySystemUseCase
from infrastructure.logging import StructuredLogger, get_logger
from infrastructure.persistence.repositories import JsonSystemRepository

from .settings import Settings


def command_logger(name: str, settings: Settings) -> StructuredLogger:
    """StructuredLogger at the configured BELLMAN_LOG_LEVEL."""
    return get_logger(name, settings.level)


def get_system_repository(settings: Settings) -> JsonSystemRepository:
    return JsonSystemRepository(logger=command_logger("infrastructure.persistence", settings))


def get_verify_system_use_case(settings: Settings) -> VerifySystemUseCase:
    """
    VerifySystemUseCase reading SystemFiles through the JSON file store.

    Usage:
        use_case = get_verify_system_use_case(ctx.obj)
        response = use_case.execute(VerifySystemRequest(source=path))
    """
    return VerifySystemUseCase(system_source=get_system_repository(settings))
