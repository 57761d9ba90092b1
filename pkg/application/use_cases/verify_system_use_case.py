"""
Verify System Use Case - Application Layer

Entry point for `bellman verify`: loads a system, runs the requested check
families and merges their verdicts into one BellmanReport.

Follows the Command pattern: a single execute() method receives an input DTO,
does its work, and returns an output DTO. No click or file types cross this
boundary.
"""
import logging
import time
from typing import Optional, Protocol, runtime_checkable

from domain.entities import BellmanReport

from application.dto.verify_system_request import SystemSnapshot, VerifySystemRequest
from application.dto.verify_system_response import VerifySystemResponse
from application.services.axiom_validator import AxiomValidatorService
from application.services.bellman_verifier import BellmanVerifierService
from application.services.class_derivation import with_prefix_classes
from application.services.lattice_checker import LatticeCheckerService
from application.services.payoff_system_checker import PayoffSystemCheckerService

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Source interface (Dependency Inversion)
# Concrete implementation lives in infrastructure/persistence/repositories/
# ---------------------------------------------------------------------------

@runtime_checkable
class ISystemSource(Protocol):
    """Interface for loading FiniteControlSystems from storage."""

    def load(self, source: str) -> SystemSnapshot: ...


# ---------------------------------------------------------------------------
# Use Case
# ---------------------------------------------------------------------------

class VerifySystemUseCase:
    """
    Verifies one declared control system.

    Dependencies are injected via constructor; this class never imports
    from infrastructure or cli packages directly.

    Usage:
        use_case = VerifySystemUseCase(system_source=JsonSystemRepository())
        response = use_case.execute(VerifySystemRequest(source="box.sys.json"))
    """

    def __init__(self, system_source: ISystemSource, validator: Optional[AxiomValidatorService] = None) -> None:
        self._source = system_source
        self._validator = validator or AxiomValidatorService()

    def execute(self, request: VerifySystemRequest) -> VerifySystemResponse:
        """
        Run the verification.

        Steps:
          1. Load the system; derive prefix classes when the file asks for it
          2. Add the control times 0 and ∞ where missing
          3. Axioms and stability (structure is always checked)
          4. Lattice verdicts C1–C3 at every (c, S)
          5. Bellman's principle B1–B5 and the optimal value
          6. Payoff-system axioms

        Steps 4–6 are skipped with a note when the class table is incomplete.

        Args:
            request: Validated VerifySystemRequest DTO.

        Returns:
            VerifySystemResponse with the merged report; mathematical
            failures are verdicts, never exceptions.

        Raises:
            SystemFileError / ValidationError: if the source cannot be loaded.
        """
        return self.verify_snapshot(self._source.load(request.source), request)

    def verify_snapshot(self, snapshot: SystemSnapshot, request: VerifySystemRequest) -> VerifySystemResponse:
        """Steps 1–6 of execute() on a system that is already in memory (built-in examples)."""
        started = time.perf_counter()
        system = snapshot.system
        if snapshot.derive_prefix:
            system = with_prefix_classes(system.with_extremal_times())
        system = system.with_extremal_times()
        logger.info(
            "Verifying %s: %d outcomes, %d controls, %d control times",
            request.source, system.n, len(system.controls), len(system.control_times),
        )

        checks_run = []
        validation = self._validator.validate(system)
        report = BellmanReport()
        if "axioms" in request.checks:
            report = report.merge(validation)
            checks_run.append("axioms")
        else:
            report.add(validation.verdict("structure"))

        if not validation.verdict("structure").passed:
            report.note("lattice, Bellman and payoff checks skipped: class table is incomplete")
        else:
            verifier = BellmanVerifierService(system)
            if "lattice" in request.checks:
                lattice = LatticeCheckerService(verifier.system, verifier.calculator)
                for verdict in lattice.check_all(request.eps, request.cap):
                    report.add_lattice(verdict)
                checks_run.append("lattice")
            if "bellman" in request.checks:
                report = report.merge(verifier.verify(request.sequence))
                checks_run.append("bellman")
            if "payoff" in request.checks:
                for verdict in PayoffSystemCheckerService(verifier.system, verifier.calculator).check():
                    report.add(verdict)
                checks_run.append("payoff")

        duration_ms = (time.perf_counter() - started) * 1000
        failures = report.failures()
        if failures:
            logger.warning("Verification of %s failed %d check(s): %s", request.source, len(failures),
                           ", ".join(v.name for v in failures[:5]))
        return VerifySystemResponse(
            source=snapshot.source,
            digest=snapshot.digest,
            report=report,
            outcomes=system.n,
            control_ids=list(system.control_ids),
            time_ids=list(system.time_ids),
            checks_run=checks_run,
            duration_ms=duration_ms,
            stats={"failures": len(failures), "lattice_points": len(report.lattice)},
        )
