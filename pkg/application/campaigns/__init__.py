"""Randomized campaigns over the process algebra and the control engine."""
from .campaign_models import CampaignConfig, CampaignReport, Violation
from .galmarino_campaign import run_galmarino_campaign
from .lattice_campaign import run_lattice_campaign
from .snell_campaign import run_snell_campaign

__all__ = [
    "CampaignConfig",
    "CampaignReport",
    "Violation",
    "run_galmarino_campaign",
    "run_lattice_campaign",
    "run_snell_campaign",
]
