from .audit import (
    AuditReport,
    Definition,
    Witness,
    cor_single_audit,
    core_beta,
    distortion,
    distortion_report,
    no_augmentation_monitor,
    pf_gamma,
    pr_gamma,
    pr_strong_gamma,
    reevaluate,
    stability_rho,
)
from .bounds import SurdBound, proven_bound
from .coverage import CoverageRecord, representatives_of
from .ear import ear_select, single_winner, single_winner_via_ear
from .instance import Instance, RankedProfile, d_sum, derive_rankings, hare_quota, validate_metric
from .instances import GeneratorSpec, gen_diverging, gen_random, gen_refined, gen_separation, gen_two_cluster
from .tgc import ball_events, tgc_select

__all__ = [
    "AuditReport",
    "CoverageRecord",
    "Definition",
    "GeneratorSpec",
    "Instance",
    "RankedProfile",
    "SurdBound",
    "Witness",
    "ball_events",
    "cor_single_audit",
    "core_beta",
    "d_sum",
    "derive_rankings",
    "distortion",
    "distortion_report",
    "ear_select",
    "gen_diverging",
    "gen_random",
    "gen_refined",
    "gen_separation",
    "gen_two_cluster",
    "hare_quota",
    "no_augmentation_monitor",
    "proven_bound",
    "pf_gamma",
    "pr_gamma",
    "pr_strong_gamma",
    "reevaluate",
    "representatives_of",
    "single_winner",
    "single_winner_via_ear",
    "stability_rho",
    "tgc_select",
    "validate_metric",
]
