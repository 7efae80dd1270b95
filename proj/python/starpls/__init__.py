"""Physical-layer-security optimizer for a transmitting/reflecting surface."""

from ._starpls import (
    BeamformerPair,
    ChannelSet,
    McEstimate,
    OptResult,
    RateReport,
    RngStream,
    Scheme,
    StarCoefficients,
    SurfacePair,
    SystemConfig,
    asymptotic_eaves_penalty,
    avg_security_rate_asymptotic,
    build_surface_matrices,
    channel_stream,
    config_from_json_text,
    config_hash,
    conventional_ris_project,
    discretize_phases,
    eaves_rate_instant,
    empirical_avg_eaves_rate,
    generate_channels,
    load_config,
    make_rate_report,
    matched_equal_power_init,
    optimize,
    optimize_conventional_ris,
    optimize_zf,
    path_loss,
    random_feasible_coefficients,
    rate_bob,
    rate_carol,
    run_scheme,
    sample_eve_smallscale,
    scheme_stream,
    security_rate_instant,
    set_thread_budget,
    thread_budget,
    weighted_objective,
    zf_beamformers,
    zf_power_split,
)

__all__ = [
    "BeamformerPair",
    "ChannelSet",
    "McEstimate",
    "OptResult",
    "RateReport",
    "RngStream",
    "Scheme",
    "StarCoefficients",
    "SurfacePair",
    "SystemConfig",
    "asymptotic_eaves_penalty",
    "avg_security_rate_asymptotic",
    "build_surface_matrices",
    "channel_stream",
    "config_from_json_text",
    "config_hash",
    "conventional_ris_project",
    "discretize_phases",
    "eaves_rate_instant",
    "empirical_avg_eaves_rate",
    "generate_channels",
    "load_config",
    "make_rate_report",
    "matched_equal_power_init",
    "optimize",
    "optimize_conventional_ris",
    "optimize_zf",
    "path_loss",
    "random_feasible_coefficients",
    "rate_bob",
    "rate_carol",
    "run_scheme",
    "sample_eve_smallscale",
    "scheme_stream",
    "security_rate_instant",
    "set_thread_budget",
    "thread_budget",
    "weighted_objective",
    "zf_beamformers",
    "zf_power_split",
]
