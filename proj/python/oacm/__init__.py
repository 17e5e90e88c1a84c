from ._oacm import (  # noqa: F401
    CompatibilityError,
    ConfigError,
    default_config,
    derivative,
    diag_recompute,
    divergence_norm,
    leray_project,
    run,
    validate_config,
)
