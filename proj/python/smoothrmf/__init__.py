"""Smooth numbers, Steinhaus random multiplicative functions and random Euler products."""

from ._smoothrmf import (
    DomainError,
    Error,
    PrimeTable,
    RangeError,
    ResourceError,
    SolverError,
    __version__,
    abs_moment,
    cancellation_report,
    count_restricted_interval,
    dickman_rho,
    dirichlet_l1,
    enumerate_smooth,
    ep_moment,
    factorize,
    ht_estimate,
    is_smooth,
    log_exact_ep_moment,
    log_zeta,
    plancherel,
    psi,
    run_checks,
    saddle_approx,
    saddle_point,
    sieve,
    xi,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
