"""Temporal topic and latent community detection core operations."""

from ttc._core import (
    __version__,
    ami,
    ari,
    ccm,
    is_white_noise,
    louvain,
    modularity,
    power_spectrum,
    usd,
    xcorr0,
    xcorr2d_at,
)

__all__ = [
    "__version__",
    "ami",
    "ari",
    "ccm",
    "is_white_noise",
    "louvain",
    "modularity",
    "power_spectrum",
    "usd",
    "xcorr0",
    "xcorr2d_at",
]
