from .types import ParticleSystem, normalize_weights, weighted_mean, weighted_covariance
from .model import ModelSpec, CallableModel, PriorSampler
from .rng import RngStream

__all__ = [
    "ParticleSystem",
    "normalize_weights",
    "weighted_mean",
    "weighted_covariance",
    "ModelSpec",
    "CallableModel",
    "PriorSampler",
    "RngStream",
]
