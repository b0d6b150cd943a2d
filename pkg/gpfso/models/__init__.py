from .bimodal import BimodalToyModel, simulate_bimodal
from .cqr import CqrModel, cqr_grad, cqr_logdensity, cqr_theta_star, rho_tau, simulate_cqr
from .dataset import BootstrapStream, Dataset, bootstrap_next, bootstrap_sample
from .gaussian import (
    GaussianMeanModel,
    GaussianOracle,
    folded_normal_mean,
    oracle_expected_errors,
    oracle_step,
    run_oracle,
    simulate_gaussian,
)
from .multimodal import MultimodalModel, multimodal_mu, simulate_multimodal
from .sagm import SagmModel, sagm_logdensity, sagm_theta_star, simulate_sagm

__all__ = [
    "BimodalToyModel",
    "simulate_bimodal",
    "CqrModel",
    "cqr_grad",
    "cqr_logdensity",
    "cqr_theta_star",
    "rho_tau",
    "simulate_cqr",
    "BootstrapStream",
    "Dataset",
    "bootstrap_next",
    "bootstrap_sample",
    "GaussianMeanModel",
    "GaussianOracle",
    "folded_normal_mean",
    "oracle_expected_errors",
    "oracle_step",
    "run_oracle",
    "simulate_gaussian",
    "MultimodalModel",
    "multimodal_mu",
    "simulate_multimodal",
    "SagmModel",
    "sagm_logdensity",
    "sagm_theta_star",
    "simulate_sagm",
]
