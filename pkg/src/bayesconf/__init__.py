"""Finite-class Bayes mixture prediction with computable confidence bounds."""

from .confidence import (
    ConfidenceParams,
    PlausibleSet,
    d_hat,
    h_hat,
    hoeffding_f,
    hoeffding_g,
    update_plausible,
)
from .divergence import (
    CumulativeTracker,
    StepDivergences,
    accumulate,
    hellinger_sq,
    info_gain,
    kl,
    step_divergences,
    total_variation,
)
from .kwik import Bot, KwikAgent, KwikConfig, Predict, bot_bound, kwik_batch, kwik_run, kwik_step
from .measures import (
    AllOnes,
    BernoulliMeasure,
    CategoricalIID,
    ConditioningOnNullSet,
    Lebesgue,
    Measure,
    OnesThenZeros,
    TableMeasure,
)
from .mixture import ImpossibleObservation, MixtureState, ModelClass, logsumexp, new_mixture, prior_entropy
from .simulate import SimulationResult, simulate

__version__ = "0.1.0"

__all__ = [
    "ConfidenceParams",
    "PlausibleSet",
    "d_hat",
    "h_hat",
    "hoeffding_f",
    "hoeffding_g",
    "update_plausible",
    "CumulativeTracker",
    "StepDivergences",
    "accumulate",
    "hellinger_sq",
    "info_gain",
    "kl",
    "step_divergences",
    "total_variation",
    "Bot",
    "KwikAgent",
    "KwikConfig",
    "Predict",
    "bot_bound",
    "kwik_batch",
    "kwik_run",
    "kwik_step",
    "AllOnes",
    "BernoulliMeasure",
    "CategoricalIID",
    "ConditioningOnNullSet",
    "Lebesgue",
    "Measure",
    "OnesThenZeros",
    "TableMeasure",
    "ImpossibleObservation",
    "MixtureState",
    "ModelClass",
    "logsumexp",
    "new_mixture",
    "prior_entropy",
    "SimulationResult",
    "simulate",
]
