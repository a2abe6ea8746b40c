"""Noisy mutual information between a level's activations and the input or label.

Each pattern's activation vector is scaled by its own largest absolute entry
and observed through isotropic Gaussian noise, ``T = mu(X) + sigma * Z``.
``X`` is the pattern drawn with probability proportional to its weight, so
``T`` is a Gaussian mixture and ``I(X;T) = H(T) - H(T|X)`` with a closed-form
``H(T|X)``.

The Monte Carlo estimate is stratified: every pattern gets the same number
of noise draws and the per-pattern means are combined with the pattern
weights. For a draw around pattern ``i`` the pointwise terms are::

    log p(t|i) - log p(t) = -logsumexp_k(log w_k - q_ik)
    log p(t|y) - log p(t) = logsumexp_{k in y}(log w_k - q_ik) - log W_y
                            - logsumexp_k(log w_k - q_ik)

with ``q_ik = (|d_ik|^2 + 2 sigma d_ik . z) / (2 sigma^2)`` and
``d_ik = mu_i - mu_k``. The noise energy ``|z|^2`` is shared by the
numerator and every mixture component, so it is cancelled exactly rather
than estimated. Identical means then give exactly zero information.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from neurashed.errors import (
    EmptyDataset,
    MetricsError,
    NonFiniteActivation,
    NonPositiveSigma,
)

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class MIEstimate:
    mi_input: float
    mi_label: float
    mc_samples: int
    sigma: float
    seed: int
    mi_input_se: float = 0.0
    mi_label_se: float = 0.0
    conditional_entropy: float = 0.0

    @property
    def entropy(self) -> float:
        """Estimated H(T) in bits."""
        return self.mi_input + self.conditional_entropy


def normalize_activations(vectors: Sequence[NDArray[np.float64]]) -> NDArray[np.float64]:
    """Scale each row by its largest absolute entry; zero rows stay zero."""
    mu = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    scale = np.max(np.abs(mu), axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    return mu / scale


def gaussian_conditional_entropy(*, dim: int, sigma: float) -> float:
    """H(T|X) in bits for isotropic noise of standard deviation ``sigma``."""
    return 0.5 * dim * math.log2(2 * math.pi * math.e * sigma**2)


def estimate_mutual_information(
    *,
    activations: Sequence[NDArray[np.float64]],
    weights: Sequence[float],
    labels: Sequence[int],
    sigma: float,
    mc_samples: int,
    seed: int,
) -> MIEstimate:
    if not sigma > 0:
        raise NonPositiveSigma(f"sigma must be > 0, got {sigma}")
    if mc_samples < 1:
        raise MetricsError(f"mc_samples must be >= 1, got {mc_samples}")
    if len(activations) == 0:
        raise EmptyDataset("no activation vectors")
    if not len(activations) == len(weights) == len(labels):
        raise MetricsError("activations, weights and labels differ in length")
    finite = np.isfinite(np.atleast_2d(np.asarray(activations, dtype=np.float64))).all(axis=1)
    if not finite.all():
        raise NonFiniteActivation(
            f"activation vector {int(np.argmin(finite))} has a non-finite entry"
        )

    mu = normalize_activations(activations)
    n, dim = mu.shape
    w = np.asarray(weights, dtype=np.float64)
    w = w / w.sum()
    log_w = np.log(w)
    y = np.asarray(labels)
    draws = math.ceil(mc_samples / n)
    rng = np.random.default_rng(seed)

    input_terms = np.empty((n, draws))
    label_terms = np.empty((n, draws))
    for i in range(n):
        d = mu[i] - mu
        z = rng.standard_normal((draws, dim))
        q = (np.sum(d * d, axis=1) + 2 * sigma * (z @ d.T)) / (2 * sigma**2)
        mixture = log_w - q
        log_ratio = -logsumexp(mixture, axis=1)
        same = y == y[i]
        label_terms[i] = (
            logsumexp(mixture[:, same], axis=1) - logsumexp(log_w[same]) + log_ratio
        )
        input_terms[i] = log_ratio

    mi_input, se_input = _stratified_mean(terms=input_terms, w=w)
    mi_label, se_label = _stratified_mean(terms=label_terms, w=w)
    estimate = MIEstimate(
        mi_input=mi_input / LN2,
        mi_label=mi_label / LN2,
        mc_samples=draws * n,
        sigma=sigma,
        seed=seed,
        mi_input_se=se_input / LN2,
        mi_label_se=se_label / LN2,
        conditional_entropy=gaussian_conditional_entropy(dim=dim, sigma=sigma),
    )
    logger.debug(
        f"MI estimate: I(X;T)={estimate.mi_input:.4f} bits, "
        f"I(T;Y)={estimate.mi_label:.4f} bits ({n} patterns, {draws} draws each)"
    )
    return estimate


def _stratified_mean(*, terms: NDArray[np.float64], w: NDArray[np.float64]) -> tuple[float, float]:
    draws = terms.shape[1]
    mean = float(w @ terms.mean(axis=1))
    if draws < 2:
        return mean, 0.0
    var = terms.var(axis=1, ddof=1)
    return mean, float(math.sqrt(np.sum(w**2 * var) / draws))
