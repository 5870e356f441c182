# regime/hmm.py - Hidden Markov model with diagonal Gaussian emissions

from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.cluster.vq import kmeans2

import config
from utils.errors import DimensionError, InsufficientDataError, ValidationError

STOCHASTIC_TOL = 1e-10
LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class MGHMMParams:
    pi: np.ndarray      # (N,)
    trans: np.ndarray   # (N, N)
    means: np.ndarray   # (N, D)
    covs: np.ndarray    # (N, D) diagonal covariance entries

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=float)
        trans = np.atleast_2d(np.asarray(self.trans, dtype=float))
        means = np.atleast_2d(np.asarray(self.means, dtype=float))
        covs = np.atleast_2d(np.asarray(self.covs, dtype=float))
        n = pi.shape[0]
        if trans.shape != (n, n) or means.shape[0] != n or covs.shape != means.shape:
            raise DimensionError(f"inconsistent HMM shapes: pi {pi.shape}, trans {trans.shape}, "
                                 f"means {means.shape}, covs {covs.shape}")
        if (pi < 0).any() or abs(pi.sum() - 1.0) > STOCHASTIC_TOL:
            raise ValidationError("initial distribution must be non-negative and sum to 1")
        if (trans < 0).any() or np.abs(trans.sum(axis=1) - 1.0).max() > STOCHASTIC_TOL:
            raise ValidationError("transition rows must be non-negative and sum to 1")
        if not (covs > 0).all():
            raise ValidationError("covariance diagonals must be > 0")
        for name, value in (('pi', pi), ('trans', trans), ('means', means), ('covs', covs)):
            object.__setattr__(self, name, value)

    @property
    def n_states(self):
        return self.pi.shape[0]

    @property
    def n_obs(self):
        return self.means.shape[1]

    def permute(self, order):
        """Relabel states: new state i is old state order[i]."""
        order = np.asarray(order)
        return MGHMMParams(self.pi[order], self.trans[np.ix_(order, order)], self.means[order], self.covs[order])

    def to_dict(self):
        return {
            'pi': self.pi.tolist(),
            'trans': self.trans.tolist(),
            'means': self.means.tolist(),
            'covs': self.covs.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data['pi'], data['trans'], data['means'], data['covs'])


def log_emission(params, state, row):
    """Log density of one observation row under state `state`."""
    row = np.asarray(row, dtype=float)
    var = params.covs[state]
    return float(-0.5 * np.sum(LOG_2PI + np.log(var) + (row - params.means[state]) ** 2 / var))


def log_emissions(params, obs):
    """(T, N) table of log emission densities."""
    obs = np.atleast_2d(np.asarray(obs, dtype=float))
    if obs.shape[1] != params.n_obs:
        raise DimensionError(f"observation width {obs.shape[1]} != {params.n_obs}")
    diff = obs[:, None, :] - params.means[None, :, :]
    return -0.5 * np.sum(LOG_2PI + np.log(params.covs)[None] + diff ** 2 / params.covs[None], axis=2)


def _log(x):
    with np.errstate(divide='ignore'):
        return np.log(x)


def forward_backward(params, obs):
    """
    Scaled forward-backward pass.

    Returns:
        (log-likelihood, gamma (T, N), xi (T-1, N, N))
    """
    log_b = log_emissions(params, obs)
    n_steps, n_states = log_b.shape
    if n_steps == 0:
        raise InsufficientDataError("forward_backward needs at least one observation")
    offset = log_b.max(axis=1, keepdims=True)
    b = np.exp(log_b - offset)
    tiny = np.finfo(float).tiny

    alpha = np.empty((n_steps, n_states))
    scale = np.empty(n_steps)
    alpha[0] = params.pi * b[0]
    for t in range(n_steps):
        if t > 0:
            alpha[t] = (alpha[t - 1] @ params.trans) * b[t]
        scale[t] = max(alpha[t].sum(), tiny)
        alpha[t] /= scale[t]

    beta = np.ones((n_steps, n_states))
    for t in range(n_steps - 2, -1, -1):
        beta[t] = params.trans @ (b[t + 1] * beta[t + 1]) / scale[t + 1]

    gamma = alpha * beta
    gamma /= gamma.sum(axis=1, keepdims=True)

    xi = alpha[:-1, :, None] * params.trans[None] * (b[1:] * beta[1:])[:, None, :] / scale[1:, None, None]
    if len(xi):
        xi /= xi.sum(axis=(1, 2), keepdims=True)

    loglik = float(np.log(scale).sum() + offset.sum())
    return loglik, gamma, xi


def initial_params(obs, n_states, rng, self_transition, cov_floor):
    """k-means means, pooled variances, uniform pi, sticky transitions."""
    if n_states == 1:
        means = obs.mean(axis=0, keepdims=True)
    else:
        means, _ = kmeans2(obs, n_states, minit='++', seed=rng)
    covs = np.tile(np.maximum(obs.var(axis=0), cov_floor), (n_states, 1))
    if n_states == 1:
        trans = np.ones((1, 1))
    else:
        trans = np.full((n_states, n_states), (1.0 - self_transition) / (n_states - 1))
        np.fill_diagonal(trans, self_transition)
    return MGHMMParams(np.full(n_states, 1.0 / n_states), trans, means, covs)


def m_step(params, obs, gamma, xi, cov_floor):
    """Re-estimate parameters; states with no posterior mass keep their previous values."""
    pi = gamma[0] / gamma[0].sum()

    trans = params.trans.copy()
    if len(xi):
        counts = xi.sum(axis=0)
        rows = counts.sum(axis=1)
        live = rows > 0
        trans[live] = counts[live] / rows[live, None]

    mass = gamma.sum(axis=0)
    means = params.means.copy()
    covs = params.covs.copy()
    live = mass > 0
    means[live] = (gamma.T @ obs)[live] / mass[live, None]
    for j in np.flatnonzero(live):
        diff = obs - means[j]
        covs[j] = gamma[:, j] @ (diff * diff) / mass[j]
    covs = np.maximum(covs, cov_floor)
    return MGHMMParams(pi, trans, means, covs)


def _fit_once(obs, n_states, rng, tol, max_iter, cov_floor, self_transition):
    params = initial_params(obs, n_states, rng, self_transition, cov_floor)
    trace = []
    for iteration in range(max_iter):
        loglik, gamma, xi = forward_backward(params, obs)
        trace.append(loglik)
        if len(trace) > 1 and trace[-1] - trace[-2] < tol:
            break
        if iteration == max_iter - 1:
            break
        params = m_step(params, obs, gamma, xi, cov_floor)
    return params, np.asarray(trace)


def baum_welch(obs, n_states=config.REGIME_OPTIONS['n_states'], seed=0,
               tol=config.REGIME_OPTIONS['tol'], max_iter=config.REGIME_OPTIONS['max_iter'],
               restarts=config.REGIME_OPTIONS['restarts'], cov_floor=config.REGIME_OPTIONS['cov_floor'],
               self_transition=config.REGIME_OPTIONS['self_transition']):
    """
    Expectation-maximization fit with seeded restarts.

    Returns:
        (MGHMMParams of the restart with the best final log-likelihood,
         that restart's per-iteration log-likelihood trace)
    """
    obs = np.atleast_2d(np.asarray(obs, dtype=float))
    if obs.size == 0:
        raise InsufficientDataError("baum_welch needs observations")
    if obs.shape[0] < 10 * n_states:
        raise InsufficientDataError(f"baum_welch needs >= {10 * n_states} rows for {n_states} states, "
                                    f"got {obs.shape[0]}")
    best = None
    for restart, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        params, trace = _fit_once(obs, n_states, np.random.default_rng(child),
                                  tol, max_iter, cov_floor, self_transition)
        logger.debug(f"Baum-Welch restart {restart}: log-likelihood {trace[-1]:.6f} "
                     f"after {len(trace)} iterations")
        if best is None or trace[-1] > best[1][-1]:
            best = (params, trace)
    return best


def viterbi(params, obs):
    """Most probable state path; ties resolve toward the lower state index."""
    log_b = log_emissions(params, obs)
    n_steps, n_states = log_b.shape
    if n_steps == 0:
        return np.zeros(0, dtype=int)
    log_a = _log(params.trans)
    delta = _log(params.pi) + log_b[0]
    back = np.zeros((n_steps, n_states), dtype=int)
    for t in range(1, n_steps):
        scores = delta[:, None] + log_a
        back[t] = np.argmax(scores, axis=0)
        delta = scores[back[t], np.arange(n_states)] + log_b[t]
    path = np.empty(n_steps, dtype=int)
    path[-1] = int(np.argmax(delta))
    for t in range(n_steps - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path


def path_log_probability(params, obs, path):
    """Joint log-probability of a state path and the observations."""
    path = np.asarray(path, dtype=int)
    log_b = log_emissions(params, obs)
    if len(path) != len(log_b):
        raise DimensionError(f"path length {len(path)} != {len(log_b)} observations")
    log_a = _log(params.trans)
    steps = np.arange(len(path))
    return float(_log(params.pi[path[0]]) + log_a[path[:-1], path[1:]].sum() + log_b[steps, path].sum())


def sample_mghmm(params, n_steps, seed):
    """Draw (states, observations) from the model."""
    rng = np.random.default_rng(seed)
    states = np.empty(n_steps, dtype=int)
    states[0] = rng.choice(params.n_states, p=params.pi)
    for t in range(1, n_steps):
        states[t] = rng.choice(params.n_states, p=params.trans[states[t - 1]])
    noise = rng.standard_normal((n_steps, params.n_obs))
    obs = params.means[states] + np.sqrt(params.covs[states]) * noise
    return states, obs
