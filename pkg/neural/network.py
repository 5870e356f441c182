# neural/network.py - k -> n -> 1 feedforward network with a single output activation

from dataclasses import dataclass

import numpy as np

import config
from neural.samples import TrainingSet
from utils.errors import DimensionError, InsufficientDataError, ValidationError

OUTPUT_SCALE = 0.1


@dataclass(frozen=True)
class NetworkShape:
    k: int = config.NETWORK_SHAPE['k']
    n: int = config.NETWORK_SHAPE['n']
    a: float = config.NETWORK_SHAPE['a']

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValidationError(f"network needs k >= 1 and n >= 1, got k={self.k} n={self.n}")
        if not self.a > 0:
            raise ValidationError(f"activation coefficient must be > 0, got {self.a}")

    @property
    def n_params(self):
        """n*k hidden weights, n hidden biases, n output weights, one output bias."""
        return self.n * self.k + 2 * self.n + 1


@dataclass(frozen=True, eq=False)
class NetworkParams:
    w: np.ndarray   # (n, k)
    h: np.ndarray   # (n,)
    q: np.ndarray   # (n,)
    o1: float

    def __post_init__(self):
        n, k = np.shape(self.w)
        if np.shape(self.h) != (n,) or np.shape(self.q) != (n,):
            raise DimensionError("hidden bias/output weight length must equal hidden node count")
        if not all(np.isfinite(x).all() for x in (self.w, self.h, self.q, self.o1)):
            raise ValidationError("network parameters must be finite")

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros((shape.n, shape.k)), np.zeros(shape.n), np.zeros(shape.n), 0.0)

    def equals(self, other):
        return (np.array_equal(self.w, other.w) and np.array_equal(self.h, other.h)
                and np.array_equal(self.q, other.q) and self.o1 == other.o1)


def activation(x, a):
    """0.1 * (e^ax - 1) / (e^ax + 1), written as a tanh so large |ax| saturates at +/-0.1."""
    return OUTPUT_SCALE * np.tanh(0.5 * a * np.asarray(x, dtype=float))


def _check_input(shape, inputs):
    inputs = np.asarray(inputs, dtype=float)
    if inputs.shape[-1] != shape.k:
        raise DimensionError(f"input width {inputs.shape[-1]} != k={shape.k}")
    return inputs


def hidden_values(net, inputs):
    """Linear hidden layer: W I + H (no activation)."""
    return inputs @ net.w.T + net.h


def pre_activation(net, shape, inputs):
    inputs = _check_input(shape, inputs)
    return hidden_values(net, inputs) @ net.q + net.o1


def forward(net, shape, inputs):
    """
    Network output A(sum_i q_i (sum_j w_ij I_j + H_i) + O_1).

    Args:
        net: NetworkParams
        shape: NetworkShape
        inputs: One row of length k, or a (d, k) batch

    Returns:
        float for a single row, (d,) array for a batch
    """
    out = activation(pre_activation(net, shape, inputs), shape.a)
    return float(out) if np.ndim(out) == 0 else out


def forward_gradient(net, shape, inputs):
    """Derivative of forward() with respect to every parameter, in encode() order."""
    inputs = _check_input(shape, inputs)
    z = pre_activation(net, shape, inputs)
    t = np.tanh(0.5 * shape.a * z)
    d_out = OUTPUT_SCALE * 0.5 * shape.a * (1.0 - t * t)
    grad_w = np.outer(net.q, inputs)
    grad_h = net.q
    grad_q = hidden_values(net, inputs)
    return d_out * np.concatenate([grad_w.ravel(), grad_h, grad_q, [1.0]])


def encode(net):
    """Flat position vector: w row-major, then h, then q, then o1."""
    return np.concatenate([np.ravel(net.w), net.h, net.q, [net.o1]]).astype(float)


def decode(position, shape):
    position = np.asarray(position, dtype=float)
    if position.shape != (shape.n_params,):
        raise DimensionError(f"position length {position.size} != {shape.n_params} for {shape}")
    nk = shape.n * shape.k
    n = shape.n
    return NetworkParams(
        w=position[:nk].reshape(n, shape.k).copy(),
        h=position[nk:nk + n].copy(),
        q=position[nk + n:nk + 2 * n].copy(),
        o1=float(position[-1]),
    )


def batch_fitness(positions, inputs, targets, shape):
    """RMSE of every particle position over the same samples; positions is (P, M)."""
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    if positions.shape[1] != shape.n_params:
        raise DimensionError(f"position length {positions.shape[1]} != {shape.n_params}")
    n, k = shape.n, shape.k
    nk = n * k
    w = positions[:, :nk].reshape(-1, n, k)
    h = positions[:, nk:nk + n]
    q = positions[:, nk + n:nk + 2 * n]
    o1 = positions[:, -1]
    hidden = np.einsum('pnk,dk->pdn', w, inputs) + h[:, None, :]
    z = np.einsum('pdn,pn->pd', hidden, q) + o1[:, None]
    errors = activation(z, shape.a) - targets[None, :]
    return np.sqrt(np.mean(errors ** 2, axis=1))


def fitness(position, samples, shape):
    """Root mean square error of the decoded network over the training samples."""
    if not isinstance(samples, TrainingSet):
        samples = TrainingSet.from_samples(samples)
    if len(samples) == 0:
        raise InsufficientDataError("fitness needs at least one training sample")
    inputs = _check_input(shape, samples.inputs)
    return float(batch_fitness(position, inputs, samples.targets, shape)[0])


def network_to_dict(net, shape):
    return {'k': shape.k, 'n': shape.n, 'a': shape.a, 'params': encode(net).tolist()}


def network_from_dict(data):
    shape = NetworkShape(k=int(data['k']), n=int(data['n']), a=float(data['a']))
    return decode(np.asarray(data['params'], dtype=float), shape), shape
