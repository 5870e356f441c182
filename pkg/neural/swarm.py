# neural/swarm.py - Particle swarm optimizer with time-variant inertia and adaptive mutation

from dataclasses import asdict, dataclass, field

import numpy as np
from loguru import logger

import config
from neural.network import NetworkShape, batch_fitness, decode
from neural.samples import TrainingSet
from utils.errors import DimensionError, InsufficientDataError, ValidationError

PROGRESS_EVERY = 50


@dataclass(frozen=True)
class SwarmConfig:
    c1: float = config.PSO_PARAMS['c1']
    c2: float = config.PSO_PARAMS['c2']
    w_max: float = config.PSO_PARAMS['w_max']
    w_min: float = config.PSO_PARAMS['w_min']
    i_max: int = config.PSO_PARAMS['i_max']
    ps: int = config.PSO_PARAMS['ps']
    p_max: float = config.PSO_PARAMS['p_max']
    p_min: float = config.PSO_PARAMS['p_min']
    v_max: float = config.PSO_PARAMS['v_max']
    v_min: float = config.PSO_PARAMS['v_min']
    amp: float = config.PSO_PARAMS['amp']
    inertia_mode: str = config.PSO_PARAMS['inertia_mode']
    patience: int = config.PSO_PARAMS['patience']
    min_improvement: float = config.PSO_PARAMS['min_improvement']
    seed: int = 0

    def __post_init__(self):
        problems = []
        if self.w_max < self.w_min:
            problems.append("w_max < w_min")
        if self.p_max <= self.p_min or self.v_max <= self.v_min:
            problems.append("position/velocity bounds out of order")
        if self.ps < 2:
            problems.append("ps < 2")
        if self.i_max < 1 or self.patience < 1:
            problems.append("i_max and patience must be >= 1")
        if not 0.0 <= self.amp <= 1.0:
            problems.append("amp outside [0, 1]")
        if self.inertia_mode not in config.INERTIA_MODES:
            problems.append(f"unknown inertia_mode '{self.inertia_mode}'")
        if problems:
            raise ValidationError("invalid swarm config: " + "; ".join(problems))

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def to_dict(self):
        return asdict(self)


def inertia(iteration, cfg):
    """
    Inertia weight for a 1-based iteration.

    'linear-decay' moves from w_max to w_min over i_max iterations;
    'reciprocal' is w_max - (w_max - w_min) / iteration, which grows
    from w_min toward w_max.
    """
    if not 1 <= iteration <= cfg.i_max:
        raise ValidationError(f"iteration {iteration} outside [1, {cfg.i_max}]")
    spread = cfg.w_max - cfg.w_min
    if cfg.inertia_mode == 'reciprocal':
        return cfg.w_max - spread / iteration
    return cfg.w_max - spread * iteration / cfg.i_max


@dataclass(frozen=True, eq=False)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float


def mutate(positions, cfg, rng):
    """With probability amp per particle, reset one uniformly chosen coordinate inside the position bounds."""
    count, dim = positions.shape
    hit = rng.random(count) < cfg.amp
    coords = rng.integers(dim, size=count)
    fresh = rng.uniform(cfg.p_min, cfg.p_max, size=count)
    rows = np.flatnonzero(hit)
    positions[rows, coords[rows]] = fresh[rows]
    return positions


class Swarm:
    """Population state; all particles are updated together as arrays."""

    def __init__(self, objective, dim, cfg, rng):
        self.objective = objective
        self.cfg = cfg
        self.rng = rng
        self.positions = rng.uniform(cfg.p_min, cfg.p_max, size=(cfg.ps, dim))
        self.velocities = rng.uniform(cfg.v_min, cfg.v_max, size=(cfg.ps, dim))
        self.fitness = np.asarray(objective(self.positions), dtype=float)
        self.best_positions = self.positions.copy()
        self.best_fitness = self.fitness.copy()
        leader = int(np.argmin(self.best_fitness))
        self.gbest = self.best_positions[leader].copy()
        self.gbest_fitness = float(self.best_fitness[leader])

    @property
    def particles(self):
        return [
            Particle(self.positions[i], self.velocities[i], self.best_positions[i], float(self.best_fitness[i]))
            for i in range(self.cfg.ps)
        ]

    def step(self, iteration):
        cfg = self.cfg
        r1 = self.rng.random((cfg.ps, 1))
        r2 = self.rng.random((cfg.ps, 1))
        self.velocities = (inertia(iteration, cfg) * self.velocities
                           + r1 * cfg.c1 * (self.best_positions - self.positions)
                           + r2 * cfg.c2 * (self.gbest - self.positions))
        np.clip(self.velocities, cfg.v_min, cfg.v_max, out=self.velocities)
        self.positions = np.clip(self.positions + self.velocities, cfg.p_min, cfg.p_max)
        mutate(self.positions, cfg, self.rng)

        self.fitness = np.asarray(self.objective(self.positions), dtype=float)
        improved = self.fitness < self.best_fitness
        self.best_positions[improved] = self.positions[improved]
        self.best_fitness[improved] = self.fitness[improved]

        leader = int(np.argmin(self.best_fitness))
        if self.best_fitness[leader] < self.gbest_fitness:
            self.gbest = self.best_positions[leader].copy()
            self.gbest_fitness = float(self.best_fitness[leader])
        return self.gbest_fitness


@dataclass(frozen=True, eq=False)
class SwarmResult:
    position: np.ndarray
    fitness: float
    trace: np.ndarray = field(repr=False)
    iterations: int = 0
    stopped_early: bool = False


def pso_minimize(objective, dim, cfg, seed=None):
    """
    Minimize a batch objective (P, dim) -> (P,) with the particle swarm.

    Stops after i_max iterations, or once gbest has improved by less than
    min_improvement for `patience` consecutive iterations.
    """
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    swarm = Swarm(objective, dim, cfg, rng)
    trace = []
    stale = 0
    stopped_early = False
    for iteration in range(1, cfg.i_max + 1):
        previous = swarm.gbest_fitness
        current = swarm.step(iteration)
        trace.append(current)
        stale = stale + 1 if previous - current < cfg.min_improvement else 0
        if iteration % PROGRESS_EVERY == 0:
            logger.debug(f"PSO iteration {iteration}: gbest {current:.6g}")
        if stale >= cfg.patience and iteration < cfg.i_max:
            stopped_early = True
            logger.debug(f"PSO stopped at iteration {iteration} after {stale} stagnant iterations")
            break
    return SwarmResult(
        position=swarm.gbest.copy(),
        fitness=swarm.gbest_fitness,
        trace=np.asarray(trace),
        iterations=len(trace),
        stopped_early=stopped_early,
    )


def pso_train(samples, shape=None, cfg=None, seed=None):
    """
    Fit network weights to the samples by minimizing RMSE with the swarm.

    Returns:
        (NetworkParams, per-iteration gbest fitness trace)
    """
    shape = shape or NetworkShape()
    cfg = cfg or SwarmConfig()
    if not isinstance(samples, TrainingSet):
        samples = TrainingSet.from_samples(samples)
    if len(samples) == 0:
        raise InsufficientDataError("pso_train needs at least one training sample")
    if samples.width != shape.k:
        raise DimensionError(f"sample width {samples.width} != k={shape.k}")
    inputs, targets = samples.inputs, samples.targets

    def objective(positions):
        return batch_fitness(positions, inputs, targets, shape)

    result = pso_minimize(objective, shape.n_params, cfg, seed)
    logger.debug(f"Trained {shape.k}->{shape.n}->1 network on {len(samples)} samples: "
                 f"RMSE {result.fitness:.6g} after {result.iterations} iterations")
    return decode(result.position, shape), result.trace
