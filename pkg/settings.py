# settings.py - Run configuration: defaults from config.py, a JSON document on top, CLI overrides last

import copy
from dataclasses import dataclass
from pathlib import Path

import jsonschema

import config
from backtest.params import TradeParams
from dataio.synthetic import SyntheticSpec
from neural.network import NetworkShape
from neural.swarm import SwarmConfig
from utils.errors import ConfigError, DataError
from utils.jsonio import read_json
from utils.seeding import derive_seed


def default_document():
    return {
        'name': 'fusion',
        'seed': config.DEFAULT_SEED,
        'output_dir': config.DEFAULT_OUTPUT_DIR,
        'data': {'index': None, 'stocks': None, 'factors': None},
        'synthetic': {key: value for key, value in config.SYNTHETIC_SPEC.items() if key != 'seed'},
        'factors': dict(config.FACTOR_OPTIONS),
        'swarm': dict(config.PSO_PARAMS),
        'network': dict(config.NETWORK_SHAPE),
        'regime': dict(config.REGIME_OPTIONS),
        'trade': dict(config.TRADE_PARAMS),
        'search': copy.deepcopy(config.SEARCH_OPTIONS),
    }


def deep_merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


@dataclass(frozen=True)
class RunConfig:
    name: str
    seed: int
    output_dir: Path
    data: dict
    synthetic: SyntheticSpec
    factors: dict
    swarm: SwarmConfig
    network: NetworkShape
    regime: dict
    trade: TradeParams
    search: dict

    @property
    def uses_files(self):
        return any(self.data.values())


def load_run_config(path=None, seed=None, out=None):
    """
    Build a RunConfig.

    Args:
        path: Optional JSON config document
        seed: Optional global seed override
        out: Optional output directory override

    Raises:
        ConfigError for unreadable, schema-invalid or inconsistent documents
    """
    document = {}
    if path is not None:
        try:
            document = read_json(path)
        except DataError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        try:
            jsonschema.validate(document, config.CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = '/'.join(str(p) for p in exc.absolute_path) or '<root>'
            raise ConfigError(f"{path}: {where}: {exc.message}") from None

    merged = deep_merge(default_document(), document)
    if seed is not None:
        merged['seed'] = int(seed)
    if out is not None:
        merged['output_dir'] = str(out)
    return build_run_config(merged)


def build_run_config(merged):
    data = merged['data']
    given = [key for key in ('index', 'stocks', 'factors') if data.get(key)]
    if given and len(given) < 3:
        raise ConfigError(f"data paths must name index, stocks and factors together (got {given})")
    if not given and merged.get('synthetic') is None:
        raise ConfigError("config needs either data paths or a synthetic spec")

    synthetic = None
    try:
        if merged.get('synthetic') is not None:
            spec = dict(merged['synthetic'])
            spec.setdefault('seed', derive_seed(merged['seed'], 'synth'))
            synthetic = SyntheticSpec.from_dict(spec)
        network = NetworkShape(**merged['network'])
        run = RunConfig(
            name=merged['name'],
            seed=int(merged['seed']),
            output_dir=Path(merged['output_dir']),
            data=dict(data),
            synthetic=synthetic,
            factors=dict(merged['factors']),
            swarm=SwarmConfig.from_dict({**merged['swarm'], 'seed': derive_seed(merged['seed'], 'picker')}),
            network=network,
            regime=dict(merged['regime']),
            trade=TradeParams.from_dict(merged['trade']),
            search=dict(merged['search']),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    if run.network.k > run.factors['k_select']:
        raise ConfigError(f"network.k={run.network.k} exceeds factors.k_select={run.factors['k_select']}")
    return run
