# config.py - Default parameters for the fusion picking/timing toolkit

# Particle swarm settings (acceleration, inertia, bounds, mutation)
PSO_PARAMS = {
    'c1': 1.5,              # Acceleration coefficient one
    'c2': 1.5,              # Acceleration coefficient two
    'w_max': 0.9,           # Initial inertia weight
    'w_min': 0.4,           # Ultimate inertia weight
    'i_max': 300,           # Maximum iterations
    'ps': 100,              # Population size
    'p_max': 3.0,
    'p_min': -3.0,
    'v_max': 0.1,
    'v_min': -0.1,
    'amp': 0.2,             # Adaptive mutation probability
    'inertia_mode': 'linear-decay',   # or 'reciprocal'
    'patience': 50,         # Iterations without gbest gain before stopping
    'min_improvement': 1e-10,
}

INERTIA_MODES = ('linear-decay', 'reciprocal')

# k -> n -> 1 network
NETWORK_SHAPE = {
    'k': 4,     # Input nodes (PCA output dimension)
    'n': 5,     # Hidden nodes
    'a': 0.1,   # Activation steepness
}

FACTOR_OPTIONS = {
    'k_select': 6,          # Factors kept after IC ranking
    'n_sigma': 3.0,         # Winsorization width
    'ic_target': 'stock',   # 'stock' (per-stock next-day return) or 'index'
}

REGIME_OPTIONS = {
    'n_states': 5,
    'restarts': 5,
    'tol': 1e-6,
    'max_iter': 500,
    'cov_floor': 1e-6,
    'self_transition': 0.9,
}

TRADE_PARAMS = {
    'initial_capital': 10_000_000.0,
    'buy_cost': 0.0003,
    'sell_cost': 0.0013,
    'slippage': 0.02,           # Absolute price units per share
    'buy_fraction': 0.30,       # Of residual cash, per buy order
    'sell_fraction': 1.0,       # Of the position
    'n_pick': 3,
    'picking_cycle': 7,         # Trading days
    'timing_cycle': 1,          # Trading days
    'training_cycle': 1,        # Months
    'picker_train_window': 7,   # Trading days
    'regime_train_window': 40,  # Months
    'risk_free_rate': 0.03,     # Annual
    'periods_per_year': 252,
    'fractional_shares': False,
}

# Two-regime market used when no data files are given
SYNTHETIC_SPEC = {
    'seed': 20240101,
    'regimes': [
        {'drift': 0.002, 'volatility': 0.008, 'duration': 60},
        {'drift': -0.002, 'volatility': 0.02, 'duration': 40},
    ],
    'n_stocks': 30,
    'n_days': 1200,
    'n_factors': 52,
    'n_signal': 3,
    'signal_strength': 1.0,
    'idio_volatility': 0.015,
    'n_industries': 5,
    'null_rate': 0.001,
    'start_date': '2016-01-04',
}

HYPERPARAMETER_GRIDS = {
    'n': [3, 4, 5, 6, 7],
    'k': [2, 3, 4, 5],
    'a': [0.05, 0.1, 0.2, 0.5],
    'k_select': [4, 5, 6, 7, 8],
}

SEARCH_OPTIONS = {
    'train_days': 7,
    'test_days': 7,
    'grids': HYPERPARAMETER_GRIDS,
}

# Offsets added to the global seed, one per component
SEED_OFFSETS = {
    'synth': 0,
    'picker': 1_000,
    'regime': 2_000,
    'search': 3_000,
    'backtest': 4_000,
}

DEFAULT_SEED = 7
DEFAULT_OUTPUT_DIR = 'out'

_number = {'type': 'number'}
_int = {'type': 'integer'}

CONFIG_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'additionalProperties': False,
    'properties': {
        'name': {'type': 'string', 'minLength': 1},
        'seed': {'type': 'integer', 'minimum': 0},
        'output_dir': {'type': 'string'},
        'data': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'index': {'type': ['string', 'null']},
                'stocks': {'type': ['string', 'null']},
                'factors': {'type': ['string', 'null']},
            },
        },
        'synthetic': {
            'type': ['object', 'null'],
            'properties': {
                'seed': _int,
                'regimes': {
                    'type': 'array',
                    'minItems': 1,
                    'items': {
                        'type': 'object',
                        'required': ['drift', 'volatility', 'duration'],
                        'properties': {
                            'drift': _number,
                            'volatility': {'type': 'number', 'minimum': 0},
                            'duration': {'type': 'number', 'minimum': 1},
                            'volume_level': _number,
                            'fsb_drift': _number,
                        },
                    },
                },
                'n_stocks': {'type': 'integer', 'minimum': 1},
                'n_days': {'type': 'integer', 'minimum': 1},
                'n_factors': {'type': 'integer', 'minimum': 1},
                'n_signal': {'type': 'integer', 'minimum': 0},
                'signal_strength': _number,
                'idio_volatility': {'type': 'number', 'minimum': 0},
                'n_industries': {'type': 'integer', 'minimum': 1},
                'null_rate': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'start_date': {'type': 'string'},
            },
        },
        'factors': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'k_select': {'type': 'integer', 'minimum': 1},
                'n_sigma': {'type': 'number', 'exclusiveMinimum': 0},
                'ic_target': {'enum': ['stock', 'index']},
            },
        },
        'swarm': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'c1': _number, 'c2': _number,
                'w_max': _number, 'w_min': _number,
                'i_max': {'type': 'integer', 'minimum': 1},
                'ps': {'type': 'integer', 'minimum': 2},
                'p_max': _number, 'p_min': _number,
                'v_max': _number, 'v_min': _number,
                'amp': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'inertia_mode': {'enum': list(INERTIA_MODES)},
                'patience': {'type': 'integer', 'minimum': 1},
                'min_improvement': {'type': 'number', 'minimum': 0},
            },
        },
        'network': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'k': {'type': 'integer', 'minimum': 1},
                'n': {'type': 'integer', 'minimum': 1},
                'a': {'type': 'number', 'exclusiveMinimum': 0},
            },
        },
        'regime': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'n_states': {'type': 'integer', 'minimum': 1},
                'restarts': {'type': 'integer', 'minimum': 1},
                'tol': {'type': 'number', 'minimum': 0},
                'max_iter': {'type': 'integer', 'minimum': 1},
                'cov_floor': {'type': 'number', 'exclusiveMinimum': 0},
                'self_transition': {'type': 'number', 'minimum': 0, 'maximum': 1},
            },
        },
        'trade': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'initial_capital': {'type': 'number', 'exclusiveMinimum': 0},
                'buy_cost': {'type': 'number', 'minimum': 0, 'exclusiveMaximum': 1},
                'sell_cost': {'type': 'number', 'minimum': 0, 'exclusiveMaximum': 1},
                'slippage': {'type': 'number', 'minimum': 0},
                'buy_fraction': {'type': 'number', 'exclusiveMinimum': 0, 'maximum': 1},
                'sell_fraction': {'type': 'number', 'exclusiveMinimum': 0, 'maximum': 1},
                'n_pick': {'type': 'integer', 'minimum': 1},
                'picking_cycle': {'type': 'integer', 'minimum': 1},
                'timing_cycle': {'type': 'integer', 'minimum': 1},
                'training_cycle': {'type': 'integer', 'minimum': 1},
                'picker_train_window': {'type': 'integer', 'minimum': 1},
                'regime_train_window': {'type': 'integer', 'minimum': 1},
                'risk_free_rate': _number,
                'periods_per_year': {'type': 'integer', 'minimum': 1},
                'fractional_shares': {'type': 'boolean'},
            },
        },
        'search': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'train_days': {'type': 'integer', 'minimum': 1},
                'test_days': {'type': 'integer', 'minimum': 1},
                'grids': {
                    'type': 'object',
                    'additionalProperties': False,
                    'properties': {
                        key: {'type': 'array', 'minItems': 1, 'items': _number}
                        for key in ('n', 'k', 'a', 'k_select')
                    },
                },
            },
        },
    },
}
