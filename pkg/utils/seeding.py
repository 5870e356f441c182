# utils/seeding.py - Per-component seeds derived from the global run seed

import config


def derive_seed(global_seed, component):
    """Fixed offset per component so changing one leaves the others' streams alone."""
    try:
        offset = config.SEED_OFFSETS[component]
    except KeyError:
        raise KeyError(f"Unknown seed component '{component}'") from None
    return (int(global_seed) + offset) % (2 ** 63)
