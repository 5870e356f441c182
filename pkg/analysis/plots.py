# analysis/plots.py - Equity curve chart

from pathlib import Path

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
from loguru import logger  # noqa: E402


def save_equity_svg(curve, path, title='Fusion strategy vs benchmark'):
    """
    Draw equity and benchmark as one line each and save as SVG.

    Args:
        curve: DataFrame indexed by date with 'equity' and 'benchmark' columns
        path: Output .svg path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # Fixed metadata keeps repeated runs byte-identical
    matplotlib.rcParams['svg.hashsalt'] = 'fusion'

    fig, ax = plt.subplots(figsize=(12, 5))
    ax.plot(curve.index, curve['equity'], color='blue', linewidth=1.2, label='Strategy')
    ax.plot(curve.index, curve['benchmark'], color='orange', linewidth=1.2, label='Benchmark')
    ax.set_title(title)
    ax.set_xlabel('Date')
    ax.set_ylabel('Equity')
    ax.grid(alpha=0.3)
    ax.legend()

    fig.tight_layout()
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    logger.info(f"Equity chart saved as '{path}'")
    return path
