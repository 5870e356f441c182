# backtest - Daily fusion strategy simulation, accounting and metrics
