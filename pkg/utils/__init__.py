# Shared helpers: errors, logging, seeds
