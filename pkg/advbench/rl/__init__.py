"""Deep deterministic policy gradient from scratch."""
