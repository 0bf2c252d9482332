"""Training-time, test-time and capacity metrics."""
