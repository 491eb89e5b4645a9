"""Fast matrix multiplication: exact schemes, error bounds, orbit search, SLPs, execution."""
