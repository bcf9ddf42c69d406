"""Command-line entry point, flat config parsing and artifact emitters."""
