"""Measurement apparatus: recovery checks, recurrence, occupation time and concentration."""
