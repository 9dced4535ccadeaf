"""Verification, SAT encoding and synthesis of minimal-depth sorting networks."""
