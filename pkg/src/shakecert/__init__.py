"""Certified bounds for shake genus and related concordance invariants."""
