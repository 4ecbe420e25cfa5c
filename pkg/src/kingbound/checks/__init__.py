"""Pluggable verification checks for kingbound campaigns."""
