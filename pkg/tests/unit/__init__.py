"""Unit tests for shadowmancer, one package per layer."""
