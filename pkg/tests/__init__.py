"""Tests for polar-containment."""
