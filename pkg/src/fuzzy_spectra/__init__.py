"""Spectral toolkit for the O(2)-covariant fuzzy circle and O(3)-covariant fuzzy sphere."""
