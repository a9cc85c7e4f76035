"""Oeljeklaus-Toma manifold data over number fields: construction, validation, certification."""
