"""Skew-aware imputation, PSO feature selection and ADTree risk modelling."""

__version__ = "0.1.0"
