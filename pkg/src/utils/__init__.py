"""
Utility functions for the resolution toolkit
"""

from .data_utils import load_job, load_json, load_table, save_job, save_json, save_table

__all__ = [
    'load_job',
    'load_json',
    'load_table',
    'save_job',
    'save_json',
    'save_table',
]
