"""
File I/O helpers for jobs, JSON payloads and trace tables
"""

import json
import logging
from pathlib import Path

import pandas as pd

from src.job_parser import JobFile, parse_job

logger = logging.getLogger(__name__)


def load_job(file_path):
    """
    Load and parse a job file

    Parameters:
    -----------
    file_path : str or Path
        Path to the .job file

    Returns:
    --------
    JobFile
        Parsed job
    """
    file_path = Path(file_path)

    if not file_path.exists():
        raise FileNotFoundError(f"Job file not found: {file_path}")

    try:
        job = parse_job(file_path.read_text(encoding="utf-8"))
        logger.info(f"Loaded job from {file_path}: {len(job.generators)} generators over {job.field.spec_text()}")
        return job
    except Exception as e:
        logger.error(f"Error loading job from {file_path}: {str(e)}")
        raise


def save_job(job: JobFile, file_path):
    """Write a job in canonical form."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(job.to_text(), encoding="utf-8")
    logger.info(f"Saved job to {file_path}")


def load_json(file_path):
    file_path = Path(file_path)

    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    try:
        with open(file_path, encoding="utf-8") as handle:
            return json.load(handle)
    except Exception as e:
        logger.error(f"Error loading JSON from {file_path}: {str(e)}")
        raise


def save_json(data, file_path):
    """
    Save a JSON payload

    Parameters:
    -----------
    data : dict
        Payload; fractions are already strings
    file_path : str or Path
        Destination
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    try:
        with open(file_path, "w", encoding="utf-8") as handle:
            json.dump(data, handle, indent=2)
            handle.write("\n")
        logger.info(f"Successfully saved JSON to {file_path}")
    except Exception as e:
        logger.error(f"Error saving JSON to {file_path}: {str(e)}")
        raise


def load_table(file_path, **kwargs):
    """
    Load a trace table from CSV, Excel or JSON

    Parameters:
    -----------
    file_path : str or Path
        Path to the table
    **kwargs : dict
        Passed to the pandas reader

    Returns:
    --------
    pd.DataFrame
        Loaded table
    """
    file_path = Path(file_path)

    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    try:
        suffix = file_path.suffix.lower()
        if suffix == ".csv":
            df = pd.read_csv(file_path, dtype=str, keep_default_na=False, **kwargs)
        elif suffix in [".xlsx", ".xls"]:
            df = pd.read_excel(file_path, dtype=str, **kwargs)
        elif suffix == ".json":
            df = pd.read_json(file_path, dtype=False, **kwargs)
        else:
            raise ValueError(f"Unsupported file format: {file_path.suffix}")

        logger.info(f"Loaded table from {file_path}, shape {df.shape}")
        return df

    except Exception as e:
        logger.error(f"Error loading table from {file_path}: {str(e)}")
        raise


def save_table(df, file_path, **kwargs):
    """
    Save a trace table; the format follows the suffix

    Parameters:
    -----------
    df : pd.DataFrame
        Table to save
    file_path : str or Path
        Destination (.csv, .xlsx or .json)
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    try:
        suffix = file_path.suffix.lower()
        if suffix == ".csv":
            df.to_csv(file_path, index=False, **kwargs)
        elif suffix in [".xlsx", ".xls"]:
            df.to_excel(file_path, index=False, engine="openpyxl", **kwargs)
        elif suffix == ".json":
            df.to_json(file_path, orient="records", indent=2, **kwargs)
        else:
            raise ValueError(f"Unsupported file format: {file_path.suffix}")

        logger.info(f"Successfully saved table to {file_path}")

    except Exception as e:
        logger.error(f"Error saving table to {file_path}: {str(e)}")
        raise
