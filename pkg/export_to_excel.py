#!/usr/bin/env python3
"""
Standalone Excel Export Script for Resolution Traces

Converts a saved JSON payload (main_resolver.py ... --output run.json) or a
trace table in CSV into a formatted workbook.

Usage:
    python export_to_excel.py --input output/run.json --output output/run.xlsx
    python export_to_excel.py --input output/trace.csv --output output/trace.xlsx
"""

import argparse
import logging
import sys
from pathlib import Path

from src.report_generator import ReportGenerator
from src.trace_excel_exporter import TraceExcelExporter
from src.utils.data_utils import load_json, load_table


def setup_logging():
    """Set up logging configuration."""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s'
    )


def export_from_json(input_json: str, output_excel: str):
    """
    Export the trace, unit and ledger tables of a saved payload.

    Args:
        input_json (str): Path to a JSON payload written by main_resolver.py
        output_excel (str): Path to output Excel file
    """
    logger = logging.getLogger(__name__)
    logger.info(f"Loading payload from {input_json}")
    tables = ReportGenerator(load_json(input_json)).tables()
    TraceExcelExporter().create_trace_report(tables, output_excel)
    print(f"[SUCCESS] Excel report successfully created: {output_excel}")
    print(f"   Trace states: {len(tables['Trace'])}, units: {len(tables['Units'])}")


def export_from_csv(input_csv: str, output_excel: str):
    """
    Export a trace table saved as CSV.

    Args:
        input_csv (str): Path to a trace table
        output_excel (str): Path to output Excel file
    """
    logger = logging.getLogger(__name__)
    logger.info(f"Loading trace table from {input_csv}")
    TraceExcelExporter().create_trace_report({"Trace": load_table(input_csv)}, output_excel)
    print(f"[SUCCESS] Excel report successfully created: {output_excel}")


def main():
    """Main function for Excel export."""
    parser = argparse.ArgumentParser(
        description="Export resolution traces to a formatted Excel workbook",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # From a saved JSON payload
    python export_to_excel.py --input output/run.json --output output/run.xlsx

    # From a trace table
    python export_to_excel.py --input output/trace.csv --output output/trace.xlsx
        """
    )
    parser.add_argument('--input', required=True, help='Saved JSON payload or CSV trace table')
    parser.add_argument('--output', required=True, help='Output Excel file path')
    args = parser.parse_args()

    setup_logging()
    logger = logging.getLogger(__name__)

    try:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        if Path(args.input).suffix.lower() == ".json":
            export_from_json(args.input, args.output)
        else:
            export_from_csv(args.input, args.output)
    except Exception as e:
        logger.error(f"Error exporting to Excel: {str(e)}")
        print(f"[ERROR] {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
