"""
Excel Exporter for Resolution Traces

Writes the trace, unit and ledger tables of a driver run to a formatted
workbook: styled headers, nearness colour coding and flagged ledger rows.
"""

import logging
from typing import Dict

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter
from openpyxl.utils.dataframe import dataframe_to_rows

from config.config import EXCEL_CONFIG

logger = logging.getLogger(__name__)


class TraceExcelExporter:
    """Creates Excel workbooks from resolution trace tables."""

    def __init__(self):
        self.setup_styles()

    def setup_styles(self):
        """Set up consistent styling for the workbook."""
        self.colors = dict(EXCEL_CONFIG)
        self.colors.setdefault("border", "000000")

        self.header_font = Font(name='Calibri', size=12, bold=True, color='FFFFFF')
        self.data_font = Font(name='Calibri', size=10)
        self.alert_font = Font(name='Calibri', size=10, bold=True, color='FFFFFF')

        def solid(color):
            return PatternFill(start_color=color, end_color=color, fill_type='solid')

        self.header_fill = solid(self.colors['header'])
        self.nearness_fills = {
            'very-near': solid(self.colors['very_near']),
            'near': solid(self.colors['near']),
            'not-near': solid(self.colors['not_near']),
        }
        self.violation_fill = solid(self.colors['violation'])

        side = Side(style='thin', color=self.colors['border'])
        self.thin_border = Border(left=side, right=side, top=side, bottom=side)
        self.center_alignment = Alignment(horizontal='center', vertical='center')
        self.left_alignment = Alignment(horizontal='left', vertical='center')

    def create_trace_report(self, tables: Dict[str, pd.DataFrame], output_path: str):
        """
        Create the workbook, one sheet per table.

        Args:
            tables (Dict[str, pd.DataFrame]): sheet name -> table (Trace, Units, Ledger)
            output_path (str): Path to save the Excel file
        """
        logger.info("Creating trace workbook...")
        wb = Workbook()
        wb.remove(wb.active)
        for name, df in tables.items():
            ws = wb.create_sheet(name)
            for row in dataframe_to_rows(df, index=False, header=True):
                ws.append(row)
            self._format_sheet(ws)
            self._color_nearness(ws)
            if name == "Ledger":
                self._flag_ledger(ws)
        wb.save(output_path)
        logger.info(f"Trace workbook saved to {output_path}")

    @staticmethod
    def _column(ws, header: str):
        for idx, cell in enumerate(ws[1], 1):
            if cell.value == header:
                return idx
        return None

    def _format_sheet(self, ws):
        for cell in ws[1]:
            cell.font = self.header_font
            cell.fill = self.header_fill
            cell.alignment = self.center_alignment
        for row in ws.iter_rows(min_row=1, max_row=ws.max_row, min_col=1, max_col=ws.max_column):
            for cell in row:
                cell.border = self.thin_border
                if cell.row > 1:
                    cell.font = self.data_font
                    cell.alignment = self.left_alignment
        ws.freeze_panes = "A2"
        self._auto_adjust_columns(ws)

    def _color_nearness(self, ws):
        col = self._column(ws, "nearness")
        if col is None:
            return
        for row in range(2, ws.max_row + 1):
            cell = ws.cell(row=row, column=col)
            fill = self.nearness_fills.get(str(cell.value))
            if fill is not None:
                cell.fill = fill

    def _flag_ledger(self, ws):
        """Highlight rows where quantization or the isolation check failed."""
        checks = [self._column(ws, name) for name in ("quantized", "isolation_consistent")]
        for row in range(2, ws.max_row + 1):
            failed = any(col is not None and ws.cell(row=row, column=col).value is False for col in checks)
            if failed:
                for cell in ws[row]:
                    cell.fill = self.violation_fill
                    cell.font = self.alert_font

    @staticmethod
    def _auto_adjust_columns(ws):
        for column in ws.columns:
            width = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
            ws.column_dimensions[get_column_letter(column[0].column)].width = min(width + 2, 60)
