"""
Excel Exporter for the Vatican Designs Toolkit
Writes designs with their balance reports, sweep rows and table checks to .xlsx
"""

import sys
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

try:
    from openpyxl import Workbook
    from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
    from openpyxl.utils import get_column_letter
except ImportError:
    print("Warning: openpyxl not installed. Run: pip3 install openpyxl", file=sys.stderr)
    raise

from designs import BalanceReport, Design


class ExcelExporter:
    """Collects sheets and saves them as one workbook"""

    def __init__(self, title: str = "Vatican Designs"):
        self.title = title
        self.wb = Workbook()
        self.sheets_added = 0

        if 'Sheet' in self.wb.sheetnames:
            self.wb.remove(self.wb['Sheet'])

        # Styling
        self.header_fill = PatternFill(start_color="1F4E78", end_color="1F4E78", fill_type="solid")
        self.header_font = Font(color="FFFFFF", bold=True, size=11)
        self.subheader_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
        self.subheader_font = Font(color="FFFFFF", bold=True, size=10)
        self.highlight_fill = PatternFill(start_color="FFF2CC", end_color="FFF2CC", fill_type="solid")
        self.fail_fill = PatternFill(start_color="FFC7CE", end_color="FFC7CE", fill_type="solid")
        self.pass_fill = PatternFill(start_color="C6EFCE", end_color="C6EFCE", fill_type="solid")
        self.border = Border(
            left=Side(style='thin'),
            right=Side(style='thin'),
            top=Side(style='thin'),
            bottom=Side(style='thin')
        )

    def export(self, output_path: str) -> str:
        """
        Save the workbook

        Args:
            output_path: Path to save Excel file

        Returns:
            Path to created file
        """
        print("\n📊 Generating Excel export...", file=sys.stderr)
        if not self.sheets_added:
            self._title_block(self.wb.create_sheet("Summary"), self.title, "Nothing to export")
        self.wb.save(output_path)
        print(f"✓ Excel file created: {output_path}", file=sys.stderr)
        return output_path

    def _title_block(self, ws, title: str, subtitle: str = ""):
        ws['A1'] = title
        ws['A1'].font = Font(size=14, bold=True, color="1F4E78")
        ws['A2'] = subtitle or f"Generated {datetime.now().strftime('%Y-%m-%d %H:%M')}"
        ws['A2'].font = Font(italic=True, size=9, color="666666")

    def _header_row(self, ws, row: int, headers: Sequence[str]):
        for col, header in enumerate(headers, start=1):
            cell = ws.cell(row=row, column=col, value=header)
            cell.font = self.header_font
            cell.fill = self.header_fill
            cell.alignment = Alignment(horizontal='center', vertical='center')
            cell.border = self.border

    def _new_sheet(self, name: str):
        # Sheet titles are capped at 31 characters and must be unique
        base = name[:28]
        title = base
        n = 2
        while title in self.wb.sheetnames:
            title = f"{base} {n}"
            n += 1
        self.sheets_added += 1
        return self.wb.create_sheet(title)

    def add_design(self, design: Design, report: Optional[BalanceReport] = None,
                   name: str = "Design", description: Sequence[str] = ()):
        """One subject per row, one period per column, then the balance report beside it"""
        ws = self._new_sheet(name)
        self._title_block(ws, f"{name}: {design.n} x {design.p} design, t = {design.t}")

        row = 4
        for line in description:
            ws.cell(row=row, column=1, value=line).font = Font(italic=True, color="666666")
            row += 1
        if description:
            row += 1

        self._header_row(ws, row, ["Subject"] + [f"P{j + 1}" for j in range(design.p)])
        row += 1
        for i, subject in enumerate(design.rows.tolist(), start=1):
            ws.cell(row=row, column=1, value=i).border = self.border
            for j, value in enumerate(subject, start=2):
                cell = ws.cell(row=row, column=j, value=value)
                cell.border = self.border
                cell.alignment = Alignment(horizontal='center')
            row += 1

        if report is not None:
            self._balance_block(ws, report, column=design.p + 3)

        ws.column_dimensions['A'].width = 10
        for j in range(2, design.p + 2):
            ws.column_dimensions[get_column_letter(j)].width = 5

    def _balance_block(self, ws, report: BalanceReport, column: int):
        label_col = get_column_letter(column)
        value_col = get_column_letter(column + 1)

        ws[f'{label_col}4'] = "CARRY-OVER BALANCE"
        ws[f'{label_col}4'].font = self.subheader_font
        ws[f'{label_col}4'].fill = self.subheader_fill
        ws.merge_cells(f'{label_col}4:{value_col}4')

        facts = [
            ("Subjects (n)", report.n),
            ("Treatments (t)", report.t),
            ("Threshold n/t", report.threshold),
            ("Max k", report.max_k),
            ("Roman", "yes" if report.roman else "no"),
            ("Vatican", "yes" if report.vatican else "no"),
            ("Balanced at distance 1", "yes" if report.balanced else "no"),
        ]
        row = 5
        for label, value in facts:
            ws[f'{label_col}{row}'] = label
            ws[f'{label_col}{row}'].font = Font(bold=True)
            ws[f'{value_col}{row}'] = value
            row += 1
        ws[f'{value_col}{row - 2}'].fill = self.pass_fill if report.vatican else self.highlight_fill

        row += 1
        self._header_row_at(ws, row, column, ["Distance i", "M_i"])
        row += 1
        for i, m in enumerate(report.maxima, start=1):
            ws.cell(row=row, column=column, value=i).border = self.border
            cell = ws.cell(row=row, column=column + 1, value=m)
            cell.border = self.border
            if m > report.threshold:
                cell.fill = self.fail_fill
                cell.font = Font(color="C00000", bold=True)
            row += 1

        ws.column_dimensions[label_col].width = 24
        ws.column_dimensions[value_col].width = 10

    def _header_row_at(self, ws, row: int, column: int, headers: Sequence[str]):
        for offset, header in enumerate(headers):
            cell = ws.cell(row=row, column=column + offset, value=header)
            cell.font = self.header_font
            cell.fill = self.header_fill
            cell.alignment = Alignment(horizontal='center')
            cell.border = self.border

    def add_sweep(self, rows: List[Any], name: str = "Prime Sweep"):
        """SweepRow objects, Vatican rows highlighted"""
        ws = self._new_sheet(name)
        self._title_block(ws, f"{name}: {len(rows)} row(s)")

        headers = ["p", "ell", "best k", "rho", "r", "Vatican", "Quadruple"]
        self._header_row(ws, 4, headers)
        row = 5
        for sweep_row in rows:
            values = [sweep_row.p, sweep_row.ell, sweep_row.best_k, sweep_row.rho, sweep_row.r,
                      "yes" if sweep_row.vatican else "", sweep_row.quadruple()]
            for col, value in enumerate(values, start=1):
                cell = ws.cell(row=row, column=col, value=value)
                cell.border = self.border
                if sweep_row.vatican:
                    cell.fill = self.highlight_fill
            row += 1

        for col, width in zip('ABCDEFG', (8, 8, 10, 8, 8, 10, 24)):
            ws.column_dimensions[col].width = width

    def add_table_check(self, report: Dict[str, Any], name: str = "Table Checks"):
        """Categorized golden-table report: summary first, then every row"""
        ws = self._new_sheet(name)
        metadata = report.get('metadata', {})
        summary = report.get('summary', {})
        self._title_block(ws, f"{self.title} - {name}",
                          f"Tables {', '.join(metadata.get('tables', []))}, "
                          f"generated {metadata.get('generated', '')}")

        ws['A4'] = "Passed"
        ws['B4'] = summary.get('total_pass', 0)
        ws['A5'] = "Failed"
        ws['B5'] = summary.get('total_fail', 0)
        ws['A6'] = "Informational"
        ws['B6'] = summary.get('total_informational', 0)
        for cell in ('A4', 'A5', 'A6'):
            ws[cell].font = Font(bold=True)
        if summary.get('total_fail'):
            ws['B5'].font = Font(bold=True, color="C00000")

        row = 8
        self._header_row(ws, row, ["Table", "Key", "Status", "Published", "Recomputed", "Detail"])
        row += 1
        results = report.get('results', {})
        for bucket in ('fail', 'pass', 'informational'):
            for item in results.get(bucket, []):
                values = [item['table'], item['key'], item['status'], item['published'],
                          item['recomputed'], item['detail']]
                for col, value in enumerate(values, start=1):
                    cell = ws.cell(row=row, column=col, value=value)
                    cell.border = self.border
                status_cell = ws.cell(row=row, column=3)
                if item['status'] == 'FAIL':
                    status_cell.fill = self.fail_fill
                    status_cell.font = Font(color="C00000", bold=True)
                elif item['status'] == 'PASS':
                    status_cell.fill = self.pass_fill
                else:
                    status_cell.fill = self.highlight_fill
                row += 1

        for col, width in zip('ABCDEF', (12, 24, 10, 30, 30, 50)):
            ws.column_dimensions[col].width = width
