from openpyxl import load_workbook

from constructions import walecki
from designs import balance_report, latin_square_of
from excel_exporter import ExcelExporter
from golden_tables import compare_tables
from html_renderer import ReportRenderer, render_report
from search import sweep_primes


def test_design_sheet(tmp_path):
    design = latin_square_of(walecki(6))
    report = balance_report(design)
    exporter = ExcelExporter()
    exporter.add_design(design, report)
    exporter.add_design(design, report)
    path = exporter.export(str(tmp_path / "design.xlsx"))

    wb = load_workbook(path)
    assert wb.sheetnames == ["Design", "Design 2"]
    ws = wb["Design"]
    assert ws["A4"].value == "Subject"
    assert ws["A5"].value == 1
    assert ws["B5"].value == 0
    assert ws["C5"].value == 5
    assert ws["I4"].value == "CARRY-OVER BALANCE"
    assert ws["J5"].value == 6
    assert ws["J8"].value == 1


def test_described_design_shifts_down(tmp_path):
    design = latin_square_of(walecki(6))
    exporter = ExcelExporter()
    exporter.add_design(design, name="Walecki", description=["(0,5,1,4,2,3)"])
    wb = load_workbook(exporter.export(str(tmp_path / "described.xlsx")))
    ws = wb["Walecki"]
    assert ws["A4"].value == "(0,5,1,4,2,3)"
    assert ws["A6"].value == "Subject"
    assert ws["B7"].value == 0


def test_sweep_and_table_sheets(tmp_path):
    exporter = ExcelExporter()
    exporter.add_sweep(sweep_primes(5, 13), name="Sweep")
    exporter.add_table_check(compare_tables(['5']))
    wb = load_workbook(exporter.export(str(tmp_path / "mixed.xlsx")))

    sweep = wb["Sweep"]
    assert [sweep.cell(row=5, column=c).value for c in range(1, 8)] == [5, 2, 4, 3, 4, "yes", "(2,4,3,4)"]
    checks = wb["Table Checks"]
    assert checks["B4"].value == 3
    assert checks["B5"].value == 0


def test_empty_workbook_gets_a_summary_sheet(tmp_path):
    wb = load_workbook(ExcelExporter().export(str(tmp_path / "empty.xlsx")))
    assert wb.sheetnames == ["Summary"]


def test_html_report(tmp_path):
    report = compare_tables(['5'])
    path = render_report(report, str(tmp_path / "sub" / "report.html"))
    page = open(path).read()
    assert "Reproduced" in page
    assert "Z5 ell=3" in page
    assert '<div class="section-title">' in page
    assert "wave" not in page


def test_html_mismatch_and_design_only():
    report = {
        'metadata': {'tables': ['5'], 'budget_exhausted': False},
        'results': {'pass': [], 'informational': [],
                    'fail': [{'table': '5', 'key': 'Z5 ell=3', 'status': 'FAIL',
                              'published': '(0,1,2,3,4)', 'recomputed': 'k=0', 'detail': 'not a Vatican triple'}]},
        'summary': {'total_pass': 0, 'total_fail': 1, 'total_informational': 0,
                    'per_table': {'5': {'PASS': 0, 'FAIL': 1, 'INFO': 0}}},
    }
    page = ReportRenderer(report).render()
    assert "Mismatch" in page
    assert "not a Vatican triple" in page

    design = latin_square_of(walecki(6))
    page = ReportRenderer(design=design, balance=balance_report(design)).render()
    assert "Roman-1" in page
    assert "M_2" in page
    assert "Failures" not in page
