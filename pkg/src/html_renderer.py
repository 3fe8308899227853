"""
HTML Report Renderer for the Vatican Designs Toolkit

Generates a self-contained HTML page from a categorized table-check report
(PASS / FAIL / informational), optionally followed by a design with its
carry-over balance.
"""

import html
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from designs import BalanceReport, Design


class ReportRenderer:
    """Renders a golden-table report (and optionally a design) to HTML"""

    def __init__(self, report: Optional[Dict[str, Any]] = None,
                 design: Optional[Design] = None,
                 balance: Optional[BalanceReport] = None,
                 title: str = "Vatican Designs Report"):
        self.report = report or {}
        self.design = design
        self.balance = balance
        self.title = title
        self.metadata = self.report.get('metadata') or {}
        self.results = self.report.get('results') or {}
        self.summary = self.report.get('summary') or {}

    def render(self) -> str:
        """Generate the complete page"""
        return f"""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>{html.escape(self.title)}</title>
    {self._render_styles()}
</head>
<body>
    <div class="container">
        {self._render_header()}
        {self._render_summary() if self.report else ""}
        {self._render_rows('fail', 'Failures', 'red') if self.report else ""}
        {self._render_rows('informational', 'Informational', 'yellow') if self.report else ""}
        {self._render_rows('pass', 'Passed', 'green') if self.report else ""}
        {self._render_design() if self.design is not None else ""}
        {self._render_footer()}
    </div>
</body>
</html>"""

    def _render_styles(self) -> str:
        return """<style>
        * { margin: 0; padding: 0; box-sizing: border-box; }
        body {
            font-family: 'IBM Plex Sans', -apple-system, BlinkMacSystemFont, 'Segoe UI', sans-serif;
            background: #f4f4f4;
            color: #161616;
            line-height: 1.6;
        }
        .container { max-width: 1400px; margin: 0 auto; padding: 20px; }
        .header {
            background: linear-gradient(135deg, #0f62fe 0%, #001d6c 100%);
            color: white;
            padding: 30px;
            border-radius: 8px;
            margin-bottom: 30px;
        }
        .header h1 { font-size: 2.2rem; margin-bottom: 10px; }
        .header .subtitle { font-size: 1.05rem; opacity: 0.9; }
        .section {
            background: white;
            border-radius: 8px;
            padding: 30px;
            margin-bottom: 30px;
            box-shadow: 0 2px 8px rgba(0,0,0,0.1);
        }
        .section-title { font-size: 1.5rem; font-weight: 600; margin-bottom: 20px; }
        .metric-grid {
            display: grid;
            grid-template-columns: repeat(auto-fit, minmax(220px, 1fr));
            gap: 20px;
        }
        .metric-card { background: #f4f4f4; border-radius: 8px; padding: 20px; }
        .metric-label { font-size: 0.85rem; color: #525252; text-transform: uppercase; }
        .metric-value { font-size: 2rem; font-weight: 600; }
        .status-badge {
            display: inline-block;
            padding: 2px 10px;
            border-radius: 12px;
            font-size: 0.85rem;
            font-weight: 600;
        }
        .status-green { background: #defbe6; color: #0e6027; }
        .status-yellow { background: #fcf4d6; color: #8e6a00; }
        .status-red { background: #fff1f1; color: #a2191f; }
        table { width: 100%; border-collapse: collapse; font-size: 0.9rem; }
        th { background: #1f4e78; color: white; padding: 8px; text-align: left; }
        td { padding: 6px 8px; border-bottom: 1px solid #e0e0e0; vertical-align: top; }
        td.mono, .design td { font-family: 'IBM Plex Mono', monospace; }
        .design td { text-align: center; padding: 2px 6px; }
        .over { background: #ffd7d9; font-weight: 600; }
        .footer { text-align: center; color: #525252; font-size: 0.85rem; padding: 20px; }
    </style>"""

    def _render_header(self) -> str:
        subtitle_lines = [
            f"Tables: {', '.join(self.metadata.get('tables', []))}" if self.metadata.get('tables') else None,
            f"Generated: {self._format_timestamp(self.metadata.get('generated', ''))}"
            if self.metadata.get('generated') else None,
            f"Elapsed: {self.metadata.get('elapsed_seconds')} s" if 'elapsed_seconds' in self.metadata else None,
            f"Design: {self.design.n} x {self.design.p}, t = {self.design.t}" if self.design is not None else None,
        ]
        subtitle_html = "<br>".join(line for line in subtitle_lines if line)
        return f"""<div class="header">
        <h1>{html.escape(self.title)}</h1>
        <div class="subtitle">{subtitle_html}</div>
    </div>"""

    def _render_summary(self) -> str:
        status = self._determine_overall_status()
        cards = [
            ("Overall", f"<span class='status-badge status-{status['color']}'>{status['text']}</span>",
             status['reason']),
            ("Passed", self.summary.get('total_pass', 0), "rows matching the published data"),
            ("Failed", self.summary.get('total_fail', 0), "rows that disagree"),
            ("Informational", self.summary.get('total_informational', 0), "unsettled or extra rows"),
        ]
        cards_html = "".join(f"""<div class="metric-card">
            <div class="metric-label">{label}</div>
            <div class="metric-value">{value}</div>
            <div class="metric-sublabel">{sub}</div>
        </div>""" for label, value, sub in cards)

        per_table = self.summary.get('per_table', {})
        rows_html = "".join(
            f"<tr><td>{html.escape(name)}</td><td>{counts.get('PASS', 0)}</td>"
            f"<td>{counts.get('FAIL', 0)}</td><td>{counts.get('INFO', 0)}</td></tr>"
            for name, counts in per_table.items()
        )
        return f"""<div class="section">
        <div class="section-title">📊 Summary</div>
        <div class="metric-grid">{cards_html}</div>
        <table style="margin-top: 25px;">
            <tr><th>Table</th><th>Pass</th><th>Fail</th><th>Info</th></tr>
            {rows_html}
        </table>
    </div>"""

    def _render_rows(self, bucket: str, title: str, color: str) -> str:
        items: List[Dict[str, Any]] = self.results.get(bucket, [])
        if not items:
            return ""
        rows_html = "".join(
            f"""<tr>
                <td>{html.escape(str(item['table']))}</td>
                <td>{html.escape(item['key'])}</td>
                <td><span class="status-badge status-{color}">{item['status']}</span></td>
                <td class="mono">{html.escape(item['published'])}</td>
                <td class="mono">{html.escape(item['recomputed'])}</td>
                <td>{html.escape(item['detail'])}</td>
            </tr>"""
            for item in items
        )
        return f"""<div class="section">
        <div class="section-title">{title} ({len(items)})</div>
        <table>
            <tr><th>Table</th><th>Key</th><th>Status</th><th>Published</th><th>Recomputed</th><th>Detail</th></tr>
            {rows_html}
        </table>
    </div>"""

    def _render_design(self) -> str:
        rows_html = "".join(
            "<tr>" + "".join(f"<td>{v}</td>" for v in row) + "</tr>"
            for row in self.design.rows.tolist()
        )
        balance_html = ""
        if self.balance is not None:
            b = self.balance
            cells = "".join(
                f"<td class='{'over' if m > b.threshold else ''}'>{m}</td>" for m in b.maxima
            )
            heads = "".join(f"<th>M_{i}</th>" for i in range(1, len(b.maxima) + 1))
            verdict = "Vatican" if b.vatican else (f"Roman-{b.max_k}" if b.roman else "not Roman")
            balance_html = f"""<p style="margin: 15px 0;"><strong>{verdict}</strong>
            (threshold n/t = {b.threshold:g}, max k = {b.max_k})</p>
        <table style="width: auto;"><tr>{heads}</tr><tr>{cells}</tr></table>"""

        return f"""<div class="section">
        <div class="section-title">🔍 Design</div>
        {balance_html}
        <table class="design" style="width: auto; margin-top: 20px;">{rows_html}</table>
    </div>"""

    def _render_footer(self) -> str:
        return f"""<div class="footer">
        Rendered {datetime.now().strftime('%Y-%m-%d %H:%M:%S')} | Vatican Designs Toolkit
    </div>"""

    def _determine_overall_status(self) -> Dict[str, str]:
        fails = self.summary.get('total_fail', 0)
        infos = self.summary.get('total_informational', 0)
        if fails:
            return {'color': 'red', 'text': 'Mismatch', 'reason': f'{fails} row(s) disagree'}
        if self.metadata.get('budget_exhausted'):
            return {'color': 'yellow', 'text': 'Unsettled', 'reason': 'a search ran out of budget'}
        if infos:
            return {'color': 'green', 'text': 'Reproduced', 'reason': f'{infos} informational row(s)'}
        return {'color': 'green', 'text': 'Reproduced', 'reason': 'every row matches'}

    def _format_timestamp(self, iso_string: str) -> str:
        try:
            return datetime.fromisoformat(iso_string).strftime('%Y-%m-%d %H:%M:%S')
        except ValueError:
            return iso_string


def render_report(report: Optional[Dict[str, Any]], output_path: str = "output/report.html",
                  design: Optional[Design] = None, balance: Optional[BalanceReport] = None) -> str:
    """
    Render a report to a file

    Args:
        report: categorized report from golden_tables.compare_tables (or None)
        output_path: Path for output HTML file
        design: optional design to append
        balance: its balance report

    Returns:
        Path to generated HTML file
    """
    renderer = ReportRenderer(report, design, balance)
    output_file = Path(output_path)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    with open(output_file, 'w') as f:
        f.write(renderer.render())
    return str(output_file)

