from io import BytesIO

import pandas as pd
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4, landscape
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import mm
from reportlab.platypus import PageBreak, Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from core.outputs import VERSION

TEXT_COLOR = colors.HexColor("#2f2b3a")
MUTED_COLOR = colors.HexColor("#6b6780")
GRID_COLOR = colors.HexColor("#e6def5")
HEADER_FILL = colors.HexColor("#efe9ff")
BAND_FILL = colors.HexColor("#f7f1fb")

STAR_NOTE = "*p<0.05; **p<0.01; ***p<0.001. Standard errors in parentheses."


def safe_text(value):
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return "-"
    text = str(value).strip()
    return text if text else "-"


def format_number(value):
    try:
        num = float(value)
    except (TypeError, ValueError):
        return safe_text(value)
    if pd.isna(num):
        return "-"
    if abs(num - round(num)) < 1e-9 and abs(num) >= 1:
        return f"{int(round(num)):,}"
    return f"{num:,.3f}"


def _styles():
    styles = getSampleStyleSheet()
    body = ParagraphStyle("Body", parent=styles["Normal"], fontSize=8, leading=10, textColor=TEXT_COLOR)
    muted = ParagraphStyle("Muted", parent=styles["Normal"], fontSize=8, textColor=MUTED_COLOR)
    section = ParagraphStyle(
        "Section",
        parent=styles["Heading3"],
        fontSize=11,
        textColor=TEXT_COLOR,
        spaceBefore=8,
        spaceAfter=4,
    )
    title = ParagraphStyle("Title", parent=styles["Heading2"], textColor=TEXT_COLOR)
    return body, muted, section, title


def _grid_table(header, rows, col_widths=None):
    table = Table([header, *rows], colWidths=col_widths, hAlign="LEFT", repeatRows=1)
    table.setStyle(
        TableStyle(
            [
                ("BACKGROUND", (0, 0), (-1, 0), HEADER_FILL),
                ("TEXTCOLOR", (0, 0), (-1, -1), TEXT_COLOR),
                ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
                ("FONTSIZE", (0, 0), (-1, -1), 8),
                ("GRID", (0, 0), (-1, -1), 0.25, GRID_COLOR),
                ("ALIGN", (1, 1), (-1, -1), "RIGHT"),
                ("VALIGN", (0, 0), (-1, -1), "MIDDLE"),
                ("ROWBACKGROUNDS", (0, 1), (-1, -1), [colors.white, BAND_FILL]),
            ]
        )
    )
    return table


def frame_table(frame: pd.DataFrame, *, index: bool = True, first_width=60 * mm):
    header = ([frame.index.name or ""] if index else []) + [str(column) for column in frame.columns]
    rows = []
    for label, row in frame.iterrows():
        cells = [format_number(value) if not isinstance(value, str) else value for value in row]
        rows.append(([safe_text(label)] if index else []) + cells)
    widths = None
    if index:
        widths = [first_width] + [None] * len(frame.columns)
    return _grid_table(header, rows, widths)


def build_report_pdf(
    descriptives_wide: pd.DataFrame,
    comparison: pd.DataFrame,
    summary: pd.DataFrame,
    *,
    title: str = "Moral framing of fundraising appeals",
) -> bytes:
    body, muted, section, title_style = _styles()
    buffer = BytesIO()
    doc = SimpleDocTemplate(
        buffer,
        pagesize=landscape(A4),
        leftMargin=15 * mm,
        rightMargin=15 * mm,
        topMargin=15 * mm,
        bottomMargin=15 * mm,
        title=title,
        invariant=1,
    )

    elements = [
        Paragraph(f"<b>{title}</b>", title_style),
        Paragraph(f"moralframe {VERSION}", muted),
        Spacer(1, 6),
        Paragraph("Dataset summary", section),
    ]
    summary_rows = [
        [safe_text(row.statistic), safe_text(row.level), format_number(row.value)]
        for row in summary.itertuples(index=False)
    ]
    elements.append(_grid_table(["Statistic", "Level", "Value"], summary_rows, [60 * mm, 50 * mm, 30 * mm]))

    elements.append(Paragraph("Descriptive statistics by category, mean (sd)", section))
    wide = descriptives_wide.copy()
    wide.index.name = "Variable"
    elements.append(frame_table(wide))

    elements.append(PageBreak())
    elements.append(Paragraph("Regression models", section))
    fits = comparison.copy()
    fits.index.name = "Term"
    elements.append(frame_table(fits))
    elements.append(Spacer(1, 4))
    elements.append(Paragraph(STAR_NOTE, muted))

    doc.build(elements)
    return buffer.getvalue()
