from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from errors import OutputError
from utils import now_local

TABLE_STYLE = TableStyle([
    ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#3B82F6')),
    ('TEXTCOLOR', (0, 0), (-1, 0), colors.whitesmoke),
    ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
    ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
    ('FONTSIZE', (0, 0), (-1, 0), 11),
    ('FONTSIZE', (0, 1), (-1, -1), 9),
    ('BOTTOMPADDING', (0, 0), (-1, 0), 10),
    ('BACKGROUND', (0, 1), (-1, -1), colors.beige),
    ('GRID', (0, 0), (-1, -1), 1, colors.black)
])


def _format(value):
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def _table(header, rows):
    table = Table([list(header)] + [[_format(c) for c in row] for row in rows],
                  colWidths=[3 * inch, 3 * inch])
    table.setStyle(TABLE_STYLE)
    return table


def build_pdf_content(title, config, result, timezone='UTC'):
    """Title, configuration table and result table"""
    content = []
    styles = getSampleStyleSheet()

    title_style = ParagraphStyle(
        'ReportTitle',
        parent=styles['Heading1'],
        fontSize=22,
        textColor=colors.HexColor('#1E40AF'),
        alignment=TA_CENTER,
        spaceAfter=24
    )
    subtitle_style = ParagraphStyle(
        'ReportSubtitle',
        parent=styles['Heading2'],
        fontSize=14,
        textColor=colors.HexColor('#374151'),
        spaceAfter=12
    )

    content.append(Paragraph(title, title_style))
    content.append(Paragraph("ringflux", styles['Normal']))
    content.append(Spacer(1, 20))

    content.append(Paragraph("Results", subtitle_style))
    content.append(_table(['Quantity', 'Value'], sorted(result.items())))
    content.append(Spacer(1, 24))

    content.append(Paragraph("Configuration", subtitle_style))
    settings = [(f'{section}.{key}', value)
                for section, values in sorted(config.items())
                for key, value in sorted(values.items())]
    content.append(_table(['Setting', 'Value'], settings))
    content.append(Spacer(1, 24))

    now = now_local(timezone)
    content.append(Paragraph(
        f"Generated by ringflux on {now.strftime('%Y-%m-%d %H:%M %Z')}",
        ParagraphStyle(
            'Footer',
            parent=styles['Normal'],
            fontSize=8,
            textColor=colors.grey,
            alignment=TA_CENTER
        )
    ))
    return content


def export_pdf(path, title, config, result, timezone='UTC'):
    doc = SimpleDocTemplate(
        str(path),
        pagesize=A4,
        rightMargin=72,
        leftMargin=72,
        topMargin=72,
        bottomMargin=18
    )
    try:
        doc.build(build_pdf_content(title, config, result, timezone))
    except OSError as exc:
        raise OutputError(path, exc.strerror or exc) from exc
