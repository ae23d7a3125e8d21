from .report_writer import ReportWriter, write_report

__all__ = ["ReportWriter", "write_report"]
