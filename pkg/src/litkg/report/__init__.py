from .figures import clustering_distribution_figure, degree_histogram_figure, ranking_figure
from .html import emit_html_view, force_layout
from .tables import (
    emit_figure_tables,
    write_classification_csv,
    write_coverage_csv,
    write_metrics_json,
    write_ranking_csv,
    write_ranking_json,
)

__all__ = [
    "clustering_distribution_figure",
    "degree_histogram_figure",
    "ranking_figure",
    "emit_html_view",
    "force_layout",
    "emit_figure_tables",
    "write_classification_csv",
    "write_coverage_csv",
    "write_metrics_json",
    "write_ranking_csv",
    "write_ranking_json",
]
