"""Built-in static analyzers, one embedding per analyzer.

Each analyzer exposes a fixed feature universe (including a trailing
`parse_error` flag) and an ``analyze(text)`` returning a FeatureVector over
exactly that universe.  Unparseable files yield zeros plus parse_error=1,
except for text-based lint rules which still run.
"""

from fixscout.analyzers.lint import LintAnalyzer
from fixscout.analyzers.clsmetrics import MetricsAnalyzer
from fixscout.analyzers.graphfeat import GraphAnalyzer

PARSE_ERROR_FEATURE = "parse_error"


def default_analyzers() -> list:
    """The four embedding producers: strict lint, style lint, class metrics, graph measures."""
    return [
        LintAnalyzer(config="strict"),
        LintAnalyzer(config="style"),
        MetricsAnalyzer(),
        GraphAnalyzer(),
    ]


__all__ = ["LintAnalyzer", "MetricsAnalyzer", "GraphAnalyzer", "default_analyzers", "PARSE_ERROR_FEATURE"]
