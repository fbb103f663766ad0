"""phonecam: finds the most uncommon points in field captures.

Captures arrive through a watched inbox directory or an HTTP upload, are
normalized to a 192x144 raster, segmented per HSI channel, scored by
segment rarity, and published as marked-up images plus a JSON report.
"""

__version__ = "0.1.0"

from .config import PipelineConfig, ServiceConfig, load_config
from .pipeline import Analysis, analyze_array, analyze_bytes, report_dict

__all__ = [
    "__version__",
    "Analysis",
    "PipelineConfig",
    "ServiceConfig",
    "analyze_array",
    "analyze_bytes",
    "load_config",
    "report_dict",
]
