from su11sim.utils.logging_config import JSONFormatter, setup_logging
from su11sim.utils.performance import Stopwatch, measure_time, memoize
from su11sim.utils.validators import parse_gamma_range, validate_json_file, validate_output_dir

__all__ = [
    "JSONFormatter",
    "setup_logging",
    "Stopwatch",
    "measure_time",
    "memoize",
    "parse_gamma_range",
    "validate_json_file",
    "validate_output_dir",
]
