from .loader import build_run_config, load_run_config, parse_config_text

__all__ = ["build_run_config", "load_run_config", "parse_config_text"]
