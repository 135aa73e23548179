from core.config import RunConfig, get_setting, load_run_config

__all__ = ["get_setting", "load_run_config", "RunConfig"]
