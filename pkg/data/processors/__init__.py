from .config_processor import ConfigProcessor, SCRSettings, load_config
from .csv_processor import CSVProcessor, config_hash

__all__ = ['ConfigProcessor', 'SCRSettings', 'load_config', 'CSVProcessor', 'config_hash']
