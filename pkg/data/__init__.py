# data/__init__.py
from .processors import CSVProcessor, ConfigProcessor

__all__ = ['CSVProcessor', 'ConfigProcessor']
