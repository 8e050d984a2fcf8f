from . import simulate, trace, verify

__all__ = ['simulate', 'trace', 'verify']
