"""gpdkit: grupoides finitos, acciones autosimilares y fibrados de Fell verificados"""

__version__ = "1.0.0"
