#!/usr/bin/env python3
"""
Script de inicio para la CLI de gpdkit
"""

import sys
from pathlib import Path

# Agregar la raíz del proyecto al PYTHONPATH
sys.path.insert(0, str(Path(__file__).parent))

if __name__ == "__main__":
    from gpdkit.main_app import main
    sys.exit(main())
