"""Enable running as: python -m paraxial_tomo"""

from paraxial_tomo.cli import app

if __name__ == "__main__":
    app()
