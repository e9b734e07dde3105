"""Entry point for running Scorealign as a module.

Usage:
    python -m scorealign [command] [options]

Example:
    python -m scorealign templates --synthetic --pitches 48-84 --instrument flute -o bank.json
    python -m scorealign align score.json take1.wav --bank bank.json
"""

from scorealign.cli import app

if __name__ == "__main__":
    app()
