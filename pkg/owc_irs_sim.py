#!/usr/bin/env python3
"""
IRS-aided OWC allocation simulator entry point
"""
import os
import sys

# Add src to Python path
sys.path.insert(0, str(os.path.dirname(os.path.abspath(__file__))))

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
