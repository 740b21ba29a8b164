"""
Runnable entry point for windowmsf:

    python driver.py run --structure conn --n 40 --input stream.txt
    python driver.py fuzz --structure conn-eager --n 40 --ops 2000 --seed 7
    python driver.py replay fuzz-conn-eager-n40-seed7
"""

import os
import sys

# Add the current directory to the Python path to ensure imports work correctly
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from windowmsf.main import main

if __name__ == "__main__":
    sys.exit(main())
