"""
Simple startup script for markedgroups
Run this from the project root: python run.py COMMAND [ARGS]
"""
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from markedgroups.app import main

if __name__ == '__main__':
    sys.exit(main())
