"""
forum_innovators test suite
"""

import sys
from pathlib import Path

# Run against the source tree without installing
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
