import sys
from pathlib import Path

# run from a checkout without installing
sys.path.insert(0, str(Path(__file__).parent))
