#!/usr/bin/env python3
"""
Launcher for the placer command line.
Runs from any working directory; arguments are passed through unchanged.
"""

import os
import sys
from pathlib import Path

if __name__ == "__main__":
    script_dir = Path(__file__).parent
    sys.path.insert(0, str(script_dir))

    try:
        from placer.harness.cli import main
    except Exception as e:
        print(f"ERROR: Failed to import placer: {e}", flush=True)
        import traceback
        traceback.print_exc()
        sys.exit(1)

    print(f"Working directory: {os.getcwd()}", flush=True)
    sys.exit(main(sys.argv[1:], prog="run_placer.py"))
