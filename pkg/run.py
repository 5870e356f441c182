#!/usr/bin/env python
"""
Run script for the fusion stock picking and timing toolkit
This is a simple script to launch the command line from any directory
"""

import os
import sys


def main():
    # Make sure Python can find all our modules regardless of the caller's cwd
    script_dir = os.path.dirname(os.path.abspath(__file__))
    sys.path.insert(0, script_dir)

    try:
        from main import main as fusion_main
    except ImportError as e:
        print(f"Error importing toolkit modules: {e}", file=sys.stderr)
        print("Make sure all required packages are installed.", file=sys.stderr)
        print("Try running: pip install -r requirements.txt", file=sys.stderr)
        return 1
    return fusion_main()


if __name__ == "__main__":
    sys.exit(main())
