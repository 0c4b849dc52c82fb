import os
import sys

# the CLI's process pool is exercised explicitly in test_cli; keep the rest serial
os.environ.setdefault("DUALPAIRS_WORKERS", "1")
sys.setrecursionlimit(max(sys.getrecursionlimit(), 5000))
