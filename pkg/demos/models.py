"""Run the queries of every model file through the command-line front end."""
from pathlib import Path

from wconn.cli import main

for path in sorted((Path(__file__).parent / "models").glob("*.wconn")):
    print(f"== {path.name}")
    main(["run", str(path)])
    print()
