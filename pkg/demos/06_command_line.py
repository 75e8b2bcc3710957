"""
The command line tool
=====================

Everything above is also available as ``python -m causalpaths`` (or the
``causalpaths`` script) on plain-text graph and knowledge files.
"""

import tempfile
from pathlib import Path

from causalpaths.cli import main

work = Path(tempfile.mkdtemp())
(work / "dag.txt").write_text("graph dag 3\nX Y Z\nX -> Y\nY -> Z\n")
(work / "k.txt").write_text("X !=> Z\n")
(work / "bad.txt").write_text("X => Z u=2 c=0\nX !=> Z u=1 c=0\n")

# DAG to PAG, then knowledge on top.
pag = work / "pag.txt"
with open(pag, "w") as out:
    main(["convert", str(work / "dag.txt"), "--to", "pag"], out)
print(pag.read_text())

code = main(["incorporate", str(pag), str(work / "k.txt")])
print("exit status", code)

# Contradictory knowledge: incorporate fails with status 1, select resolves it.
print("exit status", main(["incorporate", str(pag), str(work / "bad.txt")]))
main(["select", str(pag), str(work / "bad.txt")])
