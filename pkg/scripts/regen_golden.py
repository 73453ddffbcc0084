"""Rewrite the CLI golden files under tests/golden/.

Run after an intentional change of output format, then review the diff.
"""

import io
import os
import sys

from tridouble.cli import run
from tridouble.census import enumerate_census

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "..", "tests", "golden")

FIG1 = "tri 2\n0 0 : 1 0 : 0 1 2 3\n0 1 : 1 1 : 0 1 2 3\n0 2 : 1 2 : 0 1 2 3\n0 3 : 1 3 : 0 1 2 3\n"

# (output name, argv); {path} is replaced by the input file
FIG1_CASES = [
    ("fig1_validate.txt", ["validate", "{path}"]),
    ("fig1_info.txt", ["info", "{path}"]),
    ("fig1_info.json", ["info", "{path}", "--format", "json"]),
    ("fig1_homology.json", ["homology", "{path}", "--format", "json"]),
    ("fig1_certify.json", ["certify", "{path}", "--format", "json"]),
    ("fig1_aut.json", ["aut", "{path}", "--format", "json"]),
]


def capture(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    if code:
        sys.exit(f"{argv} exited with {code}")
    return buf.getvalue()


def main():
    os.makedirs(os.path.join(GOLDEN, "n1"), exist_ok=True)
    fig1 = os.path.join(GOLDEN, "fig1.tri")
    with open(fig1, "w") as fh:
        fh.write(FIG1)
    for name, argv in FIG1_CASES:
        with open(os.path.join(GOLDEN, name), "w") as fh:
            fh.write(capture([a.format(path=fig1) for a in argv]))
    with open(os.path.join(GOLDEN, "census1.txt"), "w") as fh:
        fh.write(capture(["census", "1"]))
    with open(os.path.join(GOLDEN, "census1.json"), "w") as fh:
        fh.write(capture(["census", "1", "--format", "json"]))
    for i, cf in enumerate(enumerate_census(1)):
        tri = os.path.join(GOLDEN, "n1", f"member{i:02d}.tri")
        with open(tri, "w") as fh:
            fh.write(cf.signature)
        with open(os.path.join(GOLDEN, "n1", f"member{i:02d}_info.json"), "w") as fh:
            fh.write(capture(["info", tri, "--format", "json"]))


if __name__ == "__main__":
    main()
