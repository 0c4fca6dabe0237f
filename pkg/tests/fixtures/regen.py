"""Rewrite the corpus fixtures and golden enumeration files.

Run from the repository root: ``python tests/fixtures/regen.py``.
"""

import json
from pathlib import Path

from regmon import corpus
from regmon import serialize as S
from regmon.automaton import enumerate_members

HERE = Path(__file__).parent / "corpus"
BOUNDS = {"example13": (8, 4)}
DEFAULT = (6, 6)


def golden_lines(name: str) -> list[str]:
    g, w = BOUNDS.get(name, DEFAULT)
    members = enumerate_members(corpus.build(name).automaton, g, w)
    return [json.dumps(S.diagram_to_json(d)["slices"], ensure_ascii=False, separators=(",", ":"))
            for d in members]


def main() -> None:
    HERE.mkdir(exist_ok=True)
    for name in corpus.NAMES:
        (HERE / f"{name}.json").write_text(S.dumps(corpus.build(name).grammar) + "\n", encoding="utf-8")
        g, w = BOUNDS.get(name, DEFAULT)
        lines = golden_lines(name)
        header = f"# {name} members with at most {g} generators and width {w}: {len(lines)}"
        (HERE / f"{name}.golden").write_text("\n".join([header] + lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
