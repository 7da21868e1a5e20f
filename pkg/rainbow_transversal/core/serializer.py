from pathlib import Path
from typing import List, Optional
from pydantic import TypeAdapter, ValidationError
from ..configs.logger import logging
from ..models import LatinArray, RainbowMatching, MatchedEdge, PairFile

VERDICT_PREFIX = "RAINBOW-PERFECT:"

_EDGE_LIST = TypeAdapter(List[MatchedEdge])


def parse_latin(text: str) -> LatinArray:
    """
    Read the plain text format: a header line "n k" followed by n lines of n
    space-separated colour ids in [0, k).
    """
    lines = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise ValueError("[PARSE] Empty input.")
    header = lines[0]
    if len(header) != 2:
        raise ValueError(f"[PARSE] Malformed header {' '.join(header)!r}; expected 'n k'.")
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"[PARSE] Malformed header {' '.join(header)!r}; n and k must be integers.")
    if n < 1 or k < 1:
        raise ValueError(f"[PARSE] Header values must be positive, got n={n}, k={k}.")
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"[PARSE] Expected {n} rows, found {len(body)}.")
    grid = []
    for r, tokens in enumerate(body):
        if len(tokens) != n:
            raise ValueError(f"[PARSE] Ragged row {r}: expected {n} entries, found {len(tokens)}.")
        try:
            row = [int(token) for token in tokens]
        except ValueError:
            raise ValueError(f"[PARSE] Row {r} contains a non-integer entry.")
        for c, colour in enumerate(row):
            if not 0 <= colour < k:
                raise ValueError(f"[PARSE] Colour id {colour} at ({r}, {c}) outside [0, {k}).")
        grid.append(row)
    return LatinArray(n=n, k=k, grid=grid)


def serialize_latin(array: LatinArray) -> str:
    rows = [" ".join(str(colour) for colour in row) for row in array.grid]
    return f"{array.n} {array.k}\n" + "\n".join(rows) + "\n"


def serialize_matching(matching: RainbowMatching, perfect: bool) -> str:
    body = _EDGE_LIST.dump_json(matching.edges, indent=2).decode("utf-8")
    return f"{body}\n{VERDICT_PREFIX} {'yes' if perfect else 'no'}\n"


def parse_matching(text: str) -> RainbowMatching:
    lines = text.strip().splitlines()
    while lines and lines[-1].strip().startswith(VERDICT_PREFIX):
        lines.pop()
    try:
        edges = _EDGE_LIST.validate_json("\n".join(lines) or "[]")
    except ValidationError as e:
        raise ValueError(f"[PARSE MATCHING] Invalid matching records --> {e}")
    return RainbowMatching(edges=edges)


def read_verdict(text: str) -> Optional[bool]:
    for line in reversed(text.strip().splitlines()):
        if line.strip().startswith(VERDICT_PREFIX):
            return line.split(":", 1)[1].strip() == "yes"
    return None


def serialize_pair(pair: PairFile) -> str:
    return pair.model_dump_json(indent=2) + "\n"


def parse_pair(text: str) -> PairFile:
    try:
        return PairFile.model_validate_json(text)
    except ValidationError as e:
        raise ValueError(f"[PARSE PAIR] Invalid robust-pair file --> {e}")


def read_latin(path: str) -> LatinArray:
    file_path = Path(path)
    if not file_path.is_file():
        raise ValueError(f"[READ LATIN] The file {path} does not exist.")
    logging.info(f"[READ LATIN] Reading Latin array from {path}.")
    return parse_latin(file_path.read_text(encoding="utf-8"))


def read_text(path: str, tag: str) -> str:
    file_path = Path(path)
    if not file_path.is_file():
        raise ValueError(f"[{tag}] The file {path} does not exist.")
    return file_path.read_text(encoding="utf-8")


def write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise ValueError(f"[WRITE] Could not write {path} --> {e}")
