# File: src/utils/digit_io.py
"""
Reading and writing digit streams, pattern lists and analysis tables
"""

import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from agents.emission_agent import DigitStream
from arith.rational_core import CfWord, as_word


def format_digits(digits: Sequence[int], kind: str) -> str:
    """cf: one integer per line; base <= 10: contiguous characters; larger bases: comma separated"""
    if kind == "cf":
        return "\n".join(str(d) for d in digits)
    if int(kind) <= 10:
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def format_stream(stream: DigitStream) -> str:
    if stream.kind == "cf":
        if stream.target == "one_over_x":
            # integer part first, as in [1; a_2, a_3, ...]
            return "\n".join([str(stream.integer_part), format_digits(stream.digits, "cf")]).rstrip("\n")
        return format_digits(stream.digits, "cf")
    separator = "." if int(stream.kind) <= 10 else ";"
    return f"{stream.integer_part}{separator}{format_digits(stream.digits, stream.kind)}"


def parse_cf_digits(text: str) -> CfWord:
    """Whitespace- or comma-separated positive integers; '#' starts a comment"""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(token for token in line.replace(",", " ").split() if token)
    return as_word(int(token) for token in tokens)


def parse_bary_digits(text: str, base: int) -> Tuple[int, ...]:
    """Contiguous digit characters for base <= 10, comma-separated integers otherwise"""
    body = "".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    for separator in (".", ";"):
        if separator in body:
            body = body.split(separator, 1)[1]
            break
    if base > 10 or "," in body:
        digits = tuple(int(token) for token in body.replace(";", ",").split(",") if token.strip())
    else:
        digits = tuple(int(ch) for ch in body if not ch.isspace())
    for position, digit in enumerate(digits, start=1):
        if not 0 <= digit < base:
            raise ValueError(f"digit {digit} at position {position} is not a base-{base} digit")
    return digits


def parse_patterns(text: str) -> List[CfWord]:
    """One pattern per line, digits separated by spaces or commas"""
    patterns = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if line:
            patterns.append(as_word(int(token) for token in line.split()))
    if not patterns:
        raise ValueError("pattern list is empty")
    return patterns


def read_text(path: Union[str, Path]) -> str:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def write_rows(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    print(f"💾 Wrote {path}")
    return path
