#!/usr/bin/env python3
"""Generate src/unicode_tables.inc: code point class ranges used by the o200k splitter.

Classes are taken from the `regex` module so that the C++ splitter and the
reference engine used for the conformance fixture agree on every code point.
"""
import sys

import regex

CLASSES = [
    ("kLu", r"\p{Lu}"),
    ("kLl", r"\p{Ll}"),
    ("kLt", r"\p{Lt}"),
    ("kLm", r"\p{Lm}"),
    ("kLo", r"\p{Lo}"),
    ("kMark", r"\p{M}"),
    ("kNumber", r"\p{N}"),
    ("kSpace", r"\s"),
]


def classify(cp):
    ch = chr(cp)
    for name, pat in COMPILED:
        if pat.fullmatch(ch):
            return name
    return None


COMPILED = [(n, regex.compile(p)) for n, p in CLASSES]


def main(out_path):
    ranges = []
    cur = None
    for cp in range(0x80, 0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            cls = None
        else:
            cls = classify(cp)
        if cur and cur[2] == cls and cur[1] == cp - 1:
            cur[1] = cp
        else:
            if cur and cur[2] is not None:
                ranges.append(tuple(cur))
            cur = [cp, cp, cls]
    if cur and cur[2] is not None:
        ranges.append(tuple(cur))
    ascii_cls = [classify(cp) or "kOther" for cp in range(0x80)]
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("// Generated by scripts/gen_unicode_tables.py from the Python `regex` module")
        f.write(f" (regex {regex.__version__}). Do not edit.\n\n")
        f.write("constexpr CharClass kAsciiClass[128] = {\n")
        for i in range(0, 128, 8):
            f.write("    " + ", ".join(f"CharClass::{c}" for c in ascii_cls[i:i + 8]) + ",\n")
        f.write("};\n\n")
        f.write(f"constexpr ClassRange kClassRanges[{len(ranges)}] = {{\n")
        for lo, hi, cls in ranges:
            f.write(f"    {{0x{lo:X}, 0x{hi:X}, CharClass::{cls}}},\n")
        f.write("};\n")
    print(f"wrote {len(ranges)} ranges to {out_path}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
