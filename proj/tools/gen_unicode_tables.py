#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from the Python unicodedata module.

Emits four sorted tables consumed by src/unicode.cpp:
  - combining classes (nonzero ccc only)
  - canonical decompositions (1 or 2 codepoints; Hangul is algorithmic)
  - primary composition pairs (exclusions already filtered out)
  - simple lowercase mappings (single-codepoint results only)

Run from the repo root:  python3 tools/gen_unicode_tables.py > src/unicode_tables.inc
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main() -> None:
    ccc_rows = []
    decomp_rows = []
    comp_rows = []
    lower_rows = []

    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)

        ccc = unicodedata.combining(ch)
        if ccc:
            ccc_rows.append((cp, ccc))

        if not is_hangul_syllable(cp):
            raw = unicodedata.decomposition(ch)
            if raw and not raw.startswith("<"):
                parts = [int(h, 16) for h in raw.split()]
                if len(parts) == 1:
                    decomp_rows.append((cp, parts[0], 0))
                elif len(parts) == 2:
                    a, b = parts
                    decomp_rows.append((cp, a, b))
                    # A pair is a primary composite iff NFC maps it back;
                    # this filters composition exclusions and non-starters.
                    if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                        comp_rows.append((a, b, cp))
                else:
                    raise ValueError(f"unexpected decomposition arity at U+{cp:04X}")

        low = ch.lower()
        if len(low) == 1 and low != ch:
            lower_rows.append((cp, ord(low)))

    comp_rows.sort()

    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py -- do not edit.\n")
    out.write(f"// Source: Python unicodedata, UCD {unicodedata.unidata_version}\n\n")

    out.write(f"static const CombiningRow kCombining[] = {{\n")
    for cp, ccc in ccc_rows:
        out.write(f"    {{0x{cp:04X}, {ccc}}},\n")
    out.write("};\n\n")

    out.write(f"static const DecompRow kDecomp[] = {{\n")
    for cp, a, b in decomp_rows:
        out.write(f"    {{0x{cp:04X}, 0x{a:04X}, 0x{b:04X}}},\n")
    out.write("};\n\n")

    out.write(f"static const CompRow kComp[] = {{\n")
    for a, b, cp in comp_rows:
        out.write(f"    {{0x{a:04X}, 0x{b:04X}, 0x{cp:04X}}},\n")
    out.write("};\n\n")

    out.write(f"static const LowerRow kLower[] = {{\n")
    for cp, lo in lower_rows:
        out.write(f"    {{0x{cp:04X}, 0x{lo:04X}}},\n")
    out.write("};\n")


if __name__ == "__main__":
    main()
