"""
Scanning a stream against many parameterized patterns
=====================================================

A dictionary index walks the text once and reports, for every position,
which patterns p-match a window ending there.
"""

from pbwt import AlphabetSpec, PDictIndex

spec = AlphabetSpec("ABC", "wxyz")
patterns = ["AxByCx", "xy", "xx", "BxC"]
d = PDictIndex.build(patterns, spec)

text = "AyBxCyAwBxCzxyAzBwCz"
for end, pid in d.scan(text):
    start = end - len(patterns[pid - 1]) + 1
    print(f"{patterns[pid - 1]:>7} at {start:2d}..{end:2d}: {text[start - 1:end]}")

###############################################################################
# Patterns that are renamings of each other are rejected up front: they
# would be reported at exactly the same places.

try:
    PDictIndex.build(["xy", "zw"], spec)
except Exception as e:
    print(type(e).__name__, e)
