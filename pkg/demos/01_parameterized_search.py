"""
Finding code clones that differ only in variable names
======================================================

Two strings p-match when one turns into the other by consistently renaming
the parameter symbols.  Static symbols (keywords, operators) must agree.
"""

from pbwt import AlphabetSpec, PIndex, encode_text

# upper case letters are fixed, lower case letters are renamable
spec = AlphabetSpec("ABC", "wxyz")
text = "AyBxCyAwBxCzxyAzBwCz"

ix = PIndex.build(text, spec)

# "AxByCx" means: some variable, then another one, then the first again
print("occurrences of AxByCx:", ix.find("AxByCx"))
print("occurrences of AxByCy:", ix.find("AxByCy"))

###############################################################################
# The index never stores the text itself.  Extraction gives back the
# prev-encoded form: each parameter becomes the distance to its previous
# occurrence (0 for a first occurrence).

print("encoded text:", ix.extract(1, ix.n).format(spec))

###############################################################################
# Counting is a backward search over the pBWT.  The range of sorted
# suffixes it returns can be turned into positions with locate.

r = ix.backward_search(encode_text("AxBy", spec, terminate=False))
print("suffix range for AxBy:", r, "->", ix.locate(r))

###############################################################################
# Where does the space go?  Tiny texts are all overhead, so use a larger
# random one.

import numpy as np

rng = np.random.default_rng(0)
big = "".join(rng.choice(list("ABCwxyz"), 50_000)) + "$"
ix = PIndex.build(big, spec)
for part, bits in ix.space_breakdown().items():
    print(f"{part:>22}: {bits / ix.n:6.2f} bits per symbol")
print(f"{'total':>22}: {ix.size_in_bits() / ix.n:6.2f} bits per symbol")
