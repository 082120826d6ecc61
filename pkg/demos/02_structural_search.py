"""
Structural matching with complementary parameters
=================================================

Some parameter symbols come in pairs (think of a value and its inverse, or
the two ends of a bond).  A renaming must then keep pairs together: if x
maps to y, x's partner must map to y's partner.
"""

from pbwt import AlphabetSpec, SIndex

spec = AlphabetSpec("ABC", "wxyz", [("x", "w"), ("y", "z")])

for text in ("AzByCz", "AzBxCz"):
    ix = SIndex.build(text + "$", spec)
    print(f"{text}: AxBwCx found at {ix.find('AxBwCx')}")

###############################################################################
# In AzByCz, the renaming x->z, w->y keeps the pair (x, w) on the pair
# (z, y).  In AzBxCz, w would have to map to x, which is not z's partner.
#
# Without any pairs the structural index answers the same queries as the
# parameterized one.

plain = AlphabetSpec("ABC", "wxyz")
ix = SIndex.build("AyBxCyAwBxCzxyAzBwCz$", plain)
print("unpaired:", ix.find("AxByCx"))
