"""
Singular fibres and Mordell-Weil sections
=========================================

Run Tate's algorithm over Q(T) on one of the catalogued surfaces, then lift
the listed sections and look at their height pairing.
"""

from ellsurf.catalog import get_surface
from ellsurf.kodaira import shioda_tate_ns_rank
from ellsurf.mordell_weil import EllipticSurface, catalog_sections, torsion_order

entry = get_surface("9,1")
S = EllipticSurface.from_entry(entry)
an = S.analysis

# fibre types with the size of each Galois orbit of places
for fd in an.fibers:
    print(f"{str(fd.place):>24}  {fd.symbol:<5} components={fd.m_t} euler={fd.e_t}")
print("euler total:", an.euler_total, " (24 means K3)")

# torsion is bounded by specialising T and counting mod small primes
print("torsion:", torsion_order(S).order)

# sections over Q and over the quadratic fields listed for this surface
rat = catalog_sections(S, entry)
full = catalog_sections(S, entry, geometric=True)
G = S.gram(full)
for row in G:
    print("  ".join(f"{str(v):>7}" for v in row))
print("regulator:", S.regulator(full))

# Shioda-Tate then gives a lower bound for the Picard number
print("rho >=", shioda_tate_ns_rank(an, len(full)))
